from __future__ import annotations

from fractions import Fraction

from orbitlab.sequences.streams import DigitStream, SequenceError


def _window(s: DigitStream, window: int) -> bytes:
    digits = s.prefix(window)
    if any(d < 0 or d > 255 for d in digits):
        raise SequenceError("Window analyzers support digits 0..255 only.")
    return bytes(digits)


def _blocks(w: bytes, n: int) -> set[bytes]:
    return {w[i:i + n] for i in range(len(w) - n + 1)}


def complexity(s: DigitStream, n: int, window: int) -> int:
    """
    Distinct n-blocks starting in the first window - n + 1 positions.

    A lower bound for p_n; exact for uniformly recurrent streams once the
    window exceeds the recurrence gap plus n.
    """
    if not 1 <= n <= window:
        raise SequenceError(f"Need window >= n >= 1, got n={n}, window={window}.")
    return len(_blocks(_window(s, window), n))


def complexity_profile(s: DigitStream, n_max: int, window: int) -> list[int]:
    # един прозорец за всички n
    if not 1 <= n_max <= window:
        raise SequenceError(f"Need window >= n_max >= 1, got {n_max}, {window}.")
    w = _window(s, window)
    return [len(_blocks(w, n)) for n in range(1, n_max + 1)]


def linear_complexity_constant(s: DigitStream, n_max: int, window: int) -> float:
    """max p_n / n over 1..n_max, the C in p_n <= C n."""
    profile = complexity_profile(s, n_max, window)
    return max(p / n for n, p in enumerate(profile, start=1))


def sturmian_witness(s: DigitStream, n_max: int, window: int, k: int = 2) -> int | None:
    """Least n <= n_max with p_n <= n + k - 1, None when no such n shows up."""
    for n, p in enumerate(complexity_profile(s, n_max, window), start=1):
        if p <= n + k - 1:
            return n
    return None


def balance_defect(s: DigitStream, digit: int, n: int, window: int) -> int:
    """max - min count of `digit` over all length-n blocks of the window."""
    if not 1 <= n <= window:
        raise SequenceError(f"Need window >= n >= 1, got n={n}, window={window}.")
    w = s.prefix(window)
    count = sum(1 for d in w[:n] if d == digit)
    low = high = count
    for i in range(1, window - n + 1):
        count += (w[i + n - 1] == digit) - (w[i - 1] == digit)
        low = min(low, count)
        high = max(high, count)
    return high - low


def recurrence_gap(s: DigitStream, n: int, window: int) -> int | None:
    """Largest gap between consecutive occurrences of the n-prefix, None if it occurs once."""
    if n < 1 or window < 2 * n:
        raise SequenceError(f"Need window >= 2n and n >= 1, got n={n}, window={window}.")
    w = _window(s, window)
    head = w[:n]

    positions = []
    pos = w.find(head)
    while pos != -1:
        positions.append(pos)
        pos = w.find(head, pos + 1)

    if len(positions) < 2:
        return None
    return max(b - a for a, b in zip(positions, positions[1:]))


def eventual_period(s: DigitStream, window: int, max_period: int) -> tuple[int, int] | None:
    """
    (preperiod, period) if the window looks eventually periodic with period <= max_period.

    The period has to hold on at least the second half of the window, so a
    None answer only means nothing periodic was seen at this scale.
    """
    w = s.prefix(window)
    for p in range(1, max_period + 1):
        if window < 2 * p:
            break
        start = window
        while start - 1 >= p and w[start - 1] == w[start - 1 - p]:
            start -= 1
        preperiod = max(start - p, 0)
        if preperiod <= window // 2:
            return preperiod, p
    return None


def shift_distance(s1: DigitStream, s2: DigitStream, window: int) -> Fraction:
    """2^-n with n the first position where the streams differ, 0 if equal on the window."""
    a, b = s1.prefix(window), s2.prefix(window)
    for n, (x, y) in enumerate(zip(a, b), start=1):
        if x != y:
            return Fraction(1, 2**n)
    return Fraction(0)
