from __future__ import annotations

import logging
import random
from abc import ABC, abstractmethod
from collections.abc import Sequence

from orbitlab.extensions import LabError
from orbitlab.numerics.fixed import FixedPoint

logger = logging.getLogger(__name__)

Word = tuple[int, ...]

# |omega_i| расте двойно, над 2^62 спираме
MAX_STAGE_LENGTH = 1 << 62


class SequenceError(LabError):
    pass


# ====================== STREAMS ====================== #
class DigitStream(ABC):
    """Position-indexed digit source, digits are 1..k and positions start at 1."""

    kind = "custom"

    def __init__(self, spec: str = ""):
        self.spec = spec or self.kind

    @property
    def length(self) -> int | None:
        return None

    @abstractmethod
    def digit_at(self, n: int) -> int:
        ...

    def _check_position(self, n: int) -> None:
        if n < 1:
            raise SequenceError(f"Positions start at 1, got {n}.")
        if self.length is not None and n > self.length:
            raise SequenceError(f"{self.spec}: stream exhausted at position {n} (length {self.length}).")

    def prefix(self, n: int) -> list[int]:
        if n <= 0:
            return []
        self._check_position(n)
        return [self.digit_at(i) for i in range(1, n + 1)]

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.spec}>"


class ExplicitStream(DigitStream):
    kind = "explicit"

    def __init__(self, digits: Sequence[int], spec: str = "", kind: str | None = None):
        if kind:
            self.kind = kind
        super().__init__(spec)
        self.digits = tuple(digits)

    @property
    def length(self) -> int:
        return len(self.digits)

    def digit_at(self, n: int) -> int:
        self._check_position(n)
        return self.digits[n - 1]

    def prefix(self, n: int) -> list[int]:
        if n <= 0:
            return []
        self._check_position(n)
        return list(self.digits[:n])


class PeriodicStream(DigitStream):
    kind = "periodic"

    def __init__(self, period: Sequence[int], spec: str = ""):
        super().__init__(spec)
        if not period:
            raise SequenceError("Period must not be empty.")
        self.period = tuple(period)

    def digit_at(self, n: int) -> int:
        self._check_position(n)
        return self.period[(n - 1) % len(self.period)]

    def prefix(self, n: int) -> list[int]:
        p = len(self.period)
        return list(self.period * (n // p + 1))[:max(n, 0)]


def thue_morse_digit(n: int) -> int:
    """1 if popcount(n-1) is even, else 2 (a -> ab, b -> ba from a)."""
    if n < 1:
        raise SequenceError(f"Positions start at 1, got {n}.")
    return 1 if bin(n - 1).count("1") % 2 == 0 else 2


class ThueMorseStream(DigitStream):
    kind = "thue_morse"

    def digit_at(self, n: int) -> int:
        return thue_morse_digit(n)

    def prefix(self, n: int) -> list[int]:
        return [1 if bin(i).count("1") % 2 == 0 else 2 for i in range(max(n, 0))]


def sturmian_digit(theta: FixedPoint, rho: FixedPoint, n: int) -> int:
    """Mechanical word: 2 if floor((n+1)theta + rho) - floor(n theta + rho) = 1, else 1."""
    F = theta.frac_bits
    a, r = theta.mantissa, rho.mantissa
    step = (((n + 1) * a + r) >> F) - ((n * a + r) >> F)
    return 2 if step == 1 else 1


class SturmianStream(DigitStream):
    kind = "sturmian"

    def __init__(self, theta: FixedPoint, rho: FixedPoint, spec: str = ""):
        super().__init__(spec)
        if not (0 < theta.mantissa < theta.one):
            raise SequenceError(f"theta must lie in (0, 1), got {theta.to_decimal(12)}.")
        if rho.frac_bits != theta.frac_bits:
            rho = rho.rescale(theta.frac_bits)
        self.theta = theta
        self.rho = rho

    def digit_at(self, n: int) -> int:
        self._check_position(n)
        return sturmian_digit(self.theta, self.rho, n)

    def prefix(self, n: int) -> list[int]:
        F = self.theta.frac_bits
        a, r = self.theta.mantissa, self.rho.mantissa
        floors = [((i * a + r) >> F) for i in range(1, n + 2)]
        return [2 if floors[i + 1] - floors[i] == 1 else 1 for i in range(max(n, 0))]


# ====================== RECURRENT BUILDER ====================== #
class RecurrentBuilder:
    """
    Building words a_0, a_1, ... with omega_i = omega_{i-1} a_i omega_{i-1}.

    Stage lengths |omega_i|, word lengths l_i and prefix lengths
    L_i = |omega_{i-1}| + l_i are cached at construction. Word sources that are
    infinite in principle (cycling, random draws) are expanded only until the
    stage length passes MAX_STAGE_LENGTH, so the builder itself is immutable.
    """

    def __init__(self, words: Sequence[Sequence[int]], mode: str = "explicit", label: str = ""):
        words = [tuple(w) for w in words]
        if not words or not words[0]:
            raise SequenceError("The first building word a_0 must not be empty.")

        stage_lengths = [len(words[0])]
        for w in words[1:]:
            nxt = 2 * stage_lengths[-1] + len(w)
            if nxt > MAX_STAGE_LENGTH:
                if mode == "explicit":
                    raise SequenceError(f"Stage length overflows 2^62 at stage {len(stage_lengths)}.")
                break
            stage_lengths.append(nxt)

        self.words: tuple[Word, ...] = tuple(words[:len(stage_lengths)])
        self.word_lengths = tuple(len(w) for w in self.words)
        self.stage_lengths = tuple(stage_lengths)
        self.mode = mode
        self.label = label or mode

    # ---------- constructors ----------
    @classmethod
    def from_words(cls, words: Sequence[Sequence[int]]) -> RecurrentBuilder:
        return cls(words, mode="explicit")

    @classmethod
    def cycling(cls, word_set: Sequence[Sequence[int]]) -> RecurrentBuilder:
        word_set = [tuple(w) for w in word_set]
        return cls([word_set[i % len(word_set)] for i in range(64)], mode="cycle")

    @classmethod
    def random(cls, word_set: Sequence[Sequence[int]], rng: random.Random) -> RecurrentBuilder:
        # всички думи се теглят наведнъж от един генератор, после builder-а е immutable
        word_set = [tuple(w) for w in word_set]
        first = [w for w in word_set if w]
        if not first:
            raise SequenceError("Random builders need at least one nonempty word.")
        words = [rng.choice(first)] + [rng.choice(word_set) for _ in range(63)]
        return cls(words, mode="random")

    # ---------- schedule ----------
    @property
    def depth(self) -> int:
        return len(self.stage_lengths) - 1

    @property
    def finitely_recurrent(self) -> bool:
        return self.mode in ("cycle", "random")

    def prefix_length(self, i: int) -> int:
        """L_i = |omega_{i-1}| + l_i, the length of v_i = omega_{i-1} a_i."""
        if not 1 <= i <= self.depth:
            raise SequenceError(f"Stage {i} not available (depth {self.depth}).")
        return self.stage_lengths[i - 1] + self.word_lengths[i]

    def stage(self, i: int) -> list[int]:
        w = list(self.words[0])
        for j in range(1, i + 1):
            w = w + list(self.words[j]) + w
        return w

    def materialize(self, n: int) -> list[int]:
        if n > self.stage_lengths[-1]:
            raise SequenceError(f"Builder exhausted: {n} digits requested, {self.stage_lengths[-1]} available.")
        w = list(self.words[0])
        j = 0
        while len(w) < n:
            j += 1
            w = w + list(self.words[j]) + w
        return w[:n]


def recurrent_digit(builder: RecurrentBuilder, n: int) -> int:
    """omega(n) by descent through omega_i = omega_{i-1} a_i omega_{i-1}, O(depth)."""
    stages = builder.stage_lengths
    if n < 1:
        raise SequenceError(f"Positions start at 1, got {n}.")
    if n > stages[-1]:
        raise SequenceError(f"Builder exhausted at position {n} (available {stages[-1]}).")

    i = next(j for j, length in enumerate(stages) if length >= n)
    while i > 0:
        left = stages[i - 1]
        if n <= left:
            i -= 1
        elif n <= left + builder.word_lengths[i]:
            return builder.words[i][n - left - 1]
        else:
            n -= left + builder.word_lengths[i]
            i -= 1
    return builder.words[0][n - 1]


class RecurrentStream(DigitStream):
    kind = "recurrent"

    def __init__(self, builder: RecurrentBuilder, spec: str = ""):
        super().__init__(spec)
        self.builder = builder

    @property
    def length(self) -> int:
        return self.builder.stage_lengths[-1]

    def digit_at(self, n: int) -> int:
        return recurrent_digit(self.builder, n)

    def prefix(self, n: int) -> list[int]:
        return self.builder.materialize(max(n, 0)) if n > 0 else []
