from __future__ import annotations

import math
import re

from orbitlab.numerics.fixed import FixedPoint, NumericsError, round_shift

_SQRT_RE = re.compile(r"^sqrt\(\s*(\d+)\s*\)$")

MIN_FRAC_BITS = 8


def _guard(frac_bits: int) -> int:
    # всяко floor деление в редовете губи до 1 единица, затова пазим резерв
    return frac_bits.bit_length() + 24


def _arctan_inv(x: int, one: int) -> int:
    total = term = one // x
    x2 = x * x
    n = 1
    sign = -1
    while term:
        term //= x2
        n += 2
        total += sign * (term // n)
        sign = -sign
    return total


def pi_mantissa(frac_bits: int) -> int:
    work = frac_bits + _guard(frac_bits)
    one = 1 << work
    # Machin: pi = 16 atan(1/5) - 4 atan(1/239)
    value = 16 * _arctan_inv(5, one) - 4 * _arctan_inv(239, one)
    return round_shift(value, work - frac_bits)


def e_mantissa(frac_bits: int) -> int:
    work = frac_bits + _guard(frac_bits)
    term = total = 1 << work
    k = 1
    while term:
        term //= k
        total += term
        k += 1
    return round_shift(total, work - frac_bits)


def sqrt_mantissa(m: int, frac_bits: int) -> int:
    # isqrt на мащабирания квадрат, два бита отгоре за закръгляне
    root = math.isqrt(m << (2 * frac_bits + 2))
    return (root + 1) >> 1


def phi_mantissa(frac_bits: int) -> int:
    work = frac_bits + 4
    root5 = math.isqrt(5 << (2 * work))
    return round_shift(root5 + (1 << work), work - frac_bits + 1)


def eval_const(name: str, frac_bits: int, allow_square: bool = False) -> FixedPoint:
    """
    Evaluate pi, e, phi or sqrt(m) to within 2^-F.

    Perfect squares are refused for sqrt unless allow_square is set, because a
    rational parameter silently breaks the independence hypothesis.
    """
    if frac_bits < MIN_FRAC_BITS:
        raise NumericsError(f"frac_bits must be >= {MIN_FRAC_BITS}, got {frac_bits}.")

    key = name.strip().lower()
    if key == "pi":
        return FixedPoint(pi_mantissa(frac_bits), frac_bits)
    if key == "e":
        return FixedPoint(e_mantissa(frac_bits), frac_bits)
    if key == "phi":
        return FixedPoint(phi_mantissa(frac_bits), frac_bits)

    match = _SQRT_RE.match(key)
    if match:
        m = int(match.group(1))
        if m < 2:
            raise NumericsError(f"sqrt needs an integer m >= 2, got {m}.")
        if math.isqrt(m) ** 2 == m and not allow_square:
            raise NumericsError(f"sqrt({m}) is an integer; pass allow_square to use it anyway.")
        return FixedPoint(sqrt_mantissa(m, frac_bits), frac_bits)

    raise NumericsError(f"Unknown constant: {name!r}.")
