from __future__ import annotations

import logging

from orbitlab.numerics.fixed import CirclePoint, FixedPoint, NumericsError

logger = logging.getLogger(__name__)


def reduce_mantissa(mantissa: int, frac_bits: int) -> int:
    # остатък в (-half, half], при точно половина остава +0.5
    one = 1 << frac_bits
    r = mantissa & (one - 1)
    if r > one >> 1:
        r -= one
    return r


def reduce(x: FixedPoint) -> CirclePoint:
    """{x}: x minus its closest integer, in (-0.5, 0.5]."""
    return CirclePoint(reduce_mantissa(x.mantissa, x.frac_bits), x.frac_bits)


def circle_add(x: FixedPoint, y: FixedPoint) -> CirclePoint:
    return reduce(x + y)


def circle_sub(x: FixedPoint, y: FixedPoint) -> CirclePoint:
    return reduce(x - y)


def dist_to_zero(x: FixedPoint) -> FixedPoint:
    """||x||, the distance to the nearest integer, in [0, 0.5]."""
    return FixedPoint(abs(reduce_mantissa(x.mantissa, x.frac_bits)), x.frac_bits)


def ceil_log2(n: int) -> int:
    return (n - 1).bit_length() if n > 1 else 0


def precision_budget(steps: int, finest_scale: int, guard_bits: int = 32) -> int:
    """
    Smallest F with N * 2^-F <= 2^-g / t.

    N iterated circle additions with parameters rounded to 2^-F drift by at most
    N * 2^-F, so the orbit stays resolved at scale 1/t with g bits to spare.
    """
    if steps < 1 or finest_scale < 1:
        raise NumericsError("steps and finest_scale must be >= 1.")
    if guard_bits < 0:
        raise NumericsError("guard_bits must be >= 0.")

    frac_bits = guard_bits + ceil_log2(steps * finest_scale)
    logger.debug("precision budget N=%s t=%s g=%s -> F=%s", steps, finest_scale, guard_bits, frac_bits)
    return frac_bits
