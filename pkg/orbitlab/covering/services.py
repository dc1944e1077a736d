from __future__ import annotations

import logging
import math

import numpy as np

from orbitlab.extensions import BudgetError, LabError
from orbitlab.models import CoverProfile, Orbit, Partition
from orbitlab.numerics.fixed import FixedPoint

logger = logging.getLogger(__name__)


class CoveringError(LabError):
    pass


def partition(t: int) -> Partition:
    if t < 1:
        raise CoveringError(f"t must be >= 1, got {t}.")
    return Partition(t)


def _index(mantissa: int, frac_bits: int, t: int) -> int:
    # floor((x + 0.5) t), x = 0.5 отива в последния интервал
    half = 1 << (frac_bits - 1)
    return min(((mantissa + half) * t) >> frac_bits, t - 1)


def interval_index(x: FixedPoint, t: int) -> int:
    if t < 1:
        raise CoveringError(f"t must be >= 1, got {t}.")
    return _index(x.mantissa, x.frac_bits, t)


def occupied(orbit: Orbit, t: int, start: int = 0) -> tuple[int, np.ndarray]:
    """Number of partition intervals hit by x_start..x_N, with the hit bitmap."""
    if t < 1:
        raise CoveringError(f"t must be >= 1, got {t}.")
    F = orbit.frac_bits
    half = 1 << (F - 1)
    last = t - 1

    hits = {((m + half) * t) >> F for m in orbit.mantissas[start:]}
    bitmap = np.zeros(t, dtype=bool)
    bitmap[[min(j, last) for j in hits]] = True

    if logger.isEnabledFor(logging.DEBUG):
        mask = (1 << F) - 1
        boundary = sum(1 for m in orbit.mantissas if ((m + half) * t) & mask == 0)
        if boundary:
            logger.debug("t=%s: %d point(s) on interval boundaries", t, boundary)

    return int(bitmap.sum()), bitmap


def min_cover(orbit: Orbit, t: int) -> int:
    """
    Fewest closed intervals of length 1/t, in any position, covering the sample.

    Greedy from the left on the sorted points is optimal on the line.
    """
    if t < 1:
        raise CoveringError(f"t must be >= 1, got {t}.")
    one = 1 << orbit.frac_bits
    pts = sorted(set(orbit.mantissas))

    count = 1
    start = pts[0]
    for m in pts[1:]:
        if (m - start) * t > one:
            count += 1
            start = m
    return count


def resolution_limit(steps: int) -> int:
    """sqrt(N) rounded up to a power of two; finer scales need --force."""
    root = math.isqrt(max(steps, 1))
    if root * root < steps:
        root += 1
    return 1 << (root - 1).bit_length() if root > 1 else 1


def box_dim_profile(orbit: Orbit, ladder, force: bool = False) -> CoverProfile:
    ladder = tuple(int(t) for t in ladder)
    if not ladder:
        raise CoveringError("Scale ladder is empty.")
    if ladder[0] < 1 or any(b <= a for a, b in zip(ladder, ladder[1:])):
        raise CoveringError(f"Scale ladder must be increasing and positive, got {list(ladder)}.")

    limit = resolution_limit(orbit.length)
    if ladder[-1] > limit:
        if not force:
            raise BudgetError(
                f"t={ladder[-1]} exceeds the resolution guard {limit} for N={orbit.length} (use --force)."
            )
        logger.warning("resolution guard overridden: t=%s > %s at N=%s", ladder[-1], limit, orbit.length)

    counts = tuple(occupied(orbit, t)[0] for t in ladder)
    t_arr = np.log(np.asarray(ladder, dtype=float))
    c_arr = np.log(np.asarray(counts, dtype=float))
    slopes = tuple(float(s) for s in np.diff(c_arr) / np.diff(t_arr))

    profile = CoverProfile(
        ladder=ladder,
        counts=counts,
        slopes=slopes,
        steps=orbit.length,
        frac_bits=orbit.frac_bits,
        resolution_limit=limit,
        forced=force and ladder[-1] > limit,
    )
    logger.info("box profile: min slope %.4f, max slope %.4f", profile.min_slope, profile.max_slope)
    return profile
