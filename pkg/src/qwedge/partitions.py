"""Integer partitions: enumeration, Frobenius coordinates, hook-power sums, q-brackets.

Partitions are tuples of weakly decreasing positive ints; () is the empty partition.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterator

from .series import QSeries, euler_product

Partition = tuple[int, ...]


def partitions_of(n: int, max_part: int | None = None) -> Iterator[Partition]:
    """All partitions of n in lexicographically descending order."""
    if n < 0:
        return
    if n == 0:
        yield ()
        return
    top = n if max_part is None else min(n, max_part)
    for first in range(top, 0, -1):
        for rest in partitions_of(n - first, first):
            yield (first,) + rest


def partitions_up_to(n: int) -> Iterator[Partition]:
    """All partitions of every size 0..n, sizes ascending."""
    for m in range(n + 1):
        yield from partitions_of(m)


@lru_cache(maxsize=None)
def partition_count(n: int) -> int:
    """p(n) by the pentagonal-number recurrence."""
    if n < 0:
        return 0
    if n == 0:
        return 1
    total = 0
    k = 1
    while True:
        g1 = k * (3 * k - 1) // 2
        g2 = k * (3 * k + 1) // 2
        if g1 > n:
            break
        sign = -1 if k % 2 == 0 else 1
        total += sign * partition_count(n - g1)
        if g2 <= n:
            total += sign * partition_count(n - g2)
        k += 1
    return total


def transpose(lam: Partition) -> Partition:
    if not lam:
        return ()
    return tuple(sum(1 for part in lam if part > i) for i in range(lam[0]))


def frobenius(lam: Partition) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Arm/leg coordinates (m_1 > m_2 > ... | n_1 > n_2 > ...) along the diagonal:
    m_i = lam_i - i, n_i = lam'_i - i (1-indexed), for i up to the diagonal length.
    """
    lamt = transpose(lam)
    d = 0
    while d < len(lam) and lam[d] > d:
        d += 1
    arms = tuple(lam[i] - (i + 1) for i in range(d))
    legs = tuple(lamt[i] - (i + 1) for i in range(d))
    return arms, legs


def from_frobenius(arms: tuple[int, ...], legs: tuple[int, ...]) -> Partition:
    d = len(arms)
    if d != len(legs):
        raise ValueError("arm and leg lists must have equal length")
    rows = [arms[i] + (i + 1) for i in range(d)]
    # row i+1..: cells strictly below the diagonal, read off the legs
    cols = [legs[i] + (i + 1) for i in range(d)]
    extra: list[int] = []
    for r in range(d, max(cols, default=0)):
        width = sum(1 for c in cols if c > r)
        if width:
            extra.append(width)
    return tuple(rows) + tuple(extra)


def hook_power_sum(lam: Partition, r: int) -> Fraction:
    """p_r(lam) = sum_i (m_i + 1/2)^r + (-1)^{r+1} (n_i + 1/2)^r over Frobenius pairs.

    Computed in scaled integers: (2m+1)^r +/- (2n+1)^r over 2^r.
    """
    arms, legs = frobenius(lam)
    sign = 1 if r % 2 == 1 else -1
    total = 0
    for m, n in zip(arms, legs):
        total += (2 * m + 1) ** r + sign * (2 * n + 1) ** r
    return Fraction(total, 2 ** r)


def weight_zero(lam: Partition) -> Fraction:
    """p_0(lam) = 0 for every partition (arm and leg counts agree)."""
    return Fraction(0)


def q_bracket(f: Callable[[Partition], Fraction], order: int) -> QSeries:
    """<f>_q = (q;q)_inf * sum_lam f(lam) q^{|lam|}, truncated at `order`."""
    coeffs = [Fraction(0)] * (order + 1)
    for n in range(order + 1):
        for lam in partitions_of(n):
            coeffs[n] += f(lam)
    raw = QSeries.from_coeffs(coeffs)
    return raw * euler_product(order)
