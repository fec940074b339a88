"""Set partitions and ordered set partitions of {1..n}, with the sign conventions
and special families used by the correlation-function expansions.

Blocks are tuples of sorted ints; a set partition is a tuple of blocks ordered by
smallest element; an ordered set partition (composition) is a tuple of blocks in
a significant order.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Iterator

from .reports import Report

Block = tuple[int, ...]
SetPartition = tuple[Block, ...]


def set_partitions(items: tuple[int, ...]) -> Iterator[SetPartition]:
    """All set partitions, blocks canonically ordered by minimum element.

    Enumerated by restricted-growth strings, so the empty tuple yields the empty
    partition exactly once and block order needs no postprocessing.
    """
    n = len(items)
    if n == 0:
        yield ()
        return
    rgs = [0] * n

    def rec(i: int, maxval: int) -> Iterator[SetPartition]:
        if i == n:
            blocks: list[list[int]] = [[] for _ in range(maxval + 1)]
            for j, b in enumerate(rgs):
                blocks[b].append(items[j])
            yield tuple(tuple(b) for b in blocks)
            return
        for v in range(maxval + 2):
            rgs[i] = v
            yield from rec(i + 1, max(maxval, v))

    yield from rec(1, 0)


def compositions(items: tuple[int, ...]) -> Iterator[tuple[Block, ...]]:
    """Ordered set partitions: every set partition times every ordering of its blocks."""
    for sp in set_partitions(items):
        yield from itertools.permutations(sp)


def sign(n: int, num_blocks: int) -> int:
    """(-1)^{n + number of blocks}."""
    return -1 if (n + num_blocks) % 2 else 1


def bell_number(n: int) -> int:
    row = [1]
    for _ in range(n):
        new = [row[-1]]
        for x in row:
            new.append(new[-1] + x)
        row = new
    return row[0]


def fubini_number(n: int) -> int:
    """Number of ordered set partitions of an n-set."""
    return sum(
        math.factorial(k) * _stirling2(n, k) for k in range(n + 1)
    )


def _stirling2(n: int, k: int) -> int:
    if n == 0:
        return 1 if k == 0 else 0
    if k == 0 or k > n:
        return 0
    return k * _stirling2(n - 1, k) + _stirling2(n - 1, k - 1)


def near_singleton_partitions(items: tuple[int, ...]) -> Iterator[SetPartition]:
    """Set partitions with at most one non-singleton block, that block containing
    the smallest element.  For {1,2,3}: the all-singletons one, {12|3}, {13|2}, {123}.
    """
    n = len(items)
    if n == 0:
        yield ()
        return
    first, rest = items[0], items[1:]
    for mask_size in range(len(rest) + 1):
        for chosen in itertools.combinations(rest, mask_size):
            big = (first,) + chosen
            singles = tuple((x,) for x in rest if x not in chosen)
            part = (big,) + singles
            yield tuple(sorted(part, key=lambda b: b[0]))


def pointed_partitions(items: tuple[int, ...]) -> Iterator[SetPartition]:
    """Set partitions where the smallest element is a singleton block."""
    if not items:
        return
    first, rest = items[0], items[1:]
    for sp in set_partitions(rest):
        yield tuple(sorted(((first,),) + sp, key=lambda b: b[0]))


def stabilizer_multiplicity(blocks: SetPartition) -> Fraction:
    """1 / prod(multiplicity!) over repeated block contents, for weighted sums in
    which each multiset of blocks should count once.
    """
    counts: dict[Block, int] = {}
    for b in blocks:
        counts[b] = counts.get(b, 0) + 1
    denom = 1
    for c in counts.values():
        denom *= math.factorial(c)
    return Fraction(1, denom)


def exp_derivative_expansion(f_derivs: list[Fraction], s: int) -> Fraction:
    """The s-th derivative of exp(f) divided by exp(f), as a polynomial in the
    derivatives of f: s! * sum over {k_i >= 0 : sum i*k_i = s} of
    prod_i (f_derivs[i] / i!)^{k_i} / k_i!.

    f_derivs[i] holds the i-th derivative of f at the point; index 0 is unused.
    """
    if s == 0:
        return Fraction(1)
    total = Fraction(0)
    for combo in partition_multiplicities(s):
        term = Fraction(1)
        for i, k in combo.items():
            term *= (f_derivs[i] / math.factorial(i)) ** k / math.factorial(k)
        total += term
    return math.factorial(s) * total


def verify_counts(n_max: int = 8) -> Report:
    """Signed counting identities over set partitions and compositions of {1..n}:

    - sum over set partitions of (-1)^{n+blocks} * blocks!  == 1
    - sum over compositions   of (-1)^{n+blocks}            == 1  (same value, other enumerator)
    - sum over set partitions of (-1)^{n+blocks} * (blocks-1)! == 0 for n >= 2, == 1 at n = 1
    """
    statement = ("alternating block-count sums over set partitions and ordered set "
                 "partitions collapse to 0/1 constants")
    sums1, sums2, sums3 = [], [], []
    status = "pass"
    for n in range(1, n_max + 1):
        items = tuple(range(1, n + 1))
        s1 = s3 = 0
        for sp in set_partitions(items):
            ell = len(sp)
            s1 += sign(n, ell) * math.factorial(ell)
            s3 += sign(n, ell) * math.factorial(ell - 1)
        s2 = sum(sign(n, len(c)) for c in compositions(items))
        sums1.append(s1)
        sums2.append(s2)
        sums3.append(s3)
        if s1 != 1 or s2 != 1 or s3 != (1 if n == 1 else 0):
            status = "fail"
    return Report("counts", statement, {"n_max": n_max}, status, n_max,
                  details={"sum1": sums1[-1], "sum2": sums2[-1], "sum3": sums3[-1]})


def partition_multiplicities(s: int, max_i: int | None = None) -> Iterator[dict[int, int]]:
    """All {i: k_i} with sum i*k_i = s, i <= max_i."""
    if s == 0:
        yield {}
        return
    top = s if max_i is None else min(s, max_i)
    for i in range(top, 0, -1):
        for k in range(1, s // i + 1):
            for rest in partition_multiplicities(s - i * k, i - 1):
                d = dict(rest)
                d[i] = k
                yield d
