"""Set-partition families, signs, and the exp-derivative expansion."""

import math
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from qwedge.setparts import (
    bell_number,
    compositions,
    exp_derivative_expansion,
    fubini_number,
    near_singleton_partitions,
    pointed_partitions,
    set_partitions,
    sign,
    stabilizer_multiplicity,
    verify_counts,
)

F = Fraction


def _items(n):
    return tuple(range(1, n + 1))


def test_counts_against_bell_and_fubini():
    # Bell: 1, 1, 2, 5, 15, 52, 203, 877, 4140;  Fubini: 1, 1, 3, 13, 75, 541, ...
    bells = [1, 1, 2, 5, 15, 52, 203, 877, 4140]
    fubinis = [1, 1, 3, 13, 75, 541, 4683, 47293, 545835]
    for n in range(7):
        assert bell_number(n) == bells[n]
        assert fubini_number(n) == fubinis[n]
        assert sum(1 for _ in set_partitions(_items(n))) == bells[n]
        assert sum(1 for _ in compositions(_items(n))) == fubinis[n]
    assert bell_number(8) == 4140
    assert fubini_number(8) == 545835


def test_blocks_are_canonical():
    for sp in set_partitions(_items(5)):
        flat = sorted(x for b in sp for x in b)
        assert flat == list(_items(5))
        mins = [b[0] for b in sp]
        assert mins == sorted(mins)
        for b in sp:
            assert list(b) == sorted(b)


def test_near_singleton_family():
    got = set(near_singleton_partitions((1, 2, 3)))
    assert got == {
        ((1,), (2,), (3,)),
        ((1, 2), (3,)),
        ((1, 3), (2,)),
        ((1, 2, 3),),
    }
    # size is 2^{n-1}
    for n in range(6):
        assert sum(1 for _ in near_singleton_partitions(_items(n))) == max(1, 2 ** (n - 1))
    for sp in near_singleton_partitions(_items(5)):
        big = [b for b in sp if len(b) > 1]
        assert len(big) <= 1
        if big:
            assert 1 in big[0]


def test_pointed_family():
    got = list(pointed_partitions((1, 2, 3)))
    assert len(got) == bell_number(2)
    for sp in got:
        assert (1,) in sp
    assert list(pointed_partitions(())) == []


def test_signed_partition_sum_with_factorial():
    # sum over set partitions of (-1)^{n+l} l! = 1 for every n >= 1
    for n in range(1, 8):
        total = sum(sign(n, len(sp)) * math.factorial(len(sp))
                    for sp in set_partitions(_items(n)))
        assert total == 1


def test_signed_composition_sum():
    # sum over ordered set partitions of (-1)^{n+l} = 1 for every n >= 1
    for n in range(1, 8):
        total = sum(sign(n, len(c)) for c in compositions(_items(n)))
        assert total == 1


def test_signed_factorial_decrement_sum():
    # sum over set partitions of (-1)^{n+l} (l-1)! = 0 for n >= 2 (and -1... at n=1 it is 1)
    assert sum(sign(1, len(sp)) * math.factorial(len(sp) - 1)
               for sp in set_partitions(_items(1))) == 1
    for n in range(2, 8):
        total = sum(sign(n, len(sp)) * math.factorial(len(sp) - 1)
                    for sp in set_partitions(_items(n)))
        assert total == 0


def test_hand_counted_n3():
    # l distribution over set partitions of 3: one l=1, three l=2, one l=3
    # (-1)^{3+l} l!: +1*... = 1 - 6 + 6 = 1; with (l-1)!: 1 - 3 + 2 = 0
    sps = list(set_partitions(_items(3)))
    by_len = sorted(len(sp) for sp in sps)
    assert by_len == [1, 2, 2, 2, 3]
    assert sum(sign(3, len(sp)) * math.factorial(len(sp)) for sp in sps) == 1
    assert sum(sign(3, len(sp)) * math.factorial(len(sp) - 1) for sp in sps) == 0


def test_stabilizer_multiplicity():
    assert stabilizer_multiplicity(((1,), (2,), (3,))) == 1
    assert stabilizer_multiplicity(((1,), (1,), (1,))) == F(1, 6)
    assert stabilizer_multiplicity(((1, 2), (1, 2), (3,))) == F(1, 2)


def test_exp_derivative_expansion_low_orders():
    # d/dx exp(f) = f' exp(f); second: f'' + f'^2; third: f''' + 3 f'' f' + f'^3
    fd = [F(0), F(2), F(3), F(5), F(7)]  # f', f'', f''', f''''
    assert exp_derivative_expansion(fd, 0) == 1
    assert exp_derivative_expansion(fd, 1) == 2
    assert exp_derivative_expansion(fd, 2) == 3 + 4
    assert exp_derivative_expansion(fd, 3) == 5 + 3 * 3 * 2 + 8
    assert exp_derivative_expansion(fd, 4) == 7 + 4 * 5 * 2 + 3 * 9 + 6 * 3 * 4 + 16


def _exp_derivs_by_recursion(fd, s_max):
    """Oracle: E_0 = 1, E_{s+1} = E_s' + f' E_s as polynomials in a formal variable x,
    where f^{(i)}(x) is represented by its value list and differentiation shifts indices.

    Returns [E_0(pt), ..., E_{s_max}(pt)] evaluated at the point the fd values describe.
    We carry polynomials in the derivative values symbolically as dicts
    {multiindex: coeff} with multiindex = tuple of derivative orders used as factors.
    """
    one: dict[tuple[int, ...], Fraction] = {(): F(1)}

    def d_dx(poly):
        out: dict[tuple[int, ...], Fraction] = {}
        for mono, c in poly.items():
            for idx in range(len(mono)):
                key = tuple(sorted(mono[:idx] + (mono[idx] + 1,) + mono[idx + 1:]))
                out[key] = out.get(key, F(0)) + c
        return out

    def times_fprime(poly):
        out = {}
        for mono, c in poly.items():
            key = tuple(sorted(mono + (1,)))
            out[key] = out.get(key, F(0)) + c
        return out

    def evaluate(poly):
        total = F(0)
        for mono, c in poly.items():
            val = c
            for i in mono:
                val *= fd[i]
            total += val
        return total

    results = []
    cur = one
    for _ in range(s_max + 1):
        results.append(evaluate(cur))
        nxt = d_dx(cur)
        for mono, c in times_fprime(cur).items():
            nxt[mono] = nxt.get(mono, F(0)) + c
        cur = nxt
    return results


@given(st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=6),
                min_size=8, max_size=8))
@settings(max_examples=30, deadline=None)
def test_exp_derivative_expansion_matches_recursion(vals):
    fd = [F(0)] + vals
    oracle = _exp_derivs_by_recursion(fd, 6)
    for s in range(7):
        assert exp_derivative_expansion(fd, s) == oracle[s]


def test_verify_counts():
    rep = verify_counts(8)
    assert rep.ok
    assert rep.details == {"sum1": 1, "sum2": 1, "sum3": 0}
    assert verify_counts(1).details["sum3"] == 1
