"""Multipoint correlation series over partitions and their theta closed forms.

Points are tuples of exact square roots s_k; the actual arguments are t_k = s_k^2,
so half-integer powers of the t's stay rational.  The brute route computes q-brackets
by summing over partitions; the closed route assembles determinants of invariant
theta derivatives.  The two must agree, and every verifier here compares routes
rather than trusting either one.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .partitions import partitions_of
from .reports import Report, series_report
from .series import ONE, ZERO, QSeries, euler_product, q_pochhammer
from .setparts import set_partitions, sign
from .special import theta_deriv_series

F = Fraction


class DivisorHit(Exception):
    """A subset product of the t's equals 1, putting the point on the theta divisor."""

    def __init__(self, subset: tuple[int, ...]):
        self.subset = subset
        super().__init__(f"product of t over positions {subset} equals 1")


@dataclass(frozen=True)
class EvalPoint:
    """n positive rationals s_k with t_k = s_k^2; no subset product of t's may be 1.

    allow_full admits points where the product over ALL variables is 1 (proper
    subsets are still checked); the symmetrized series are finite there.
    """

    s: tuple[Fraction, ...]
    q0: Fraction | None = None
    allow_full: bool = False

    def __post_init__(self):
        object.__setattr__(self, "s", tuple(F(x) for x in self.s))
        if self.q0 is not None:
            object.__setattr__(self, "q0", F(self.q0))
        for x in self.s:
            if x <= 0:
                raise ValueError("square roots must be positive; pass |s|")
        top = len(self.s) - 1 if self.allow_full else len(self.s)
        for r in range(1, top + 1):
            for subset in itertools.combinations(range(len(self.s)), r):
                prod = ONE
                for i in subset:
                    prod *= self.s[i]
                if prod == 1:
                    raise DivisorHit(tuple(i + 1 for i in subset))

    @property
    def n(self) -> int:
        return len(self.s)

    @property
    def t(self) -> tuple[Fraction, ...]:
        return tuple(x * x for x in self.s)

    def permuted(self, perm) -> EvalPoint:
        return EvalPoint(tuple(self.s[i] for i in perm), self.q0, self.allow_full)

    def merged(self, blocks) -> EvalPoint:
        """One s per block: the product of the block's s values (1-indexed blocks)."""
        out = []
        for b in blocks:
            prod = ONE
            for i in b:
                prod *= self.s[i - 1]
            out.append(prod)
        return EvalPoint(tuple(out), self.q0, self.allow_full)

    def s_prod(self, positions) -> Fraction:
        prod = ONE
        for i in positions:
            prod *= self.s[i]
        return prod


def t_power(s: Fraction, exponent_times_two: int) -> Fraction:
    """t^{e} for half-integer e given 2e, as s^{2e}; the positive branch throughout."""
    return s ** exponent_times_two


# -- q-brackets of index monomials: brute and product form -----------------------


def bracket_monomial_brute(idx: tuple[int, ...], point: EvalPoint, order: int) -> QSeries:
    """<prod_k t_k^{lambda_{i_k} - i_k + 1/2}> summed over partitions directly."""
    svals = point.s
    coeffs = [ZERO] * (order + 1)
    for m in range(order + 1):
        for lam in partitions_of(m):
            w = ONE
            for k, i in enumerate(idx):
                part = lam[i - 1] if i <= len(lam) else 0
                w *= t_power(svals[k], 2 * (part - i) + 1)
            coeffs[m] += w
    return QSeries.from_coeffs(coeffs) * euler_product(order)


def bracket_monomial_product(idx: tuple[int, ...], point: EvalPoint, order: int) -> QSeries:
    """Same bracket via the nested Pochhammer product:

    (q)_inf * prod_k t_k^{1/2 - i_k} /
      [(q)_{i_1 - 1} * prod_{k>=2} (q^{i_{k-1}} t_1..t_{k-1})_{i_k - i_{k-1}}
       * (q^{i_r} t_1..t_r)_inf]
    """
    r = len(idx)
    if any(b <= a for a, b in zip(idx, idx[1:])) or idx[0] < 1:
        raise ValueError("indices must be strictly increasing and start at 1 or later")
    num = euler_product(order)
    scalar = ONE
    for k, i in enumerate(idx):
        scalar *= t_power(point.s[k], 1 - 2 * i)
    denom = q_pochhammer(ONE, 1, idx[0] - 1, order)
    for k in range(1, r):
        c = point.s_prod(range(k)) ** 2
        denom = denom * q_pochhammer(c, idx[k - 1], idx[k] - idx[k - 1], order)
    c_all = point.s_prod(range(r)) ** 2
    denom = denom * q_pochhammer(c_all, idx[-1], None, order)
    return (scalar * num) * denom.inv()


# -- ordered, symmetrized, and full correlation series ---------------------------


def _tail_constants(svals: tuple[Fraction, ...]):
    """Geometric-tail data: x_k = prod_{m >= k} t_m^{-1} and the closed-form
    prefactors c_k, so that the sum over strictly increasing indices past the
    partition length is c_k * x_k^j exactly.
    """
    n = len(svals)
    xs = [ONE] * (n + 1)
    for k in range(n - 1, -1, -1):
        xs[k] = xs[k + 1] / (svals[k] * svals[k])
    cs = [ZERO] * n
    for k in range(n - 1, -1, -1):
        if xs[k] == 1:
            raise DivisorHit(tuple(range(k + 1, n + 1)))
        if k == n - 1:
            cs[k] = svals[k] / (1 - xs[k])
        else:
            cs[k] = svals[k] * xs[k + 1] * cs[k + 1] / (1 - xs[k])
    return xs, cs


def _pow_cached(s: Fraction, cache: dict, e2: int) -> Fraction:
    v = cache.get(e2)
    if v is None:
        v = s ** e2
        cache[e2] = v
    return v


class OrderedWeight:
    """DP evaluator for sum over 1 <= i_1 < ... < i_n of
    prod_k t_k^{lambda_{i_k} - i_k + 1/2}, with the infinite tail beyond the
    partition length summed in closed form.

    Constructed once per point; power caches persist across partitions, which
    matters when summing over tens of thousands of them.
    """

    def __init__(self, svals: tuple[Fraction, ...]):
        self.svals = tuple(F(x) for x in svals)
        self.xs, self.cs = _tail_constants(self.svals)
        self.pw: list[dict] = [{} for _ in self.svals]
        self.xw: list[dict] = [{} for _ in self.svals]

    def __call__(self, lam: tuple[int, ...]) -> Fraction:
        svals = self.svals
        n = len(svals)
        ell = len(lam)
        # W[k][j]: sum over i_k >= j (indices increasing) of the product over
        # m >= k, for j in 1..ell+1; the j = ell+1 column is the closed tail.
        W = [[ZERO] * (ell + 2) for _ in range(n + 1)]
        for j in range(1, ell + 2):
            W[n][j] = ONE  # empty product once all factors are placed
        for k in range(n - 1, -1, -1):
            row, above = W[k], W[k + 1]
            row[ell + 1] = self.cs[k] * _pow_cached(self.xs[k], self.xw[k], ell + 1)
            s, cache = svals[k], self.pw[k]
            for j in range(ell, 0, -1):
                p = _pow_cached(s, cache, 2 * (lam[j - 1] - j) + 1)
                row[j] = p * above[j + 1] + row[j + 1]
        return W[0][1]


def ordered_weight(lam: tuple[int, ...], svals: tuple[Fraction, ...]) -> Fraction:
    return OrderedWeight(svals)(lam)


def h_series(point: EvalPoint, order: int) -> QSeries:
    """H(t_1..t_n): the bracket of the strictly-increasing index sum."""
    if point.n == 0:
        return QSeries.one(order)
    weight = OrderedWeight(point.s)
    coeffs = [ZERO] * (order + 1)
    for m in range(order + 1):
        for lam in partitions_of(m):
            coeffs[m] += weight(lam)
    return QSeries.from_coeffs(coeffs) * euler_product(order)


def g_series(point: EvalPoint, order: int) -> QSeries:
    """G = sum over permutations of H."""
    total = QSeries.zero(order)
    for perm in itertools.permutations(range(point.n)):
        total = total + h_series(point.permuted(perm), order)
    return total


def f_partition_weight(lam: tuple[int, ...], svals: tuple[Fraction, ...],
                       caches: list[dict] | None = None) -> Fraction:
    """prod_k of the full index sum
    t_k^{1/2} (sum_{i <= l} t_k^{lambda_i - i} + t_k^{-l} / (t_k - 1)).
    """
    if caches is None:
        caches = [{} for _ in svals]
    lneg = -2 * len(lam)
    w = ONE
    for s, cache in zip(svals, caches):
        acc = ZERO
        for i, part in enumerate(lam):
            acc += _pow_cached(s, cache, 2 * (part - i - 1))
        acc += _pow_cached(s, cache, lneg) / (s * s - 1)
        w *= s * acc
    return w


def f_brute(point: EvalPoint, order: int) -> QSeries:
    """F as a bare q-bracket of the partition weights."""
    svals = point.s
    caches: list[dict] = [{} for _ in svals]
    coeffs = [ZERO] * (order + 1)
    for m in range(order + 1):
        for lam in partitions_of(m):
            coeffs[m] += f_partition_weight(lam, svals, caches)
    return QSeries.from_coeffs(coeffs) * euler_product(order)


def f_via_blocks(point: EvalPoint, order: int) -> QSeries:
    """Second route: F = sum over set partitions pi of G evaluated at the
    blockwise products.
    """
    items = tuple(range(1, point.n + 1))
    total = QSeries.zero(order)
    for pi in set_partitions(items):
        total = total + g_series(point.merged(pi), order)
    return total


# -- theta closed forms ------------------------------------------------------------


def _theta(k: int, s: Fraction, order: int, shift: int) -> QSeries:
    return theta_deriv_series(k, s, order, shift)


def _det(mat: list[list[QSeries | None]], order: int) -> QSeries:
    """Cofactor expansion; None entries are exact zeros."""
    n = len(mat)
    if n == 1:
        return mat[0][0] if mat[0][0] is not None else QSeries.zero(order)
    total = None
    for i in range(n):
        entry = mat[i][0]
        if entry is None:
            continue
        minor = [row[1:] for r, row in enumerate(mat) if r != i]
        sub = _det(minor, order)
        term = entry * sub
        if i % 2:
            term = -term
        total = term if total is None else total + term
    return total if total is not None else QSeries.zero(order)


def u_series(point: EvalPoint, order: int, shifts: tuple[int, ...] | None = None) -> QSeries:
    """The determinant closed form for F.

    shifts[k] multiplies t_k by q^{shifts[k]}, which the theta factors absorb as
    exponent shifts; entries with factorial of a negative number are exact zeros.
    """
    n = point.n
    if shifts is None:
        shifts = (0,) * n
    if n == 0:
        return QSeries.one(order)
    total = None
    for perm in itertools.permutations(range(n)):
        prefix_s = [point.s_prod(perm[:m]) for m in range(n + 1)]
        prefix_j = [sum(shifts[i] for i in perm[:m]) for m in range(n + 1)]
        mat: list[list[QSeries | None]] = []
        for i in range(1, n + 1):
            row = []
            for j in range(1, n + 1):
                k = j - i + 1
                if k < 0:
                    row.append(None)
                else:
                    arg = n - j
                    th = _theta(k, prefix_s[arg], order, prefix_j[arg])
                    row.append(th * F(1, math.factorial(k)))
            mat.append(row)
        det = _det(mat, order)
        denom = QSeries.one(order)
        for m in range(1, n + 1):
            denom = denom * _theta(0, prefix_s[m], order, prefix_j[m])
        term = det * denom.inv()
        total = term if total is None else total + term
    return total


def t_series(point: EvalPoint, order: int, shifts: tuple[int, ...] | None = None) -> QSeries:
    """T = Theta(t_1..t_n) * U, assembled from its ordered-block expansion:

    sum over ordered set partitions gamma of (-1)^{n + l} Theta^{(#gamma_1)}(1)
    * prod_{k >= 2} Theta^{(#gamma_k)}(prod of t over gamma_1..gamma_{k-1})
                  / Theta(same argument).
    """
    n = point.n
    if shifts is None:
        shifts = (0,) * n
    if n == 0:
        return QSeries.one(order)
    items = tuple(range(1, n + 1))
    total = QSeries.zero(order)
    for pi in set_partitions(items):
        for gamma in itertools.permutations(pi):
            if len(gamma[0]) % 2 == 0:
                continue  # the invariant derivative at 1 vanishes for even order
            term = _theta(len(gamma[0]), ONE, order, 0)
            union: list[int] = list(gamma[0])
            for block in gamma[1:]:
                s_arg = point.s_prod(i - 1 for i in union)
                j_arg = sum(shifts[i - 1] for i in union)
                num = _theta(len(block), s_arg, order, j_arg)
                den = _theta(0, s_arg, order, j_arg)
                term = term * num * den.inv()
                union.extend(block)
            if sign(n, len(gamma)) < 0:
                term = -term
            total = total + term
    return total


def t_series_via_u(point: EvalPoint, order: int,
                   shifts: tuple[int, ...] | None = None) -> QSeries:
    n = point.n
    if shifts is None:
        shifts = (0,) * n
    full = _theta(0, point.s_prod(range(n)), order, sum(shifts))
    return full * u_series(point, order, shifts)


# -- verifiers ---------------------------------------------------------------------


def verify_npoint(s_values: tuple[Fraction, ...], order: int) -> Report:
    """Brute-force partition sums match the theta determinant for F."""
    statement = ("the n-point correlation series equals its determinant of "
                 "invariant theta derivatives")
    point = EvalPoint(tuple(F(x) for x in s_values))
    lhs = f_brute(point, order)
    rhs = u_series(point, order)
    return series_report("npoint", statement,
                         {"s": list(point.s), "order": order}, lhs, rhs)


def verify_f_block_routes(s_values: tuple[Fraction, ...], order: int) -> Report:
    """The bare bracket for F equals its expansion over set partitions of H-sums."""
    statement = ("the full correlation bracket decomposes over set partitions of "
                 "ordered-index sums")
    point = EvalPoint(tuple(F(x) for x in s_values))
    lhs = f_brute(point, order)
    rhs = f_via_blocks(point, order)
    return series_report("f-blocks", statement,
                         {"s": list(point.s), "order": order}, lhs, rhs)


class FormalDivergence(Exception):
    """The hypergeometric ratio has non-positive valuation, so the sum never
    stabilizes coefficientwise."""


Monomial = tuple[Fraction, int]  # (coefficient, q-exponent)


def _finite_poch(mono: Monomial, n: int, order: int) -> QSeries:
    coef, expo = mono
    return q_pochhammer(coef, expo, n, order)


def _infinite_poch(mono: Monomial, order: int) -> QSeries:
    """(x; q)_inf for a monomial x with any integer exponent: factors with
    non-positive exponents are split off the formal tail.
    """
    coef, expo = mono
    if expo >= 1:
        return q_pochhammer(coef, expo, None, order)
    head = q_pochhammer(coef, expo, 1 - expo, order)
    tail = q_pochhammer(coef, 1, None, order)
    return head * tail


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return (a[0] * b[0], a[1] + b[1])


def _mono_div(a: Monomial, b: Monomial) -> Monomial:
    return (a[0] / b[0], a[1] - b[1])


def _is_terminating(mono: Monomial) -> bool:
    """(x)_n vanishes for large n iff x = q^{-k} with k >= 0."""
    return mono[0] == 1 and mono[1] <= 0


def verify_qgauss(a: Monomial, b: Monomial, c: Monomial, order: int) -> Report:
    """The basic hypergeometric 2-1 sum against its infinite-product value:

    sum_n (a)_n (b)_n / ((c)_n (q)_n) * (c/ab)^n
        = (c/a)_inf (c/b)_inf / ((c)_inf (c/ab)_inf).
    """
    statement = ("the balanced 2-1 basic hypergeometric sum telescopes to a ratio "
                 "of four infinite products")
    a = (F(a[0]), int(a[1]))
    b = (F(b[0]), int(b[1]))
    c = (F(c[0]), int(c[1]))
    params = {"a": list(a), "b": list(b), "c": list(c), "order": order}
    z = _mono_div(c, _mono_mul(a, b))
    if z[1] < 1 and not (_is_terminating(a) or _is_terminating(b)):
        raise FormalDivergence(
            f"ratio c/(ab) has q-exponent {z[1]} < 1 and neither numerator terminates")

    def neg_span(expo: int) -> int:
        m = max(0, -expo)
        return m * (m + 1) // 2

    # negative-exponent Pochhammer factors eat into the valid window; work higher
    work = order + neg_span(a[1]) + neg_span(b[1]) + neg_span(c[1]) \
        + neg_span(z[1]) + neg_span(c[1] - a[1]) + neg_span(c[1] - b[1])
    if z[1] < 1:
        terms_bound = 2 + max(-a[1] if _is_terminating(a) else 0,
                              -b[1] if _is_terminating(b) else 0)
        work += (1 - z[1]) * terms_bound
    lhs = QSeries.zero(work)
    n = 0
    while True:
        low = n * z[1]
        for mono in (a, b):
            low += sum(min(0, mono[1] + k) for k in range(n))
        low -= sum(min(0, c[1] + k) for k in range(n))
        if low > order:
            break
        num = _finite_poch(a, n, work) * _finite_poch(b, n, work)
        if num.is_zero():
            break  # a numerator terminated; all later terms vanish too
        den = _finite_poch(c, n, work) * _finite_poch((ONE, 1), n, work)
        zpow = QSeries.monomial(z[0] ** n, z[1] * n, work)
        lhs = lhs + num * den.inv() * zpow
        n += 1
    rhs_num = _infinite_poch(_mono_div(c, a), work) * _infinite_poch(_mono_div(c, b), work)
    rhs_den = _infinite_poch(c, work) * _infinite_poch(z, work)
    rhs = rhs_num * rhs_den.inv()
    # the term loop only guarantees coefficients up to `order`; cut the padding
    lhs = lhs.truncate(max(0, int(order - lhs.offset)))
    rhs = rhs.truncate(max(0, int(order - rhs.offset)))
    return series_report("qgauss", statement, params, lhs, rhs,
                         order_checked=min(order, int(min(lhs.upper, rhs.upper))))


def verify_poch_telescope(u: Monomial, v_root: Fraction, v_exp: int,
                          a: int, b: int, order: int) -> Report:
    """The finite telescoping sum behind the H difference equation:

    sum_{a<i<b} (qv)^{1/2-i} / [(q^a u)_{i-a} (q^i u v)_{b-i}]
      = [ (qv)^{3/2-b} / (q^a u)_{b-a-1} - (qv)^{1/2-a} / (q^{a+1} u v)_{b-a-1} ]
        / (1 - qv),
    with v = v_root^2 q^{v_exp} so half powers of qv stay exact.
    """
    statement = ("shifted Pochhammer reciprocals telescope into a two-term "
                 "difference over the full index range")
    u = (F(u[0]), int(u[1]))
    v_root = F(v_root)
    params = {"u": list(u), "v_root": v_root, "v_exp": v_exp, "a": a, "b": b,
              "order": order}
    if b <= a:
        raise ValueError("need a < b")
    uv: Monomial = (u[0] * v_root * v_root, u[1] + v_exp)

    def neg_span(expo: int) -> int:
        m = max(0, -expo)
        return m * (m + 1) // 2

    # monomial prefactors reach far below q^0; widen the window so every term
    # still covers exponents up to `order`
    extremes = [(1 + v_exp) * (1 - 2 * i) for i in range(a, b + 1)]
    extremes += [(1 + v_exp) * (3 - 2 * b), (1 + v_exp) * (1 - 2 * a)]
    work = order + max(0, max(-min(extremes) // 2 + 1, 0)) \
        + neg_span(u[1] + a) + neg_span(uv[1] + a + 1)

    def qv_half_power(two_e: int) -> QSeries:
        # (q v)^{two_e / 2} = v_root^{two_e} q^{(1 + v_exp) two_e / 2}
        return QSeries.monomial(v_root ** two_e, F((1 + v_exp) * two_e, 2), work)

    lhs = QSeries.zero(work).shift(F((1 + v_exp) * (1 - 2 * (a + 1)), 2))
    for i in range(a + 1, b):
        den = _finite_poch((u[0], u[1] + a), i - a, work) \
            * _finite_poch((uv[0], uv[1] + i), b - i, work)
        lhs = lhs + qv_half_power(1 - 2 * i) * den.inv()
    d1 = _finite_poch((u[0], u[1] + a), b - a - 1, work)
    d2 = _finite_poch((uv[0], uv[1] + a + 1), b - a - 1, work)
    bracket = qv_half_power(3 - 2 * b) * d1.inv() - qv_half_power(1 - 2 * a) * d2.inv()
    one_minus_qv = QSeries.one(work) - QSeries.monomial(v_root * v_root, 1 + v_exp, work)
    rhs = bracket * one_minus_qv.inv()
    return series_report("poch-telescope", statement, params, lhs, rhs,
                         order_checked=min(order, int(min(lhs.upper, rhs.upper))))
