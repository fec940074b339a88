"""Named series and constants: Bernoulli numbers, the zeta/xi ladder of special
values, eta, Eisenstein series and their level-2 cousins, and the odd Jacobi theta
with its invariant derivatives.

All theta machinery works at multiplicative points x = s^2 * q^shift with s an exact
positive rational, so every series coefficient stays a Fraction.  The square root
x^{1/2} always means the positive branch s * q^{shift/2}.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .reports import Report, series_report
from .series import (ONE, ZERO, QSeries, SeriesError, euler_product, q_pochhammer,
                     rational_sqrt)
from .setparts import partition_multiplicities

F = Fraction


@lru_cache(maxsize=None)
def bernoulli(m: int) -> Fraction:
    """B_m with B_1 = -1/2."""
    if m < 0:
        raise ValueError("negative index")
    if m == 0:
        return ONE
    # recurrence sum_{k=0}^{m} C(m+1,k) B_k = 0
    s = ZERO
    for k in range(m):
        s += math.comb(m + 1, k) * bernoulli(k)
    return -s / (m + 1)


def bernoulli_poly_at(m: int, x: Fraction) -> Fraction:
    """B_m(x) = sum_k C(m,k) B_k x^{m-k}."""
    return sum((math.comb(m, k) * bernoulli(k) * x ** (m - k) for k in range(m + 1)),
               start=ZERO)


def zeta_value(s: int) -> Fraction:
    """zeta at non-positive integers: zeta(0) = -1/2, zeta(1-m) = -B_m/m for m >= 2."""
    if s > 0:
        raise ValueError("only non-positive integer arguments are rational")
    if s == 0:
        return F(-1, 2)
    m = 1 - s
    return -bernoulli(m) / m


def xi_value(s: int) -> Fraction:
    """xi(s) = (2^s - 1) zeta(s) at non-positive integers; xi(0) = 0."""
    if s > 0:
        raise ValueError("only non-positive integer arguments are rational")
    return (F(1, 2 ** (-s)) - 1) * zeta_value(s) if s else ZERO


def xi_value_via_half_bernoulli(s: int) -> Fraction:
    """Independent route: xi(1-m) = -B_m(1/2)/m."""
    if s > 0:
        raise ValueError("only non-positive integer arguments are rational")
    m = 1 - s
    return -bernoulli_poly_at(m, F(1, 2)) / m


def eta(order: int) -> QSeries:
    """q^{1/24} prod (1 - q^m), offset 1/24."""
    return euler_product(order).shift(F(1, 24))


def divisor_power_sum(n: int, r: int, odd_only: bool = False) -> int:
    total = 0
    for d in range(1, n + 1):
        if n % d == 0 and (not odd_only or d % 2 == 1):
            total += d ** r
    return total


def eisenstein_g(k: int, order: int) -> QSeries:
    """G_k = -B_k/(2k) + sum_n sigma_{k-1}(n) q^n for even k >= 2."""
    if k < 2 or k % 2:
        raise ValueError("weight must be even and at least 2")
    coeffs = [-bernoulli(k) / (2 * k)]
    coeffs += [F(divisor_power_sum(n, k - 1)) for n in range(1, order + 1)]
    return QSeries.from_coeffs(coeffs)


def level2_f(k: int, variant: int, order: int) -> QSeries:
    """F_k on the half-integer lattice (step 1/2, base u = q^{1/2}):

    variant 1: G_k(u) - G_k(u^2);  variant 2: G_k(u) - 2^{k-1} G_k(u^2).
    """
    g = eisenstein_g(k, order)
    gu = QSeries(g.offset, g.coeffs, F(1, 2))  # same coefficients read in u
    sq = [ZERO] * (order + 1)
    for m, c in enumerate(g.coeffs):
        if 2 * m <= order:
            sq[2 * m] = c
    gu2 = QSeries(ZERO, tuple(sq), F(1, 2))
    if variant == 1:
        return gu - gu2
    if variant == 2:
        return gu - (2 ** (k - 1)) * gu2
    raise ValueError("variant must be 1 or 2")


def theta00(order: int) -> QSeries:
    """sum_n q^{n^2/2} on the half-integer lattice (step 1/2)."""
    coeffs = [ZERO] * (order + 1)
    coeffs[0] = ONE
    n = 1
    while n * n <= order:
        coeffs[n * n] = F(2)
        n += 1
    return QSeries(ZERO, tuple(coeffs), F(1, 2))


# -- the odd theta function and its invariant derivatives ------------------------

def _theta_exponent(n: int, shift: int) -> Fraction:
    """q-exponent of the n-th summand at x = s^2 q^shift: n(n+1)/2 + shift(n+1/2)."""
    return F(n * (n + 1), 2) + shift * (n + F(1, 2)) if shift else F(n * (n + 1), 2)


def theta_deriv_series(k: int, s: Fraction, order: int, shift: int = 0) -> QSeries:
    """(x d/dx)^k Theta at x = s^2 q^shift, as a q-series valid to relative `order`.

    Theta(x) = (q)_inf^{-3} sum_n (-1)^n (n+1/2)^0 q^{n(n+1)/2} x^{n+1/2}; the
    derivative inserts (n+1/2)^k.  The positive square-root branch makes
    x^{n+1/2} = s^{2n+1} q^{shift(n+1/2)}.
    """
    s = F(s)
    if s <= 0:
        raise ValueError("s must be a positive rational")
    # exponents e(n) are unimodal with vertex at n = -(2 shift + 1)/2; walk outward
    n0 = -shift - 1  # floor of the vertex
    e_min = min(_theta_exponent(n0, shift), _theta_exponent(n0 + 1, shift))
    target = e_min + order
    terms: list[tuple[Fraction, Fraction]] = []
    n = n0
    while _theta_exponent(n, shift) <= target:
        terms.append((_theta_exponent(n, shift), _theta_term(n, k, s)))
        n -= 1
    n = n0 + 1
    while _theta_exponent(n, shift) <= target:
        terms.append((_theta_exponent(n, shift), _theta_term(n, k, s)))
        n += 1
    coeffs = [ZERO] * (order + 1)
    for e, c in terms:
        idx = e - e_min
        assert idx.denominator == 1
        if idx.numerator <= order:
            coeffs[idx.numerator] += c
    body = QSeries(e_min, tuple(coeffs))
    return body * (euler_product(order).inv() ** 3)


def _theta_term(n: int, k: int, s: Fraction) -> Fraction:
    half = n + F(1, 2)
    return (-1) ** (n % 2) * half ** k * s ** (2 * n + 1)


def theta_product_series(s: Fraction, order: int) -> QSeries:
    """Product form at x = s^2 (no q-shift):
    (q)_inf^{-2} (s - 1/s) (s^2 q; q)_inf (q / s^2; q)_inf.
    """
    s = F(s)
    if s <= 0:
        raise ValueError("s must be a positive rational")
    e2 = euler_product(order).inv() ** 2
    a = q_pochhammer(s * s, 1, None, order)
    b = q_pochhammer(1 / (s * s), 1, None, order)
    return (s - 1 / s) * e2 * a * b


def theta_deriv_value(k: int, s: Fraction, q0: Fraction, terms: int,
                      shift: int = 0) -> Fraction:
    """Truncated numeric value of (x d/dx)^k Theta at x = s^2 q0^shift.

    Sums |n| <= terms of the theta sum and divides by the Euler product cut at
    `terms` factors; the tail is O(q0^{terms^2/2}), far below any tolerance used.
    """
    s, q0 = F(s), F(q0)
    total = ZERO
    for n in range(-terms, terms + 1):
        e = _theta_exponent(n, shift)
        total += _theta_term(n, k, s) * _rat_pow(q0, e)
    denom = ONE
    for m in range(1, terms + 1):
        denom *= (1 - q0 ** m)
    return total / denom ** 3


def _rat_pow(q0: Fraction, e: Fraction) -> Fraction:
    """q0^e for integer or half-integer e (q0 must be a square in the latter case)."""
    if e.denominator == 1:
        return q0 ** e.numerator
    r = rational_sqrt(q0)
    if r is None:
        raise SeriesError(f"{q0} has no rational square root for exponent {e}")
    return r ** (2 * e).numerator


def theta_at_one_derivative(k: int, order: int) -> QSeries:
    """The q-series (x d/dx)^k Theta |_{x=1}; vanishes identically for even k."""
    return theta_deriv_series(k, ONE, order, 0)


def theta_odd_derivative_closed_form(m: int, order: int) -> QSeries:
    """(2m+1)! sum over partitions 1^{k_1} 2^{k_2} ... of m of
    (-2)^{k_1+k_2+...} / (k_1! k_2! ...) * prod_i (G_{2i}/(2i)!)^{k_i},
    which equals the (2m+1)-st invariant theta derivative at x = 1.
    """
    total = QSeries.zero(order)
    for combo in partition_multiplicities(m):
        length = sum(combo.values())
        coef = F((-2) ** length)
        for k in combo.values():
            coef /= math.factorial(k)
        term = QSeries.const(coef, order)
        for i, k in combo.items():
            gi = eisenstein_g(2 * i, order) * F(1, math.factorial(2 * i))
            term = term * gi ** k
        total = total + term
    return math.factorial(2 * m + 1) * total


# -- identity verifiers -----------------------------------------------------------

def verify_theta_derivs(m_values=(1, 2, 3), order: int = 30) -> Report:
    """Invariant odd theta derivatives at 1 match their Eisenstein closed forms."""
    statement = ("odd invariant derivatives of the theta function at x=1 equal "
                 "explicit polynomials in Eisenstein series")
    for m in m_values:
        lhs = theta_at_one_derivative(2 * m + 1, order)
        rhs = theta_odd_derivative_closed_form(m, order)
        r = series_report("theta-derivs", statement, {"m": m, "order": order}, lhs, rhs)
        if not r.ok:
            return r
    return Report("theta-derivs", statement,
                  {"m_values": list(m_values), "order": order}, "pass", order)


def verify_theta_diffeq(m: int = 2, s: Fraction = F(3, 2), shift: int = 0,
                        order: int = 24) -> Report:
    """Theta(q^m x) = (-1)^m q^{-m^2/2} x^{-m} Theta(x) at x = s^2 q^shift."""
    statement = "theta satisfies its first-order multiplicative difference equation"
    s = F(s)
    lhs = theta_deriv_series(0, s, order, shift + m)
    rhs = theta_deriv_series(0, s, order, shift)
    sign = -1 if m % 2 else 1
    rhs = (sign * s ** (-2 * m)) * rhs.shift(-F(m * m, 2) - shift * m)
    return series_report("theta-diffeq", statement,
                         {"m": m, "s": s, "shift": shift, "order": order}, lhs, rhs)


def verify_xi_generating(order: int = 20) -> Report:
    """-sum_n xi(-n) u^n / n! = 1/(2 sinh(u/2)) - 1/u as a series in u."""
    statement = ("the xi special values are generated by the reciprocal of "
                 "2*sinh(u/2), with the pole removed")
    lhs = QSeries.from_coeffs(
        [-xi_value(-n) / math.factorial(n) for n in range(order + 1)])
    # 2 sinh(u/2) = u * A(u), A = sum u^{2k} / (4^k (2k+1)!)
    acoeffs = [ZERO] * (order + 2)
    for k in range(0, (order + 2) // 2 + 1):
        if 2 * k <= order + 1:
            acoeffs[2 * k] = F(1, 4 ** k * math.factorial(2 * k + 1))
    a = QSeries.from_coeffs(acoeffs)
    rhs = (a.inv() - QSeries.one(order + 1)).shift(-1)
    return series_report("xi-generating", statement, {"order": order}, lhs, rhs,
                         order_checked=order)


def verify_xi_binomial(n_max: int = 12) -> Report:
    """sum_{i=1}^{n-1} (-1)^i C(n,i) xi(i-n) = (-1)^{n+1}/(n+1) + (-1)^n/2^n, n >= 2."""
    statement = ("alternating binomial sums of xi values collapse to a two-term "
                 "closed form")
    for n in range(2, n_max + 1):
        lhs = sum(((-1) ** i * math.comb(n, i) * xi_value(i - n)
                   for i in range(1, n)), start=ZERO)
        rhs = F((-1) ** (n + 1), n + 1) + F((-1) ** n, 2 ** n)
        if lhs != rhs:
            return Report("xi-binomial", statement, {"n_max": n_max}, "fail",
                          first_mismatch={"n": n, "lhs": lhs, "rhs": rhs})
    return Report("xi-binomial", statement, {"n_max": n_max}, "pass", n_max)
