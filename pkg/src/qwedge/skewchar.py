"""The odd-variable character, its divisor-sum building blocks, and the skew
n-point function computed two independent ways.

The character lives in variables q1, q3, q5, ...; tau-derivatives act as
multiply-by-exponent.  The n-point generating polynomial is assembled once by
direct differentiation of the character and once from the set-partition closed
form; the two must agree coefficient by coefficient.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .partitions import partitions_of
from .reports import Report
from .series import ONE, ZERO, QSeries, SeriesError
from .setparts import set_partitions
from .special import divisor_power_sum, eisenstein_g, eta, zeta_value

F = Fraction


class GradeOverflow(SeriesError):
    """An exponent grew past the configured ceiling (q_{2j-1} exponents scale
    like n^{2j-1} and can explode for large grades)."""


@dataclass
class OddMultiSeries:
    """Sparse series in q1, q3, ..., q_{2J-1}, truncated at q1-exponent <= grade.

    Exponent vectors have length J; slot j-1 holds the q_{2j-1} exponent.
    """

    J: int
    grade: int
    terms: dict[tuple[Fraction, ...], Fraction] = field(default_factory=dict)

    def tau_derive(self, j: int) -> OddMultiSeries:
        """The invariant derivative in tau_{2j-1}: multiply each term by its
        q_{2j-1}-exponent."""
        if not 1 <= j <= self.J:
            raise ValueError(f"j must be between 1 and {self.J}")
        out = {}
        for e, c in self.terms.items():
            v = c * e[j - 1]
            if v:
                out[e] = v
        return OddMultiSeries(self.J, self.grade, out)

    def collapse(self) -> QSeries:
        """Set q_{2j-1} = 1 for j >= 2, leaving a q1-series on the 1/24-shifted
        integer grid."""
        base = zeta_value(-1) / 2
        coeffs = [ZERO] * (self.grade + 1)
        for e, c in self.terms.items():
            rel = e[0] - base
            if rel.denominator != 1 or not 0 <= rel.numerator <= self.grade:
                raise SeriesError(f"exponent {e[0]} off the expected grid")
            coeffs[rel.numerator] += c
        return QSeries(base, tuple(coeffs))

    def to_json(self) -> dict:
        return {"J": self.J, "grade": str(self.grade),
                "terms": [{"exps": [str(x) for x in e], "coeff": str(c)}
                          for e, c in sorted(self.terms.items())]}


def psi_series(J: int, N: int, max_exponent: int = 10 ** 12) -> OddMultiSeries:
    """Anomaly prefactor q1^{zeta(-1)/2} q3^{zeta(-3)/2} ... times
    prod_{n>=1} (1 - q1^n q3^{n^3} ...)^{-1}, truncated at q1-grade N.
    """
    if J < 1:
        raise ValueError("need J >= 1")
    # product part first, on the integer exponent grid
    terms: dict[tuple[int, ...], Fraction] = {(0,) * J: ONE}
    for n in range(1, N + 1):
        if n ** (2 * J - 1) > max_exponent:
            raise GradeOverflow(
                f"exponent {n}^{2 * J - 1} exceeds the ceiling {max_exponent}")
        shifts = tuple(n ** (2 * j - 1) for j in range(1, J + 1))
        geom = [tuple(m * s for s in shifts) for m in range(N // n + 1)]
        new: dict[tuple[int, ...], Fraction] = {}
        for e, c in terms.items():
            for g in geom:
                if e[0] + g[0] > N:
                    break
                key = tuple(a + b for a, b in zip(e, g))
                new[key] = new.get(key, ZERO) + c
        terms = new
    anomaly = tuple(zeta_value(1 - 2 * j) / 2 for j in range(1, J + 1))
    shifted = {tuple(a + b for a, b in zip(e, anomaly)): c for e, c in terms.items()}
    return OddMultiSeries(J, N, shifted)


def h_series(r: int, s_even: int, order: int) -> QSeries:
    """The r-fold invariant log-derivative of the character, specialized to the
    single-variable line: sum_{m,n>=1} m^{s-2r+1} (nm)^{r-1} q^{nm}, plus the
    constant zeta(1-s)/2 when r = 1.  Depends only on r and the even weight tag.
    """
    if r < 1:
        raise ValueError("need r >= 1")
    if s_even % 2 or s_even < 2 * r:
        raise ValueError("weight tag must be even and at least 2r")
    coeffs = [zeta_value(1 - s_even) / 2 if r == 1 else ZERO]
    for n in range(1, order + 1):
        coeffs.append(F(n ** (r - 1) * divisor_power_sum(n, s_even - 2 * r + 1)))
    return QSeries.from_coeffs(coeffs)


def g_series(r: int, s_even: int, order: int) -> QSeries:
    """The same object through the modular route: the (r-1)-fold derivative of
    the Eisenstein series of weight s - 2r + 2."""
    w = s_even - 2 * r + 2
    if w < 2:
        raise ValueError("derived weight must be at least 2")
    g = eisenstein_g(w, order)
    for _ in range(r - 1):
        g = g.derive()
    return g


def verify_h_equals_g(pairs=((1, 1), (1, 2), (1, 3), (1, 4), (2, 2), (2, 3),
                             (2, 4), (3, 3), (3, 4)),
                      order: int = 30) -> Report:
    """The double divisor sum and the differentiated Eisenstein series agree for
    every (derivative count, weight tag) pair."""
    statement = ("the log-derivative divisor sums of the odd-variable character "
                 "equal derivatives of Eisenstein series")
    params = {"pairs": [list(p) for p in pairs], "order": order}
    for r, sumj in pairs:
        s = 2 * sumj
        if h_series(r, s, order) != g_series(r, s, order):
            return Report("h-equals-g", statement, params, "fail",
                          first_mismatch={"r": r, "s": s})
    return Report("h-equals-g", statement, params, "pass", order_checked=order)


# -- polynomials in z with series coefficients ---------------------------------------


def _nonzero(c) -> bool:
    return not c.is_zero() if isinstance(c, QSeries) else bool(c)


@dataclass
class OddPolynomial:
    """Truncated polynomial in z_1..z_nvars; coefficients are QSeries (or plain
    rationals).  Per-variable degree is capped at zdeg."""

    nvars: int
    zdeg: int
    terms: dict[tuple[int, ...], object] = field(default_factory=dict)

    def __post_init__(self):
        self.terms = {e: c for e, c in self.terms.items() if _nonzero(c)}

    @staticmethod
    def zero(nvars: int, zdeg: int) -> OddPolynomial:
        return OddPolynomial(nvars, zdeg, {})

    def __add__(self, other: OddPolynomial) -> OddPolynomial:
        if self.nvars != other.nvars:
            raise ValueError("variable counts differ")
        zdeg = min(self.zdeg, other.zdeg)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms[e] + c if e in terms else c
        return OddPolynomial(self.nvars, zdeg, terms)

    def __mul__(self, other: OddPolynomial) -> OddPolynomial:
        if self.nvars != other.nvars:
            raise ValueError("variable counts differ")
        zdeg = min(self.zdeg, other.zdeg)
        terms: dict[tuple[int, ...], object] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                if max(e) > zdeg:
                    continue
                c = c1 * c2
                terms[e] = terms[e] + c if e in terms else c
        return OddPolynomial(self.nvars, zdeg, terms)

    def scale(self, c) -> OddPolynomial:
        return OddPolynomial(self.nvars, self.zdeg,
                             {e: v * c for e, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, OddPolynomial):
            return NotImplemented
        if self.nvars != other.nvars or set(self.terms) != set(other.terms):
            return False
        return all(self.terms[e] == other.terms[e] for e in self.terms)

    def to_json(self) -> dict:
        out = []
        for e in sorted(self.terms):
            c = self.terms[e]
            if isinstance(c, QSeries):
                val = {"offset": str(c.offset), "coeffs": [str(x) for x in c.coeffs]}
                if c.step != 1:
                    val["base_step"] = str(c.step)
            else:
                val = str(c)
            out.append({"z": list(e), "coeff": val})
        return {"nvars": self.nvars, "zdeg": self.zdeg, "terms": out}


def epsilon_oddify(p: OddPolynomial) -> OddPolynomial:
    """Keep exactly the terms odd in every variable separately (the average of
    all 2^n sign flips weighted by the product of the signs)."""
    return OddPolynomial(p.nvars, p.zdeg,
                         {e: c for e, c in p.terms.items()
                          if all(x % 2 == 1 for x in e)})


def Gcal_series(n: int, N_z: int, N_q: int) -> OddPolynomial:
    """The one-variable generating polynomial whose z^{2r+n-2} coefficient is the
    (n-1)-fold derivative of the weight-2r Eisenstein series over (2r+n-2)!."""
    if n < 1:
        raise ValueError("need n >= 1")
    out: dict[tuple[int, ...], object] = {}
    r = 1
    while 2 * r + n - 2 <= N_z:
        d = 2 * r + n - 2
        g = eisenstein_g(2 * r, N_q)
        for _ in range(n - 1):
            g = g.derive()
        if d <= N_z:
            out[(d,)] = g * F(1, math.factorial(d))
        r += 1
    return OddPolynomial(1, N_z, out)


def _eps_gcal_block(block: tuple[int, ...], nvars: int, N_z: int,
                    N_q: int) -> OddPolynomial:
    """The oddified block series in the block's variables: for each weight 2r,
    the derivative power of the Eisenstein series times the odd monomials
    z^{2l_1-1}...z^{2l_m-1} with l_1+...+l_m = r + m - 1."""
    m = len(block)
    lmax = (N_z + 1) // 2
    out: dict[tuple[int, ...], object] = {}
    for r in range(1, m * lmax - m + 2):
        g = eisenstein_g(2 * r, N_q)
        for _ in range(m - 1):
            g = g.derive()
        target = r + m - 1
        for ls in _compositions_bounded(target, m, lmax):
            e = [0] * nvars
            coeff = ONE
            for pos, l in zip(block, ls):
                e[pos - 1] = 2 * l - 1
                coeff /= math.factorial(2 * l - 1)
            key = tuple(e)
            term = g * coeff
            out[key] = out[key] + term if key in out else term
    return OddPolynomial(nvars, N_z, out)


def _compositions_bounded(total: int, parts: int, lmax: int):
    """Ordered tuples of `parts` integers in [1, lmax] summing to `total`."""
    if parts == 1:
        if 1 <= total <= lmax:
            yield (total,)
        return
    for first in range(1, min(lmax, total - parts + 1) + 1):
        for rest in _compositions_bounded(total - first, parts - 1, lmax):
            yield (first,) + rest


def npoint_skew_closed(n: int, N_z: int, N_q: int) -> OddPolynomial:
    """Set-partition closed form: the inverse eta series times the sum over
    partitions of {1..n} of products of oddified block series."""
    if n < 1:
        raise ValueError("need n >= 1")
    eta_inv = eta(N_q).inv()
    total = OddPolynomial.zero(n, N_z)
    for mu in set_partitions(tuple(range(1, n + 1))):
        prod = None
        for block in mu:
            fac = _eps_gcal_block(block, n, N_z, N_q)
            prod = fac if prod is None else prod * fac
        total = total + prod
    return total.scale(eta_inv)


def npoint_skew_brute(n: int, N_z: int, N_q: int, J: int,
                      cross_check: bool = True) -> OddPolynomial:
    """Direct route: apply the odd tau-derivatives to the character by exponent
    multiplication, specialize the higher variables away, and assemble the
    generating polynomial.  Optionally re-derives every coefficient through the
    log-derivative product expansion and demands exact agreement.
    """
    k_max = (N_z + 1) // 2
    if J < k_max:
        raise ValueError(f"need J >= {k_max} to cover z-degree {N_z}")
    psi = psi_series(J, N_q)
    psi0 = psi.collapse()
    out: dict[tuple[int, ...], object] = {}
    for ks in _index_tuples(n, k_max):
        series = psi
        norm = 1
        for k in ks:
            series = series.tau_derive(k)
            norm *= math.factorial(2 * k - 1)
        coeff = series.collapse() * F(1, norm)
        if cross_check:
            expansion = QSeries.zero(N_q)
            for mu in set_partitions(tuple(range(1, n + 1))):
                term = QSeries.one(N_q)
                for block in mu:
                    s = 2 * sum(ks[i - 1] for i in block)
                    term = term * h_series(len(block), s, N_q)
                expansion = expansion + term
            if coeff != psi0 * expansion * F(1, norm):
                raise SeriesError(
                    f"log-derivative expansion disagrees at indices {ks}")
        out[tuple(2 * k - 1 for k in ks)] = coeff
    return OddPolynomial(n, N_z, out)


def _index_tuples(n: int, k_max: int):
    if n == 0:
        yield ()
        return
    for k in range(1, k_max + 1):
        for rest in _index_tuples(n - 1, k_max):
            yield (k,) + rest


def verify_skew_npoint(n: int = 2, N_z: int = 5, N_q: int = 15) -> Report:
    """The directly differentiated n-point polynomial equals the set-partition
    closed form, coefficient by coefficient."""
    statement = ("the skew n-point function from direct differentiation matches "
                 "its set-partition closed form")
    params = {"n": n, "N_z": N_z, "N_q": N_q}
    closed = npoint_skew_closed(n, N_z, N_q)
    brute = npoint_skew_brute(n, N_z, N_q, (N_z + 1) // 2)
    if closed == brute:
        return Report("skew-npoint", statement, params, "pass",
                      order_checked=N_q,
                      details={"z_terms": len(closed.terms)})
    bad = sorted(e for e in set(closed.terms) | set(brute.terms)
                 if closed.terms.get(e) != brute.terms.get(e))
    return Report("skew-npoint", statement, params, "fail",
                  first_mismatch={"z": list(bad[0])})
