"""The graded ring generated by the weight-2, 4, 6 Eisenstein series: monomial
bases by weight, exact linear fitting of q-series against a basis, and the
q-bracket checks that land inside it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .partitions import hook_power_sum, q_bracket
from .reports import Report
from .series import ONE, ZERO, QSeries
from .special import eisenstein_g, xi_value

F = Fraction


class FitError(Exception):
    pass


class NotInSpan(FitError):
    def __init__(self, weight: int, exponent: int):
        self.weight = weight
        self.exponent = exponent
        super().__init__(
            f"series is not in the weight-{weight} span; first failure at q^{exponent}")


class InsufficientOrder(FitError):
    def __init__(self, needed: int, have: int):
        self.needed = needed
        self.have = have
        super().__init__(f"need series coefficients through q^{needed}, have q^{have}")


def weight_monomials(weight: int) -> list[tuple[int, int, int]]:
    """Exponent triples (a, b, c) with 2a + 4b + 6c = weight, ordered by (c, b)."""
    if weight < 0 or weight % 2:
        return []
    out = []
    for c in range(weight // 6 + 1):
        for b in range((weight - 6 * c) // 4 + 1):
            rest = weight - 6 * c - 4 * b
            out.append((rest // 2, b, c))
    return out


def monomial_series(abc: tuple[int, int, int], order: int) -> QSeries:
    a, b, c = abc
    s = QSeries.one(order)
    if a:
        s = s * eisenstein_g(2, order) ** a
    if b:
        s = s * eisenstein_g(4, order) ** b
    if c:
        s = s * eisenstein_g(6, order) ** c
    return s


@dataclass(frozen=True)
class QMElement:
    weight: int
    monomials: tuple[tuple[int, int, int], ...]
    coeffs: tuple[Fraction, ...]

    def series(self, order: int) -> QSeries:
        total = QSeries.zero(order)
        for abc, c in zip(self.monomials, self.coeffs):
            if c != 0:
                total = total + c * monomial_series(abc, order)
        return total

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for (a, b, c), coef in zip(self.monomials, self.coeffs):
            if coef == 0:
                continue
            names = [f"G{k}^{e}" if e > 1 else f"G{k}"
                     for k, e in ((2, a), (4, b), (6, c)) if e]
            mono = "*".join(names) if names else "1"
            parts.append(f"({coef})*{mono}")
        return " + ".join(parts)


def _solve_exact(rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """Solve a square system by Gaussian elimination over Fraction; None if singular."""
    n = len(rhs)
    aug = [row[:] + [rhs[i]] for i, row in enumerate(rows)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = ONE / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [aug[i][n] for i in range(n)]


def fit_series(s: QSeries, weight: int, margin: int = 10) -> QMElement:
    """Express s exactly in the weight-`weight` monomial basis.

    The first dim(basis) coefficients determine a candidate; the next `margin`
    coefficients must then agree or NotInSpan reports the first failing exponent.
    Odd (or negative) weight has the empty basis, so only the zero series fits.
    """
    monos = weight_monomials(weight)
    dim = len(monos)
    span = dim + margin
    if s.upper < span - 1:
        raise InsufficientOrder(span - 1, int(s.upper))
    if dim == 0:
        for e in range(span):
            if s.coefficient(e) != 0:
                raise NotInSpan(weight, e)
        return QMElement(weight, (), ())
    order = span - 1
    basis = [monomial_series(abc, order) for abc in monos]
    rows = [[b.coefficient(e) for b in basis] for e in range(dim)]
    rhs = [s.coefficient(e) for e in range(dim)]
    sol = _solve_exact(rows, rhs)
    if sol is None:
        # fall back: pick dim independent rows from the full window
        sol = _solve_overdetermined(basis, s, dim, span)
    fitted = QMElement(weight, tuple(monos), tuple(sol))
    fit = fitted.series(order)
    for e in range(span):
        if fit.coefficient(e) != s.coefficient(e):
            raise NotInSpan(weight, e)
    return fitted


def _solve_overdetermined(basis, s, dim, span) -> list[Fraction]:
    rows, rhs = [], []
    for e in range(span):
        rows.append([b.coefficient(e) for b in basis])
        rhs.append(s.coefficient(e))
        if len(rows) >= dim:
            sol = _solve_exact(rows[-dim:], rhs[-dim:])
            if sol is not None:
                return sol
    raise FitError("basis matrix is singular on the available window")


# -- verifiers --------------------------------------------------------------------

def shifted_hook_moment(ks: tuple[int, ...]):
    """The partition function prod_i (p_{k_i} - xi(-k_i))."""
    shifts = [xi_value(-k) for k in ks]

    def f(lam):
        total = ONE
        for k, c in zip(ks, shifts):
            total *= hook_power_sum(lam, k) - c
        return total

    return f


def bracket_weight(ks: tuple[int, ...]) -> int:
    return sum(k + 1 for k in ks)


def verify_bracket_qm(ks: tuple[int, ...], order: int = 30, margin: int = 10) -> Report:
    """The q-bracket of prod (p_k - xi(-k)) lies in the expected graded piece."""
    statement = ("q-brackets of shifted hook-moment products are quasimodular of "
                 "weight sum(k_i + 1)")
    ks = tuple(int(k) for k in ks)
    w = bracket_weight(ks)
    b = q_bracket(shifted_hook_moment(ks), order)
    params = {"ks": list(ks), "order": order, "margin": margin, "weight": w}
    try:
        elt = fit_series(b, w, margin)
    except NotInSpan as err:
        return Report("bracket-qm", statement, params, "fail",
                      first_mismatch={"exponent": err.exponent})
    details = {"fit": str(elt)}
    return Report("bracket-qm", statement, params, "pass",
                  order_checked=order, details=details)


def verify_derivation_closure(weights=(2, 4, 6), order: int = 30,
                              margin: int = 8) -> Report:
    """q d/dq maps the weight-w graded piece into the weight-(w+2) piece."""
    statement = "the derivation q d/dq raises weight by exactly 2 on the graded ring"
    params = {"weights": list(weights), "order": order, "margin": margin}
    checked = {}
    for w in weights:
        for abc in weight_monomials(w):
            d = monomial_series(abc, order).derive()
            try:
                elt = fit_series(d, w + 2, margin)
            except NotInSpan as err:
                return Report("derivation-closure", statement, params, "fail",
                              first_mismatch={"monomial": list(abc),
                                              "exponent": err.exponent})
            checked[f"D(G2^{abc[0]} G4^{abc[1]} G6^{abc[2]})"] = str(elt)
    return Report("derivation-closure", statement, params, "pass",
                  order_checked=order, details=checked)
