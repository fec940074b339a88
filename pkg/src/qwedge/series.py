"""Truncated q-power series with exact rational coefficients.

A QSeries represents q^e0 * (c_0 + c_1 q + ... + c_N q^N + O(q^{N+1})) where e0 is a
single global rational offset and every c_k is a Fraction.  Coefficients below the
offset are exactly zero; only exponents beyond e0+N are unknown.  All arithmetic keeps
the pessimistic truncation: the result is valid exactly as far as every input was.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

Rat = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


class SeriesError(Exception):
    pass


class NonIntegerOffsetGap(SeriesError):
    """Two series whose offsets differ by a non-integer cannot share a coefficient grid."""


class ZeroLeadingCoefficient(SeriesError):
    """Inversion (or division) requires a nonzero coefficient at the offset."""


class MixedStep(SeriesError):
    """Series on different base-variable steps (q vs q^{1/2}) must not be combined."""


def _as_frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not a rational scalar: {x!r}")


def rational_sqrt(x: Fraction) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None if it is not a square."""
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


@dataclass(frozen=True)
class QSeries:
    offset: Fraction
    coeffs: tuple[Fraction, ...]
    step: Fraction = field(default=ONE)

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("QSeries needs at least one coefficient slot")

    @property
    def trunc_order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def upper(self) -> Fraction:
        """Largest exponent (relative to q^0) whose coefficient is known."""
        return self.offset + self.trunc_order

    # -- constructors ---------------------------------------------------------

    @staticmethod
    def from_coeffs(coeffs, offset=ZERO, step=ONE) -> QSeries:
        return QSeries(_as_frac(offset), tuple(_as_frac(c) for c in coeffs), _as_frac(step))

    @staticmethod
    def zero(order: int, offset=ZERO, step=ONE) -> QSeries:
        return QSeries(_as_frac(offset), (ZERO,) * (order + 1), _as_frac(step))

    @staticmethod
    def const(c, order: int, step=ONE) -> QSeries:
        return QSeries(ZERO, (_as_frac(c),) + (ZERO,) * order, _as_frac(step))

    @staticmethod
    def one(order: int, step=ONE) -> QSeries:
        return QSeries.const(ONE, order, step)

    @staticmethod
    def monomial(c, exponent, order: int, step=ONE) -> QSeries:
        """c * q^exponent, known to relative order `order`."""
        return QSeries(_as_frac(exponent), (_as_frac(c),) + (ZERO,) * order, _as_frac(step))

    # -- bookkeeping ----------------------------------------------------------

    def coefficient(self, exponent) -> Fraction:
        """Coefficient of q^exponent; exact zero below the offset, error beyond upper."""
        e = _as_frac(exponent)
        rel = e - self.offset
        if rel.denominator != 1:
            return ZERO
        k = rel.numerator
        if k < 0:
            return ZERO
        if k > self.trunc_order:
            raise SeriesError(f"coefficient at q^{e} is beyond the truncation order")
        return self.coeffs[k]

    def truncate(self, order: int) -> QSeries:
        if order >= self.trunc_order:
            return self
        return QSeries(self.offset, self.coeffs[: order + 1], self.step)

    def shift(self, delta) -> QSeries:
        """Multiply by the monomial q^delta (exact)."""
        return QSeries(self.offset + _as_frac(delta), self.coeffs, self.step)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def valuation(self) -> Fraction | None:
        """Exponent of the first nonzero known coefficient, None for the zero series."""
        for k, c in enumerate(self.coeffs):
            if c != 0:
                return self.offset + k
        return None

    # -- ring operations ------------------------------------------------------

    def _check_step(self, other: QSeries):
        if self.step != other.step:
            raise MixedStep(f"cannot combine step {self.step} with step {other.step}")

    def __add__(self, other: QSeries) -> QSeries:
        if not isinstance(other, QSeries):
            return NotImplemented
        self._check_step(other)
        gap = other.offset - self.offset
        if gap.denominator != 1:
            raise NonIntegerOffsetGap(
                f"offsets {self.offset} and {other.offset} differ by a non-integer")
        off = min(self.offset, other.offset)
        upper = min(self.upper, other.upper)
        n = int(upper - off)
        out = [ZERO] * (n + 1)
        for src in (self, other):
            base = int(src.offset - off)
            for k, c in enumerate(src.coeffs):
                j = base + k
                if 0 <= j <= n:
                    out[j] += c
        return QSeries(off, tuple(out), self.step)

    def __neg__(self) -> QSeries:
        return QSeries(self.offset, tuple(-c for c in self.coeffs), self.step)

    def __sub__(self, other: QSeries) -> QSeries:
        return self + (-other)

    def __mul__(self, other) -> QSeries:
        if isinstance(other, (int, Fraction)):
            c = _as_frac(other)
            return QSeries(self.offset, tuple(c * x for x in self.coeffs), self.step)
        if not isinstance(other, QSeries):
            return NotImplemented
        self._check_step(other)
        n = min(self.trunc_order, other.trunc_order)
        out = [ZERO] * (n + 1)
        for i, a in enumerate(self.coeffs):
            if a == 0 or i > n:
                continue
            for j, b in enumerate(other.coeffs):
                if i + j > n:
                    break
                if b != 0:
                    out[i + j] += a * b
        return QSeries(self.offset + other.offset, tuple(out), self.step)

    __rmul__ = __mul__

    def inv(self) -> QSeries:
        c0 = self.coeffs[0]
        if c0 == 0:
            raise ZeroLeadingCoefficient("cannot invert: zero coefficient at the offset")
        n = self.trunc_order
        inv0 = ONE / c0
        out = [inv0] + [ZERO] * n
        for k in range(1, n + 1):
            s = ZERO
            for j in range(1, k + 1):
                aj = self.coeffs[j] if j < len(self.coeffs) else ZERO
                if aj != 0:
                    s += aj * out[k - j]
            out[k] = -inv0 * s
        return QSeries(-self.offset, tuple(out), self.step)

    def __truediv__(self, other) -> QSeries:
        if isinstance(other, (int, Fraction)):
            return self * (ONE / _as_frac(other))
        return self * other.inv()

    def __pow__(self, n: int) -> QSeries:
        if n < 0:
            return self.inv() ** (-n)
        result = QSeries.one(self.trunc_order, self.step)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def derive(self) -> QSeries:
        """D = q d/dq: c_k -> step*(offset+k) c_k.

        For step-1/2 series the slot exponent is in the base variable u = q^{1/2},
        so the q-derivative picks up the extra factor of step.
        """
        return QSeries(self.offset,
                       tuple(self.step * (self.offset + k) * c
                             for k, c in enumerate(self.coeffs)),
                       self.step)

    # -- comparison -----------------------------------------------------------

    def __eq__(self, other) -> bool:
        """Equal iff all coefficients agree on the common valid range.

        Offsets differing by a non-integer compare unequal by construction (unless
        both series are identically zero on the common range, which cannot be
        detected across grids; we follow the documented convention).
        """
        if not isinstance(other, QSeries):
            return NotImplemented
        if self.step != other.step:
            return False
        gap = other.offset - self.offset
        if gap.denominator != 1:
            return False
        upper = min(self.upper, other.upper)
        lo = min(self.offset, other.offset)
        e = lo
        while e <= upper:
            a = self.coeffs[int(e - self.offset)] if e >= self.offset else ZERO
            b = other.coeffs[int(e - other.offset)] if e >= other.offset else ZERO
            if a != b:
                return False
            e += 1
        return True

    def __hash__(self):
        return hash((self.offset, self.coeffs, self.step))

    def first_mismatch(self, other: QSeries):
        """(exponent, self_coeff, other_coeff) of the first disagreement, or None."""
        gap = other.offset - self.offset
        if gap.denominator != 1:
            return (min(self.offset, other.offset), None, None)
        upper = min(self.upper, other.upper)
        e = min(self.offset, other.offset)
        while e <= upper:
            a = self.coeffs[int(e - self.offset)] if e >= self.offset else ZERO
            b = other.coeffs[int(e - other.offset)] if e >= other.offset else ZERO
            if a != b:
                return (e, a, b)
            e += 1
        return None

    # -- evaluation and serialization ------------------------------------------

    def eval_at(self, q0: Fraction) -> Fraction:
        """Sum the known coefficients at an exact rational q0.

        Fractional offsets require q0 to have the matching exact root.
        """
        q0 = _as_frac(q0)
        # slot k carries u^{offset+k} where u = q^{step}; evaluate in the base variable
        base = q0
        if self.step != 1:
            root = rational_sqrt(q0) if self.step == Fraction(1, 2) else None
            if root is None:
                raise SeriesError(f"cannot evaluate step-{self.step} series at {q0}")
            base = root
        off = self.offset
        if off.denominator == 1:
            scale = base ** off.numerator
        elif off.denominator == 2:
            r = rational_sqrt(base)
            if r is None:
                raise SeriesError(f"half-integer offset needs a square point, got {base}")
            scale = r ** (2 * off).numerator
        else:
            raise SeriesError(f"cannot evaluate offset {off} at a rational point")
        total = ZERO
        p = scale
        for c in self.coeffs:
            if c != 0:
                total += c * p
            p *= base
        return total

    def to_jsonable(self) -> dict:
        d = {"offset": str(self.offset), "coeffs": [str(c) for c in self.coeffs]}
        if self.step != 1:
            d["base_step"] = str(self.step)
        return d

    @staticmethod
    def from_jsonable(d: dict) -> QSeries:
        return QSeries(Fraction(d["offset"]),
                       tuple(Fraction(c) for c in d["coeffs"]),
                       Fraction(d.get("base_step", "1")))

    def __repr__(self):
        shown = ", ".join(str(c) for c in self.coeffs[:8])
        if self.trunc_order >= 8:
            shown += ", ..."
        return f"QSeries(q^{self.offset} * [{shown}]; N={self.trunc_order})"


def binomial_factor(c, exponent: int, order: int) -> QSeries:
    """The polynomial 1 - c*q^exponent as a QSeries valid to `order`.

    Negative exponents are allowed (the offset absorbs them); exponent 0 folds the
    constant into a single slot.
    """
    c = _as_frac(c)
    if exponent == 0:
        return QSeries.const(ONE - c, order)
    if exponent > 0:
        coeffs = [ONE] + [ZERO] * max(order, exponent)
        if exponent <= len(coeffs) - 1:
            coeffs[exponent] = -c
        return QSeries(ZERO, tuple(coeffs[: max(order, exponent) + 1]))
    # exponent < 0: series starts at q^exponent
    k = -exponent
    coeffs = [-c] + [ZERO] * max(order + k, k)
    coeffs[k] = ONE
    return QSeries(Fraction(exponent), tuple(coeffs))


def q_pochhammer(c, j, n: int | None, order: int) -> QSeries:
    """(c q^j; q)_n = prod_{k=0}^{n-1} (1 - c q^{j+k}), truncated at `order`.

    n=None means the infinite product; factors whose q-exponent exceeds `order`
    cannot touch the kept coefficients and are dropped, which requires j > 0
    (or j = 0 with finitely many factors).
    """
    c = _as_frac(c)
    j = _as_frac(j)
    if j.denominator != 1:
        raise NonIntegerOffsetGap("q-Pochhammer exponent must be an integer")
    j = j.numerator
    if n is None:
        if j <= 0:
            raise SeriesError("infinite q-Pochhammer needs a positive starting exponent")
        ks = range(0, max(0, order - j + 1))
    else:
        if n < 0:
            raise ValueError("negative length")
        ks = range(n)
    neg = sum(min(0, j + k) for k in ks)
    work = order - neg  # slack so negative-exponent factors still cover q^order
    result = QSeries.one(work)
    for k in ks:
        e = j + k
        if e > work:
            continue  # touches only exponents beyond q^order
        result = result * binomial_factor(c, e, work)
    rel = int(Fraction(order) - result.offset)
    if 0 <= rel < result.trunc_order:
        result = result.truncate(rel)
    return result


def euler_product(order: int) -> QSeries:
    """(q; q)_inf to the given order: 1 - q - q^2 + q^5 + q^7 - ..."""
    return q_pochhammer(ONE, 1, None, order)
