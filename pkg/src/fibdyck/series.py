"""Exact truncated power series and the zeta functions of the Fibonacci-Dyck shift.

Everything is computed from the algebraic equation ξ - ξ³ = z; the
trigonometric closed form of ξ is only used as a numeric cross-check.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, List, Sequence, Union

Number = Union[int, Fraction]


class NonIntegral(ArithmeticError):
    pass


class Series:
    """Power series a_0 + a_1 z + ... + a_N z^N with exact rational coefficients.

    Binary operations truncate to the smaller order of the two operands.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Number]):
        self.coeffs: List[Fraction] = [Fraction(c) for c in coeffs]
        if not self.coeffs:
            raise ValueError("series needs at least one coefficient")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def constant(cls, c: Number, order: int) -> "Series":
        return cls([c] + [0] * order)

    @classmethod
    def z(cls, order: int) -> "Series":
        return cls([0, 1] + [0] * (order - 1))

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k]

    def __len__(self):
        return len(self.coeffs)

    def truncate(self, order: int) -> "Series":
        return Series(self.coeffs[: order + 1])

    def _lift(self, other) -> "Series":
        if isinstance(other, Series):
            return other
        return Series.constant(other, self.order)

    def __add__(self, other):
        other = self._lift(other)
        m = min(self.order, other.order)
        return Series(a + b for a, b in zip(self.coeffs[: m + 1], other.coeffs[: m + 1]))

    __radd__ = __add__

    def __neg__(self):
        return Series(-a for a in self.coeffs)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Series):
            return Series(a * other for a in self.coeffs)
        m = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        out = [Fraction(0)] * (m + 1)
        for i in range(m + 1):
            ai = a[i]
            if ai:
                for j in range(m + 1 - i):
                    out[i + j] += ai * b[j]
        return Series(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = Series.constant(1, self.order)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __truediv__(self, other):
        if isinstance(other, Series):
            return self * other.inverse()
        return Series(a / other for a in self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Series):
            m = min(self.order, other.order)
            return self.coeffs[: m + 1] == other.coeffs[: m + 1]
        return NotImplemented

    def __repr__(self):
        terms = [f"{c}z^{k}" for k, c in enumerate(self.coeffs) if c]
        return f"Series({' + '.join(terms[:6]) or '0'}{' + ...' if len(terms) > 6 else ''}; O(z^{self.order + 1}))"

    def valuation(self) -> int:
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return len(self.coeffs)

    def shift_down(self, k: int) -> "Series":
        """Exact division by z^k; the order drops by k."""
        if any(self.coeffs[:k]):
            raise ArithmeticError(f"series is not divisible by z^{k}")
        return Series(self.coeffs[k:])

    def inverse(self) -> "Series":
        a = self.coeffs
        if a[0] == 0:
            raise ZeroDivisionError("constant term is zero")
        inv = [Fraction(0)] * len(a)
        inv[0] = 1 / a[0]
        for n in range(1, len(a)):
            s = sum(a[k] * inv[n - k] for k in range(1, n + 1))
            inv[n] = -s / a[0]
        return Series(inv)

    def derivative(self) -> "Series":
        return Series([k * c for k, c in enumerate(self.coeffs)][1:] or [0])

    def integral(self) -> "Series":
        """Antiderivative with zero constant term; the order rises by one."""
        return Series([0] + [c / (k + 1) for k, c in enumerate(self.coeffs)])

    def log(self) -> "Series":
        if self.coeffs[0] != 1:
            raise ValueError("log needs constant term 1")
        return (self.derivative() * self.inverse().truncate(self.order - 1)).integral()

    def exp(self) -> "Series":
        if self.coeffs[0] != 0:
            raise ValueError("exp needs constant term 0")
        a = self.coeffs
        e = [Fraction(0)] * len(a)
        e[0] = Fraction(1)
        # n e_n = sum_k k a_k e_{n-k}
        for n in range(1, len(a)):
            e[n] = sum(k * a[k] * e[n - k] for k in range(1, n + 1)) / n
        return Series(e)

    def sqrt(self) -> "Series":
        a = self.coeffs
        if a[0] != 1:
            raise ValueError("sqrt needs constant term 1")
        r = [Fraction(0)] * len(a)
        r[0] = Fraction(1)
        for n in range(1, len(a)):
            s = sum(r[k] * r[n - k] for k in range(1, n))
            r[n] = (a[n] - s) / 2
        return Series(r)

    def evaluate(self, x: float) -> float:
        return sum(float(c) * x**k for k, c in enumerate(self.coeffs))


# ---------------------------------------------------------------------------
# ξ and the zeta functions


def xi_series(order: int) -> Series:
    """The odd series ξ = z + z³ + 3z⁵ + 12z⁷ + ... solving ξ - ξ³ = z."""
    if order < 1:
        raise ValueError("order must be at least 1")
    c = [Fraction(0)] * (order + 1)
    c[1] = Fraction(1)
    # [z^n] ξ = [z^n] ξ³ for n > 1; ξ³ only involves coefficients below n
    sq = [Fraction(0)] * (order + 1)  # ξ², maintained incrementally
    for n in range(2, order + 1):
        cube = sum(sq[k] * c[n - k] for k in range(2, n))
        c[n] = cube
        sq[n] = sum(c[k] * c[n - k] for k in range(1, n))
    return Series(c)


def xi_closed_form(z: float) -> float:
    return 2 / math.sqrt(3) * math.sin(math.asin(3 * math.sqrt(3) / 2 * z) / 3)


KINDS = ("neutral", "alpha0", "alpha1", "full", "plus")

# ζ_{α(0)} and ζ_{α(1)} count the points of both signs with that multiplier,
# κ > 1 included; settled against enumeration for every period up to 12
ALPHA_COVERS_BOTH_SIGNS = True


def zeta_series(kind: str, order: int) -> Series:
    """Truncated zeta function of the named class of periodic points.

    ``alpha0``/``alpha1`` count points of either sign with that multiplier;
    ``plus`` counts points with positive multiplier.
    """
    # divisions by z^k lose k orders; compute with headroom and cut back
    N = order + 4
    xi = xi_series(N)
    z = Series.z(N)
    if kind == "neutral":
        s = (xi ** 3).shift_down(3)
    elif kind == "alpha0":
        s = (Series.constant(1, N) - (xi * xi).shift_down(1)).inverse() ** 2
    elif kind == "alpha1":
        s = (Series.constant(1, N) - (xi ** 3).shift_down(1)).inverse() ** 2
    elif kind == "full":
        q = xi * xi * 2 + xi - 1
        s = xi.shift_down(1) * (q * q).inverse()
    elif kind == "plus":
        s = (zeta_series("full", N) * zeta_series("neutral", N).inverse()).sqrt()
    else:
        raise ValueError(f"unknown zeta kind {kind!r}; expected one of {KINDS}")
    return s.truncate(order)


def point_counts(kind: str, order: int) -> List[int]:
    """card P_n for n = 1..order, read off as n [z^n] log ζ."""
    lg = zeta_series(kind, order).log()
    out = []
    for n in range(1, order + 1):
        v = n * lg[n]
        if v.denominator != 1 or v < 0:
            raise NonIntegral(f"{kind}: n[z^{n}] log ζ = {v}")
        out.append(int(v))
    return out


def code_generating_function(code: str, order: int) -> Series:
    """g_{C*} = ξ²/z² and g_{C°(1)*} = ξ/z."""
    xi = xi_series(order + 2)
    if code == "C*":
        return (xi * xi).shift_down(2).truncate(order)
    if code == "C°(1)*":
        return xi.shift_down(1).truncate(order)
    raise ValueError(code)


def entropy_constants():
    """(h_a, h_c) = (3/2 log 3 - log 2, 3 log 2 - log 3)."""
    return 1.5 * math.log(3) - math.log(2), 3 * math.log(2) - math.log(3)


ENTROPY_SYMBOLIC = ("3/2 log 3 - log 2", "3 log 2 - log 3")
