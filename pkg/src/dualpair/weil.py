"""Weil indices as exact eighth roots of unity, and invariants of
rational symmetric forms.

gamma_v(a*psi) at a finite place is computed from its defining property

    int phi(x) psi(a x^2) dx = gamma * |2a|^(-1/2) int phihat(x) psi(-x^2/4a) dx

by taking phi the indicator of p^-k o and evaluating the left side as an
exact quadratic Gauss sum in a cyclotomic field; the result is matched
against the eight candidates zeta_8^j exactly.  At the real place the
value is pinned by a regulated Fresnel quadrature matched into mu_8 with
an explicit separation margin.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .cyclo import Cyclo, sqrt_positive_rational
from .localfield import (
    Place,
    hilbert_symbol,
    psi_finite,
    square_class_key,
    square_class_rep,
    unit_val,
)


@dataclass(frozen=True)
class Mu8:
    """e^(2*pi*i*k/8), group law = addition of exponents mod 8."""

    k: int

    def __post_init__(self):
        object.__setattr__(self, "k", self.k % 8)

    def __mul__(self, other: "Mu8") -> "Mu8":
        return Mu8(self.k + other.k)

    def inv(self) -> "Mu8":
        return Mu8(-self.k)

    def __pow__(self, n: int) -> "Mu8":
        return Mu8(self.k * n)

    def conj(self) -> "Mu8":
        return self.inv()

    def as_cyclo(self) -> Cyclo:
        return Cyclo.zeta(8, self.k)

    def evaluate(self) -> complex:
        return cmath.exp(2j * cmath.pi * self.k / 8)

    @staticmethod
    def from_sign(s: int) -> "Mu8":
        if s == 1:
            return Mu8(0)
        if s == -1:
            return Mu8(4)
        raise ValueError("sign must be +-1")

    def __repr__(self):
        return f"Mu8({self.k})"


ONE = Mu8(0)


# ---------------------------------------------------------------------------
# gamma of a scaled character
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _gamma0_key(key: tuple, rep_num: int, rep_den: int, p: int | None) -> Mu8:
    rep = Fraction(rep_num, rep_den)
    if p is None:
        return _gamma0_real(rep)
    return _gamma0_finite(rep, p)


def gamma0(a: Fraction | int, v: Place) -> Mu8:
    """gamma_{F_v}(a * psi_v) as an exact eighth root of unity."""
    a = Fraction(a)
    if a == 0:
        raise ValueError("a must be nonzero")
    rep = square_class_rep(a, v)
    return _gamma0_key(square_class_key(a, v), rep.numerator, rep.denominator, v.p)


def _gamma0_finite(a: Fraction, p: int) -> Mu8:
    v2 = 1 if p == 2 else 0
    va = unit_val(a, p).valuation
    k = max((va + 1) // 2 + v2, 0)
    m = max(k - va - v2, (-va + 1) // 2, -k)
    # sum of psi(a t^2) over t in p^-k o / p^m o, t = s / p^k
    total = Cyclo.rational(0)
    pk = p**k
    for s in range(pk * p**m):
        total = total + psi_finite(a * Fraction(s, pk) ** 2, p)
    # gamma = |2a|^(1/2) p^-m total with |2a|^(1/2) = p^(-(va+v2)/2), so the
    # sum must equal zeta_8^j * p^(m + (va+v2)/2) for exactly one j
    half = va + v2
    scale = Fraction(p) ** (m + half // 2)
    if half % 2 == 0:
        target = Cyclo.rational(scale)
    else:
        r, c = sqrt_positive_rational(p)  # sqrt(p) = r * c exactly
        target = c * (scale * r)
    for j in range(8):
        if total == Cyclo.zeta(8, j) * target:
            return Mu8(j)
    raise ArithmeticError(f"Gauss sum did not match any mu_8 candidate (a={a}, p={p})")


def _gamma0_real(a: Fraction) -> Mu8:
    g = fresnel_gamma(float(a))
    best, dist = None, 10.0
    second = 10.0
    for j in range(8):
        d = abs(g - cmath.exp(2j * cmath.pi * j / 8))
        if d < dist:
            second = dist
            best, dist = j, d
        elif d < second:
            second = d
    if second - dist < 0.2:
        raise ArithmeticError("Fresnel value not separated from mu_8 candidates")
    return Mu8(best)


def fresnel_gamma(a: float, eps: float = 1e-3) -> complex:
    """Regulated Fresnel integral int e^(2 pi i a x^2) g_eps(x) dx, normalized
    to modulus one.  Numerical oracle for gamma at the real place."""
    import numpy as np

    t = np.linspace(-60.0, 60.0, 2_000_001)
    integrand = np.exp(2j * np.pi * a * t * t - np.pi * eps * t * t)
    val = np.trapezoid(integrand, t)
    return complex(val / abs(val))


def gamma_base(v: Place, scale: Fraction | int = 1) -> Mu8:
    """gamma_{F_v}(scale * psi_v)."""
    return gamma0(Fraction(scale), v)


def gamma_scaled(a: Fraction | int, v: Place, scale: Fraction | int = 1) -> Mu8:
    """gamma_{F_v}(a, scale * psi_v) = gamma(a*scale*psi) / gamma(scale*psi)."""
    a = Fraction(a)
    s = Fraction(scale)
    if a == 0 or s == 0:
        raise ValueError("nonzero arguments required")
    return gamma0(a * s, v) * gamma0(s, v).inv()


# ---------------------------------------------------------------------------
# symmetric forms
# ---------------------------------------------------------------------------


class SymForm:
    """A symmetric bilinear form over Q, as a symmetric rational matrix.
    The 0-dimensional form is allowed (it is the identity for direct sums
    and shows up as a degenerate Leray invariant)."""

    def __init__(self, entries: list[list[Fraction]]):
        m = len(entries)
        self.m = m
        self.a = [[Fraction(entries[i][j]) for j in range(m)] for i in range(m)]
        for i in range(m):
            for j in range(m):
                if self.a[i][j] != self.a[j][i]:
                    raise ValueError("matrix is not symmetric")

    @staticmethod
    def diagonal(entries: list) -> "SymForm":
        m = len(entries)
        return SymForm([[Fraction(entries[i]) if i == j else Fraction(0) for j in range(m)] for i in range(m)])

    @staticmethod
    def empty() -> "SymForm":
        return SymForm([])

    def det(self) -> Fraction:
        from ._linalg import det

        if self.m == 0:
            return Fraction(1)
        return det(self.a)

    def is_nondegenerate(self) -> bool:
        return self.m == 0 or self.det() != 0

    def diagonalize(self) -> list[Fraction]:
        """Diagonal entries of a congruent diagonal form, by symmetric
        Gaussian elimination.  Pivots: first nonzero diagonal entry, else
        first nonzero off-diagonal entry (hyperbolic extraction by a row
        and column addition)."""
        a = [row[:] for row in self.a]
        m = self.m
        out: list[Fraction] = []
        idx = list(range(m))
        while idx:
            piv = None
            for i in idx:
                if a[i][i] != 0:
                    piv = i
                    break
            if piv is None:
                found = None
                for i in idx:
                    for j in idx:
                        if j > i and a[i][j] != 0:
                            found = (i, j)
                            break
                    if found:
                        break
                if found is None:
                    raise ValueError("form is degenerate")
                i0, j0 = found
                # congruence x_i0 -> x_i0 + x_j0 creates a diagonal pivot
                for t in idx:
                    a[i0][t] += a[j0][t]
                for t in idx:
                    a[t][i0] += a[t][j0]
                piv = i0
            d = a[piv][piv]
            out.append(d)
            rest = [i for i in idx if i != piv]
            for i in rest:
                c = a[i][piv] / d
                if c:
                    for j in idx:
                        a[i][j] -= c * a[piv][j]
                    for j in idx:
                        a[j][i] -= c * a[j][piv]
            idx = rest
        return out

    def direct_sum(self, other: "SymForm") -> "SymForm":
        m, n = self.m, other.m
        z = Fraction(0)
        rows = []
        for i in range(m):
            rows.append(self.a[i] + [z] * n)
        for i in range(n):
            rows.append([z] * m + other.a[i])
        return SymForm(rows)


def det_square_class(q: SymForm, v: Place) -> Fraction:
    return square_class_rep(q.det(), v) if q.m else Fraction(1)


def hasse_invariant(q: SymForm, v: Place) -> int:
    """h(q) = prod_{i<j} (a_i, a_j)_v over a diagonalization; +1 for the
    empty form."""
    if q.m == 0:
        return 1
    if not q.is_nondegenerate():
        raise ValueError("Hasse invariant requires a nondegenerate form")
    diag = q.diagonalize()
    h = 1
    for i in range(len(diag)):
        for j in range(i + 1, len(diag)):
            h *= hilbert_symbol(diag[i], diag[j], v)
    return h


def weil_index_form(q: SymForm, v: Place, scale: Fraction | int = 1) -> Mu8:
    """gamma(scale*psi o q) = gamma(scale*psi)^m gamma(det q, scale*psi) h(q)."""
    if q.m == 0:
        return ONE
    if not q.is_nondegenerate():
        raise ValueError("Weil index requires a nondegenerate form")
    s = Fraction(scale)
    g = gamma_base(v, s) ** q.m
    g = g * gamma_scaled(q.det(), v, s)
    g = g * Mu8.from_sign(hasse_invariant(q, v))
    return g
