"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Values of additive/multiplicative characters, Gauss sums and Weil indices
all live here, so that no root of unity ever round-trips through floating
point.  An element is a sparse integer-exponent map {k: c_k} representing
sum c_k * zeta_N^k with zeta_N = e^(2*pi*i/N); equality is decided by
reduction modulo the N-th cyclotomic polynomial.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache
from math import gcd


def _poly_divmod(num: list[Fraction], den: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    # dense coefficient lists, lowest degree first; den must be monic
    num = num[:]
    dn = len(den) - 1
    quot = [Fraction(0)] * max(len(num) - dn, 0)
    for i in range(len(num) - 1, dn - 1, -1):
        c = num[i]
        if c:
            quot[i - dn] = c
            for j, d in enumerate(den):
                num[i - dn + j] -= c * d
    while num and not num[-1]:
        num.pop()
    return quot, num


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[Fraction, ...]:
    """Coefficients of Phi_n, lowest degree first."""
    if n == 1:
        return (Fraction(-1), Fraction(1))
    # x^n - 1 divided by the product of Phi_d over proper divisors d | n
    num = [Fraction(0)] * (n + 1)
    num[0] = Fraction(-1)
    num[n] = Fraction(1)
    for d in range(1, n):
        if n % d == 0:
            q, r = _poly_divmod(num, list(cyclotomic_poly(d)))
            assert not r, "cyclotomic division must be exact"
            num = q
    return tuple(num)


class Cyclo:
    """An element of Q(zeta_N)."""

    __slots__ = ("n", "c")

    def __init__(self, n: int, coeffs: dict[int, Fraction] | None = None):
        self.n = n
        c: dict[int, Fraction] = {}
        if coeffs:
            for k, v in coeffs.items():
                v = Fraction(v)
                if v:
                    k %= n
                    if k in c:
                        c[k] += v
                        if not c[k]:
                            del c[k]
                    else:
                        c[k] = v
        self.c = c

    # -- constructors -------------------------------------------------

    @staticmethod
    def rational(x, n: int = 1) -> "Cyclo":
        return Cyclo(n, {0: Fraction(x)})

    @staticmethod
    def zeta(n: int, k: int = 1) -> "Cyclo":
        return Cyclo(n, {k % n: Fraction(1)})

    @staticmethod
    def root_of_unity(num: int, den: int) -> "Cyclo":
        """e^(2*pi*i*num/den) as an exact element of Q(zeta_den)."""
        den = abs(den)
        g = gcd(num % den, den) if num % den else den
        return Cyclo.zeta(den // g, (num % den) // g)

    # -- conductor handling -------------------------------------------

    def promote(self, m: int) -> "Cyclo":
        if m == self.n:
            return self
        assert m % self.n == 0
        f = m // self.n
        return Cyclo(m, {k * f: v for k, v in self.c.items()})

    @staticmethod
    def _common(a: "Cyclo", b: "Cyclo") -> tuple["Cyclo", "Cyclo"]:
        if a.n == b.n:
            return a, b
        m = a.n * b.n // gcd(a.n, b.n)
        return a.promote(m), b.promote(m)

    # -- ring operations ----------------------------------------------

    def __add__(self, other) -> "Cyclo":
        other = self._coerce(other)
        a, b = self._common(self, other)
        c = dict(a.c)
        for k, v in b.c.items():
            c[k] = c.get(k, Fraction(0)) + v
        return Cyclo(a.n, c)

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self) -> "Cyclo":
        return Cyclo(self.n, {k: -v for k, v in self.c.items()})

    def __sub__(self, other) -> "Cyclo":
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other) -> "Cyclo":
        other = self._coerce(other)
        a, b = self._common(self, other)
        c: dict[int, Fraction] = {}
        for k1, v1 in a.c.items():
            for k2, v2 in b.c.items():
                k = (k1 + k2) % a.n
                c[k] = c.get(k, Fraction(0)) + v1 * v2
        return Cyclo(a.n, c)

    def __rmul__(self, other):
        return self.__mul__(other)

    def _coerce(self, other) -> "Cyclo":
        if isinstance(other, Cyclo):
            return other
        if isinstance(other, (int, Fraction)):
            return Cyclo.rational(other)
        return NotImplemented  # type: ignore[return-value]

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(1, 1) / Fraction(other)
            return Cyclo(self.n, {k: v * q for k, v in self.c.items()})
        raise TypeError("division only by rationals; invert roots of unity via conj")

    def conj(self) -> "Cyclo":
        """Complex conjugation, zeta_N -> zeta_N^(-1)."""
        return Cyclo(self.n, {(-k) % self.n: v for k, v in self.c.items()})

    def galois(self, a: int) -> "Cyclo":
        """The automorphism zeta_N -> zeta_N^a for gcd(a, N) = 1."""
        assert gcd(a, self.n) == 1
        return Cyclo(self.n, {(k * a) % self.n: v for k, v in self.c.items()})

    # -- normal form and comparisons ----------------------------------

    def _reduced(self) -> list[Fraction]:
        dense = [Fraction(0)] * self.n
        for k, v in self.c.items():
            dense[k] += v
        if self.n == 1:
            return dense if dense[0] else []
        _, rem = _poly_divmod(dense, list(cyclotomic_poly(self.n)))
        return rem

    def is_zero(self) -> bool:
        if not self.c:
            return True
        return not self._reduced()

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Cyclo.rational(other)
        if not isinstance(other, Cyclo):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        raise TypeError("Cyclo is unhashable (equality is up to Phi_N reduction)")

    def is_rational(self) -> bool:
        rem = self._reduced()
        return len(rem) <= 1

    def as_rational(self) -> Fraction:
        rem = self._reduced()
        if len(rem) > 1:
            raise ValueError("not a rational number")
        return rem[0] if rem else Fraction(0)

    def norm_squared(self) -> "Cyclo":
        return self * self.conj()

    # -- embedding -----------------------------------------------------

    def evaluate(self) -> complex:
        """Complex embedding sending zeta_N to e^(2*pi*i/N)."""
        z = 0j
        for k, v in self.c.items():
            z += float(v) * cmath.exp(2j * cmath.pi * k / self.n)
        return z

    def __repr__(self):
        if not self.c:
            return "Cyclo(0)"
        parts = [f"{v}*z{self.n}^{k}" for k, v in sorted(self.c.items())]
        return "Cyclo(" + " + ".join(parts) + ")"


def sqrt_prime(p: int) -> Cyclo:
    """sqrt(p) > 0 as an exact cyclotomic number, via quadratic Gauss sums."""
    if p == 2:
        return Cyclo(8, {1: Fraction(1), 7: Fraction(1)})
    g = Cyclo(p)
    for t in range(p):
        g = g + Cyclo.zeta(p, t * t)
    # Gauss: g = sqrt(p) if p = 1 mod 4, and i*sqrt(p) if p = 3 mod 4
    if p % 4 == 1:
        return g
    minus_i = Cyclo.zeta(4, 3)
    return minus_i * g


def sqrt_positive_rational(x: Fraction | int) -> tuple[Fraction, Cyclo]:
    """Write sqrt(x) = r * c with r rational > 0 and c an exact cyclotomic.

    sqrt(a/b) = sqrt(ab)/b; the square-free part of ab contributes one
    sqrt_prime factor per prime.  Used to compare Gauss sums against mu_8
    candidates without leaving exact arithmetic.
    """
    x = Fraction(x)
    assert x > 0
    n = x.numerator * x.denominator
    r = Fraction(1, x.denominator)
    c = Cyclo.rational(1)
    d = 2
    while d * d <= n:
        while n % (d * d) == 0:
            r *= d
            n //= d * d
        if n % d == 0:
            c = c * sqrt_prime(d)
            n //= d
        d += 1
    if n > 1:
        c = c * sqrt_prime(n)
    return r, c
