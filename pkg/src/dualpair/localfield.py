"""Exact arithmetic at the places of Q.

A place is either the real place or a prime p.  The standard additive
character is fixed once and for all:

    psi_real(x) = e^(2*pi*i*x),        psi_p(x) = e^(-2*pi*i*{x}_p),

so every finite place has character level d = 0.  Hilbert symbols are
computed by the classical congruence formulas; a brute-force local
solvability search (with a multivariate Hensel certificate) is provided
as an independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .cyclo import Cyclo


@dataclass(frozen=True)
class Place:
    """The real place (p is None) or the finite place at a prime p."""

    p: int | None

    def __post_init__(self):
        if self.p is not None and not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @property
    def is_real(self) -> bool:
        return self.p is None

    @property
    def is_finite(self) -> bool:
        return self.p is not None

    @property
    def q(self) -> int:
        if self.p is None:
            raise ValueError("the real place has no residue field")
        return self.p

    @property
    def d(self) -> int:
        # level of the standard character: 0 at every finite place of Q
        return 0

    def __repr__(self):
        return "Place(real)" if self.p is None else f"Place({self.p})"


REAL = Place(None)


def finite(p: int) -> Place:
    return Place(p)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def primes_up_to(n: int) -> list[int]:
    sieve = bytearray([1]) * (n + 1)
    sieve[:2] = b"\x00\x00"
    for i in range(2, int(n**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = b"\x00" * len(sieve[i * i :: i])
    return [i for i in range(n + 1) if sieve[i]]


# ---------------------------------------------------------------------------
# valuations and square classes
# ---------------------------------------------------------------------------


def valuation(x: Fraction | int, p: int) -> int:
    x = Fraction(x)
    if x == 0:
        raise ValueError("valuation of 0")
    v = 0
    n = x.numerator
    while n % p == 0:
        n //= p
        v += 1
    n = x.denominator
    while n % p == 0:
        n //= p
        v -= 1
    return v


@dataclass(frozen=True)
class UnitValDecomp:
    valuation: int
    unit: Fraction


def unit_val(a: Fraction | int, p: int) -> UnitValDecomp:
    """Write a = p^v * u with u a p-adic unit; exact."""
    a = Fraction(a)
    if a == 0:
        raise ValueError("a must be nonzero")
    v = valuation(a, p)
    return UnitValDecomp(v, a / Fraction(p) ** v)


def unit_mod(u: Fraction, p: int, k: int = 1) -> int:
    """Reduce a p-adic unit (given as a rational) modulo p^k."""
    m = p**k
    num = u.numerator % m
    den = u.denominator % m
    assert den % p != 0 and num % p != 0, "not a p-adic unit"
    return (num * pow(den, -1, m)) % m


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ValueError("a divisible by p")
    r = pow(a, (p - 1) // 2, p)
    return 1 if r == 1 else -1


def is_local_square(a: Fraction | int, v: Place) -> bool:
    a = Fraction(a)
    if a == 0:
        raise ValueError("a must be nonzero")
    if v.is_real:
        return a > 0
    p = v.p
    d = unit_val(a, p)
    if d.valuation % 2:
        return False
    if p == 2:
        return unit_mod(d.unit, 2, 3) == 1
    return legendre(unit_mod(d.unit, p), p) == 1


def square_class_key(a: Fraction | int, v: Place) -> tuple:
    """A hashable invariant of the square class of a in F_v^x."""
    a = Fraction(a)
    if v.is_real:
        return ("real", a > 0)
    p = v.p
    d = unit_val(a, p)
    if p == 2:
        return (2, d.valuation % 2, unit_mod(d.unit, 2, 3))
    return (p, d.valuation % 2, legendre(unit_mod(d.unit, p), p))


def square_class_rep(a: Fraction | int, v: Place) -> Fraction:
    """A small canonical rational in the same local square class as a."""
    a = Fraction(a)
    if v.is_real:
        return Fraction(1) if a > 0 else Fraction(-1)
    p = v.p
    d = unit_val(a, p)
    e = d.valuation % 2
    if p == 2:
        u = unit_mod(d.unit, 2, 3)  # in {1,3,5,7}
        rep = {1: 1, 3: 3, 5: 5, 7: 7}[u]
    else:
        rep = 1 if legendre(unit_mod(d.unit, p), p) == 1 else smallest_nonresidue(p)
    return Fraction(rep * p**e)


@lru_cache(maxsize=None)
def smallest_nonresidue(p: int) -> int:
    for r in range(2, p):
        if legendre(r, p) == -1:
            return r
    raise ValueError("no nonresidue found")


# ---------------------------------------------------------------------------
# Hilbert symbols
# ---------------------------------------------------------------------------


def hilbert_symbol(a: Fraction | int, b: Fraction | int, v: Place) -> int:
    """Quadratic Hilbert symbol (a, b) at the place v, by the congruence
    formulas.  The brute-force oracle below is the ground truth in tests."""
    a, b = Fraction(a), Fraction(b)
    if a == 0 or b == 0:
        raise ValueError("Hilbert symbol requires nonzero arguments")
    if v.is_real:
        return -1 if (a < 0 and b < 0) else 1
    p = v.p
    da, db = unit_val(a, p), unit_val(b, p)
    al, be = da.valuation, db.valuation
    if p == 2:
        u = unit_mod(da.unit, 2, 3)
        w = unit_mod(db.unit, 2, 3)
        eps_u, eps_w = ((u - 1) // 2) % 2, ((w - 1) // 2) % 2
        om_u, om_w = ((u * u - 1) // 8) % 2, ((w * w - 1) // 8) % 2
        e = eps_u * eps_w + al * om_w + be * om_u
        return -1 if e % 2 else 1
    lu = legendre(unit_mod(da.unit, p), p)
    lw = legendre(unit_mod(db.unit, p), p)
    sgn = 1
    if (al * be) % 2 and (p % 4 == 3):
        sgn = -sgn
    if be % 2 and lu == -1:
        sgn = -sgn
    if al % 2 and lw == -1:
        sgn = -sgn
    return sgn


def hilbert_support(a: Fraction, b: Fraction) -> list[Place]:
    """Places where (a, b) could be nontrivial: the real place and primes
    dividing 2ab."""
    ps = {2}
    for x in (a, b):
        for n in (x.numerator, x.denominator):
            n = abs(n)
            d = 2
            while d * d <= n:
                if n % d == 0:
                    ps.add(d)
                    while n % d == 0:
                        n //= d
                d += 1
            if n > 1:
                ps.add(n)
    return [REAL] + [finite(p) for p in sorted(ps)]


def hilbert_symbol_oracle(a: Fraction | int, b: Fraction | int, v: Place) -> int:
    """Independent oracle: decide solvability of z^2 = a x^2 + b y^2 over F_v
    by a primitive-solution search modulo p^N together with a multivariate
    Hensel certificate.  Exact but slow; for tests."""
    a, b = Fraction(a), Fraction(b)
    if v.is_real:
        return -1 if (a < 0 and b < 0) else 1
    p = v.p
    # replace a, b by integer square-class representatives p^e * unit
    aa = _int_class_rep(a, p)
    bb = _int_class_rep(b, p)
    e = (1 if p == 2 else 0) + max(valuation(aa, p), valuation(bb, p))
    n_exp = 2 * e + 1
    mod = p**n_exp
    sq: dict[int, bool] = {}
    for z in range(mod):
        val = (z * z) % mod
        unit = z % p != 0
        if val not in sq:
            sq[val] = unit
        elif unit and not sq[val]:
            sq[val] = True
    a_m, b_m = aa % mod, bb % mod
    for x in range(mod):
        ax2 = (a_m * x * x) % mod
        x_unit = x % p != 0
        for y in range(mod):
            t = (ax2 + b_m * y * y) % mod
            if t in sq:
                if x_unit or (y % p != 0) or sq[t]:
                    return 1
    return -1


def _int_class_rep(a: Fraction, p: int) -> int:
    d = unit_val(a, p)
    e = d.valuation % 2
    # integer congruent to the unit part modulo a high power of p
    u = unit_mod(d.unit, p, 6 if p == 2 else 4)
    return u * p**e


# ---------------------------------------------------------------------------
# additive character
# ---------------------------------------------------------------------------


def padic_fractional_part(x: Fraction, p: int) -> Fraction:
    """{x}_p: the unique rational a/p^m in [0,1) with x - a/p^m in Z_p."""
    if x == 0:
        return Fraction(0)
    v = valuation(x, p)
    if v >= 0:
        return Fraction(0)
    m = -v
    pm = p**m
    den_prime = x.denominator // pm
    num = (x.numerator * pow(den_prime, -1, pm)) % pm
    return Fraction(num, pm)


def psi_finite(x: Fraction | int, p: int) -> Cyclo:
    """psi_p(x) = e^(-2*pi*i*{x}_p) as an exact root of unity."""
    fr = padic_fractional_part(Fraction(x), p)
    if fr == 0:
        return Cyclo.rational(1)
    return Cyclo.root_of_unity(-fr.numerator, fr.denominator)


# ---------------------------------------------------------------------------
# multiplicative characters and Gauss sums
# ---------------------------------------------------------------------------


class UnitCharacter:
    """A unitary character of Q_p^x, ramified of conductor p^n (n >= 1):
    determined by its values on (Z/p^n)^x and its value on the uniformizer.

    Values are exact roots of unity.  For odd p the unit group mod p^n is
    cyclic; the character is stored through a generator and a discrete-log
    table.
    """

    def __init__(self, p: int, n: int, order_index: int = 1, pi_value: Cyclo | None = None):
        if p == 2:
            raise NotImplementedError("ramified characters at p = 2 are not needed over Q")
        if n < 1:
            raise ValueError("conductor exponent must be >= 1")
        self.p = p
        self.n = n
        self.modulus = p**n
        self.group_order = (p - 1) * p ** (n - 1)
        g = _unit_group_generator(p, n)
        self.generator = g
        # character value on the generator: a primitive root of unity of
        # order exactly group_order / gcd  -- order_index selects zeta^order_index
        self.order_index = order_index % self.group_order
        self._dlog = {}
        acc = 1
        for k in range(self.group_order):
            self._dlog[acc] = k
            acc = (acc * g) % self.modulus
        self.pi_value = pi_value if pi_value is not None else Cyclo.rational(1)
        if not self._has_exact_conductor():
            raise ValueError("character does not have exact conductor p^n")

    def _has_exact_conductor(self) -> bool:
        # trivial on 1 + p^n Z_p holds by construction (values factor mod p^n);
        # require nontrivial on 1 + p^(n-1) (n > 1) or on units (n = 1)
        if self.n == 1:
            return self.order_index % self.group_order != 0
        for t in range(self.p):
            x = (1 + t * self.p ** (self.n - 1)) % self.modulus
            if x != 1 and not self.value_on_unit(x) == Cyclo.rational(1):
                return True
        return False

    def value_on_unit(self, u: int | Fraction) -> Cyclo:
        if isinstance(u, Fraction):
            u = unit_mod(u, self.p, self.n)
        u %= self.modulus
        k = self._dlog[u]
        return Cyclo.zeta(self.group_order, (k * self.order_index) % self.group_order)

    def value(self, x: Fraction | int) -> Cyclo:
        """Value at any nonzero rational, via x = p^v * unit."""
        d = unit_val(Fraction(x), self.p)
        out = self.value_on_unit(d.unit)
        v = d.valuation
        if v > 0:
            for _ in range(v):
                out = out * self.pi_value
        elif v < 0:
            for _ in range(-v):
                out = out * self.pi_value.conj()
        return out

    def conj_char(self) -> "UnitCharacter":
        return UnitCharacter(self.p, self.n, -self.order_index, self.pi_value.conj())

    @staticmethod
    def quadratic(p: int) -> "UnitCharacter":
        """The quadratic character mod p (conductor p), p odd."""
        ch = UnitCharacter(p, 1, ((p - 1) // 2))
        return ch

    def is_quadratic(self) -> bool:
        return (2 * self.order_index) % self.group_order == 0


@lru_cache(maxsize=None)
def _unit_group_generator(p: int, n: int) -> int:
    m = p**n
    order = (p - 1) * p ** (n - 1)
    facs = _prime_factors(order)
    for g in range(2, m):
        if g % p == 0:
            continue
        if all(pow(g, order // q, m) != 1 for q in facs):
            return g
    raise ValueError("no generator found")


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def gauss_sum(mu: UnitCharacter, v: Place) -> Cyclo:
    """g(mu, psi) = int_{pi^-n o^x} mu(y) psi(y) dy, exact.

    With the self-dual measure (vol(o) = 1 at level 0) this equals
    mu(pi)^-n * sum over units u mod p^n of mu(u) psi_p(u / p^n).
    """
    if v.is_finite and v.p != mu.p:
        raise ValueError("character and place have different residue characteristics")
    if v.is_real:
        raise ValueError("Gauss sums are defined at finite places")
    p, n = mu.p, mu.n
    pn = p**n
    total = Cyclo.rational(0)
    for u in range(1, pn):
        if u % p == 0:
            continue
        total = total + mu.value_on_unit(u) * psi_finite(Fraction(u, pn), p)
    piinv = mu.pi_value.conj()
    for _ in range(n):
        total = total * piinv
    return total


# ---------------------------------------------------------------------------
# local zeta factors
# ---------------------------------------------------------------------------


def local_zeta(v: Place, s: int):
    """zeta_v(s): exact rational (1 - q^-s)^-1 at finite places; the
    symbolic expression pi^(-s/2) Gamma(s/2) at the real place."""
    if v.is_finite:
        if s < 1:
            raise ValueError("s >= 1 at finite places")
        return 1 / (1 - Fraction(1, v.q**s))
    import sympy

    return sympy.pi ** (-sympy.Rational(s, 2)) * sympy.gamma(sympy.Rational(s, 2))


def zeta_q_minus1() -> Fraction:
    """zeta_Q(-1) = -1/12 (classical; rederived from the functional
    equation in the test suite)."""
    return Fraction(-1, 12)
