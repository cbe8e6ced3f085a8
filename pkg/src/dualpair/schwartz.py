"""Schwartz functions for the dual pair: the catalogue entries phi' on the
auxiliary polarization, the Weil-representation generator actions, the
partial Fourier transform to the standard polarization, and exact inner
products.

p-adic functions form a closed term algebra.  A term is a coefficient
(a cyclotomic number times the square root of a positive rational) times
a product of one-variable factors -- coset boxes or unit-supported
characters, each with a quadratic/linear phase -- evaluated at fixed
linear forms of the coordinates, together with an optional cross phase
psi(sum c_ij l_i(x) l_j(x)).  Every p-adic integral is a finite coset sum:
one-variable transforms have closed forms (validated against the brute
coset-sum oracle), and inner products factor through the per-coordinate
structure.  Real functions are polynomials times diagonal Gaussians with
complex coefficients; comparisons at 1e-9, internal work at 1e-12.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import product as iproduct

from . import _linalg as la
from ._linalg import Mat
from .cyclo import Cyclo
from .localfield import Place, UnitCharacter, gauss_sum, psi_finite, valuation
from .qspaces import CASE_J, CASE_J1, CASE_J2, CASE_U, CaseData
from .weil import Mu8, gamma0

# ---------------------------------------------------------------------------
# value ring: sums of cyclotomic multiples of square roots
# ---------------------------------------------------------------------------


def _squarefree_split(x: Fraction) -> tuple[Fraction, int]:
    """x = r^2 * m with m a squarefree positive integer (x > 0)."""
    assert x > 0
    n = x.numerator * x.denominator
    r = Fraction(1, x.denominator)
    m = 1
    d = 2
    while d * d <= n:
        while n % (d * d) == 0:
            r *= d
            n //= d * d
        if n % d == 0:
            m *= d
            n //= d
        d += 1
    if n > 1:
        m *= n
    return r, m


class AlgVal:
    """sum over squarefree m >= 1 of c_m * sqrt(m) with c_m in Q(zeta)."""

    __slots__ = ("parts",)

    def __init__(self, parts: dict[int, Cyclo] | None = None):
        self.parts = {m: c for m, c in (parts or {}).items() if not c.is_zero()}

    @staticmethod
    def of(c, radicand: Fraction | int = 1) -> "AlgVal":
        if isinstance(c, Mu8):
            c = c.as_cyclo()
        if not isinstance(c, Cyclo):
            c = Cyclo.rational(c)
        if c.is_zero():
            return AlgVal()
        r, m = _squarefree_split(Fraction(radicand))
        return AlgVal({m: c * r})

    def __add__(self, o: "AlgVal") -> "AlgVal":
        out = dict(self.parts)
        for m, c in o.parts.items():
            out[m] = out[m] + c if m in out else c
        return AlgVal(out)

    def __neg__(self) -> "AlgVal":
        return AlgVal({m: -c for m, c in self.parts.items()})

    def __sub__(self, o: "AlgVal") -> "AlgVal":
        return self + (-o)

    def __mul__(self, o) -> "AlgVal":
        if isinstance(o, Mu8):
            o = o.as_cyclo()
        if isinstance(o, (int, Fraction, Cyclo)):
            return AlgVal({m: c * o for m, c in self.parts.items()})
        out: dict[int, Cyclo] = {}
        for m1, c1 in self.parts.items():
            for m2, c2 in o.parts.items():
                r, m = _squarefree_split(Fraction(m1 * m2))
                c = c1 * c2 * r
                out[m] = out[m] + c if m in out else c
        return AlgVal(out)

    def __rmul__(self, o):
        return self * o

    def conj(self) -> "AlgVal":
        return AlgVal({m: c.conj() for m, c in self.parts.items()})

    def as_cyclo(self) -> Cyclo:
        """Fold the square roots into exact cyclotomics (sqrt(p) lies in
        Q(zeta_p) or Q(zeta_4p)); the canonical form for equality."""
        out = Cyclo.rational(0)
        for m, c in self.parts.items():
            out = out + c * _sqrt_cyclo(m)
        return out

    def is_zero(self) -> bool:
        if all(c.is_zero() for c in self.parts.values()):
            return True
        if len(self.parts) == 1:
            return False
        return self.as_cyclo().is_zero()

    def __eq__(self, o) -> bool:
        if isinstance(o, (int, Fraction, Cyclo)):
            o = AlgVal.of(o)
        return (self - o).is_zero()

    def evaluate(self) -> complex:
        return sum((c.evaluate() * math.sqrt(m) for m, c in self.parts.items()), 0j)

    def __repr__(self):
        return "AlgVal(" + (" + ".join(f"sqrt({m})*[{c}]" for m, c in self.parts.items()) or "0") + ")"


ZERO = AlgVal()
ONE_V = AlgVal.of(1)

_SQRT_CYCLO: dict[int, Cyclo] = {}


def _sqrt_cyclo(m: int) -> Cyclo:
    if m not in _SQRT_CYCLO:
        from .cyclo import sqrt_prime

        out = Cyclo.rational(1)
        n = m
        d = 2
        while d * d <= n:
            if n % d == 0:
                out = out * sqrt_prime(d)
                n //= d
            d += 1
        if n > 1:
            out = out * sqrt_prime(n)
        _SQRT_CYCLO[m] = out
    return _SQRT_CYCLO[m]


# ---------------------------------------------------------------------------
# one-variable factors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Box:
    center: Fraction
    level: int


@dataclass(frozen=True)
class UnitSupport:
    m: int
    mu: UnitCharacter | None  # None: trivial character on p^m o^x


@dataclass(frozen=True)
class Factor1D:
    """t -> base(t) * psi(c t^2 + b t)"""

    base: Box | UnitSupport
    c: Fraction = Fraction(0)
    b: Fraction = Fraction(0)

    def supported_at(self, t: Fraction, p: int) -> bool:
        if isinstance(self.base, Box):
            d = t - self.base.center
            return d == 0 or valuation(d, p) >= self.base.level
        return t != 0 and valuation(t, p) == self.base.m

    def value(self, t: Fraction, p: int) -> Cyclo:
        if not self.supported_at(t, p):
            return Cyclo.rational(0)
        out = psi_finite(self.c * t * t + self.b * t, p)
        if isinstance(self.base, UnitSupport) and self.base.mu is not None:
            out = out * self.base.mu.value(t)
        return out


def box0(level: int = 0) -> Factor1D:
    return Factor1D(Box(Fraction(0), level))


def _support_min_val(base: Box | UnitSupport, p: int) -> int:
    if isinstance(base, Box):
        if base.center == 0:
            return base.level
        return min(valuation(base.center, p), base.level)
    return base.m


def constancy_level(f: Factor1D, p: int) -> int:
    """L >= support level such that f is constant on cosets of p^L Z_p."""
    v2 = 1 if p == 2 else 0
    if isinstance(f.base, Box):
        lvl = f.base.level
    else:
        lvl = f.base.m + (f.base.mu.n if f.base.mu is not None else 1)
    tmin = _support_min_val(f.base, p)
    if f.c:
        vc = valuation(f.c, p)
        lvl = max(lvl, -v2 - vc - tmin, -((vc - v2) // 2) if (vc - v2) < 0 else lvl)
        lvl = max(lvl, (-(vc - v2) + 1) // 2)
    if f.b:
        lvl = max(lvl, -valuation(f.b, p))
    return lvl


def support_cosets(f: Factor1D, p: int, level: int | None = None):
    """Representatives t with the support the disjoint union of t + p^L Z_p."""
    L = level if level is not None else constancy_level(f, p)
    if isinstance(f.base, Box):
        k = f.base.level
        for j in range(p ** (L - k)):
            yield f.base.center + j * Fraction(p) ** k
    else:
        m = f.base.m
        for j in range(1, p ** (L - m)):
            if j % p:
                yield j * Fraction(p) ** m


def integral_pair_1d(f: Factor1D, g: Factor1D, p: int, extra_linear: Fraction = Fraction(0)) -> Cyclo:
    """Exact integral of f(t) * conj(g(t)) * psi(extra_linear * t) dt."""
    L = max(constancy_level(f, p), constancy_level(g, p))
    if extra_linear:
        L = max(L, -valuation(extra_linear, p))
    total = Cyclo.rational(0)
    vol = Fraction(p) ** (-L)
    for t in support_cosets(f, p, L):
        val = f.value(t, p)
        if val.is_zero():
            continue
        gval = g.value(t, p)
        if gval.is_zero():
            continue
        term = val * gval.conj()
        if extra_linear:
            term = term * psi_finite(extra_linear * t, p)
        total = total + term
    return total * vol


def fourier_factor_1d(f: Factor1D, p: int, smart: bool = True) -> list[tuple[AlgVal, Factor1D]]:
    """F(z) = int f(t) psi(t z) dt as a finite list (coeff, factor-in-z)."""
    if smart:
        out = _fourier_smart(f, p)
        if out is not None:
            return out
    return _fourier_brute(f, p)


def _fourier_brute(f: Factor1D, p: int) -> list[tuple[AlgVal, Factor1D]]:
    """Coset-sum transform: each support coset t0 + p^L Z_p contributes
    p^-L psi(t0 z) on p^-L Z_p."""
    L = constancy_level(f, p)
    out = []
    vol = Fraction(p) ** (-L)
    for t0 in support_cosets(f, p):
        val = f.value(t0, p)
        if val.is_zero():
            continue
        out.append((AlgVal.of(val * vol), Factor1D(Box(Fraction(0), -L), Fraction(0), t0)))
    return out


def _fourier_smart(f: Factor1D, p: int) -> list[tuple[AlgVal, Factor1D]] | None:
    base = f.base
    if isinstance(base, UnitSupport):
        if f.c or f.b:
            return None
        m, mu = base.m, base.mu
        if mu is None:
            # hat of 1_{p^m o^x} = p^-m 1_{p^-m o} - p^-(m+1) 1_{p^-(m+1) o}
            return [
                (AlgVal.of(Fraction(p) ** (-m)), box0(-m)),
                (AlgVal.of(-(Fraction(p) ** (-m - 1))), box0(-m - 1)),
            ]
        # ramified character: (1_{o^x} mu)-hat = q^-n g(mu,psi) 1 mu^-1 on
        # the shell v(z) = -m-n, scaled by mu(pi)^m p^-m and mu^-1(p^m...)
        n = mu.n
        g = gauss_sum(mu, Place(p))
        out_mu = mu.conj_char()
        coeff = AlgVal.of(
            mu.value(Fraction(p) ** m) * out_mu.value(Fraction(p) ** m) * g * Fraction(p) ** (-m - n)
        )
        return [(coeff, Factor1D(UnitSupport(-m - n, out_mu)))]
    # Box with phases: t = a + p^k s gives
    # int = psi(c a^2 + b a) psi(a z) p^-k I(c p^2k, p^k (2 c a + b + z))
    a, k = base.center, base.level
    A = f.c * Fraction(p) ** (2 * k)
    lead = Fraction(p) ** (-k)
    b0 = 2 * f.c * a + f.b
    if A == 0 or valuation(A, p) >= 0:
        const = psi_finite(f.c * a * a + f.b * a, p)
        return [(AlgVal.of(const * lead), Factor1D(Box(-b0, -k), Fraction(0), a))]
    if valuation(4 * A, p) <= 0:
        g8 = gamma0(A, Place(p))
        v2a = valuation(2 * A, p)
        mag = Fraction(p) ** (v2a // 2)
        coeff = AlgVal.of(g8.as_cyclo() * lead * mag, p if v2a % 2 else 1)
        q = -1 / (4 * f.c)
        const = psi_finite(f.c * a * a + f.b * a + q * b0 * b0, p)
        zc = q
        zb = a + 2 * q * b0
        lvl = v2a - k
        return [(coeff * const, Factor1D(Box(-b0, lvl), zc, zb))]
    # p = 2 boundary (2A a unit): brute oracle
    return None


# ---------------------------------------------------------------------------
# p-adic Schwartz functions
# ---------------------------------------------------------------------------


@dataclass
class PadicTerm:
    coeff: AlgVal
    factors: tuple[Factor1D, Factor1D, Factor1D, Factor1D]
    cross: tuple[tuple[int, int, Fraction], ...] = ()  # psi(sum c l_i l_j)

    def value_at_forms(self, ts: list[Fraction], p: int) -> AlgVal:
        out = self.coeff
        acc = Cyclo.rational(1)
        for f, t in zip(self.factors, ts):
            v = f.value(t, p)
            if v.is_zero():
                return ZERO
            acc = acc * v
        for i, j, c in self.cross:
            acc = acc * psi_finite(c * ts[i] * ts[j], p)
        return out * acc


class PadicFn:
    """A finite sum of terms, with factor j evaluated at the linear form
    forms[j] . x (forms an invertible 4x4 over Q)."""

    def __init__(self, p: int, terms: list[PadicTerm], forms: Mat | None = None):
        self.p = p
        self.terms = terms
        self.forms = forms if forms is not None else la.identity(4)

    def value(self, x: list[Fraction]) -> AlgVal:
        ts = [sum(c * xi for c, xi in zip(row, x)) for row in self.forms]
        out = ZERO
        for t in self.terms:
            out = out + t.value_at_forms(ts, self.p)
        return out

    def scale(self, c: AlgVal | Fraction | int) -> "PadicFn":
        if not isinstance(c, AlgVal):
            c = AlgVal.of(c)
        return PadicFn(self.p, [PadicTerm(t.coeff * c, t.factors, t.cross) for t in self.terms], self.forms)

    def __add__(self, o: "PadicFn") -> "PadicFn":
        assert self.p == o.p and la.mat_eq(self.forms, o.forms)
        return PadicFn(self.p, self.terms + o.terms, self.forms)

    # -- Weil representation generators (on the X' side, forms = identity) --

    def dilate(self, a: Fraction) -> "PadicFn":
        """omega(m(a)) phi(x) = |a|^2 phi(a x)."""
        p = self.p
        norm = AlgVal.of(Fraction(p) ** (-2 * valuation(a, p)))
        out = []
        for t in self.terms:
            facs = []
            coef = t.coeff * norm
            for f in t.factors:
                if isinstance(f.base, Box):
                    nb = Box(f.base.center / a, f.base.level - valuation(a, p))
                else:
                    nb = UnitSupport(f.base.m - valuation(a, p), f.base.mu)
                    if f.base.mu is not None:
                        coef = coef * f.base.mu.value(a)
                facs.append(Factor1D(nb, f.c * a * a, f.b * a))
            cross = tuple((i, j, c * a * a) for i, j, c in t.cross)
            out.append(PadicTerm(coef, tuple(facs), cross))
        return PadicFn(p, out, self.forms)

    def phase_diag(self, coeffs: list[Fraction]) -> "PadicFn":
        """Multiply by psi(sum coeffs[i] x_i^2)."""
        out = []
        for t in self.terms:
            facs = tuple(replace(f, c=f.c + ci) for f, ci in zip(t.factors, coeffs))
            out.append(PadicTerm(t.coeff, facs, t.cross))
        return PadicFn(self.p, out, self.forms)

    def phase_cross(self, entries: list[tuple[int, int, Fraction]]) -> "PadicFn":
        out = []
        for t in self.terms:
            out.append(PadicTerm(t.coeff, t.factors, t.cross + tuple(entries)))
        return PadicFn(self.p, out, self.forms)

    def simplify(self) -> "PadicFn":
        """Drop cross phases that are constant on supports and fold linear
        phases that trivialize."""
        p = self.p
        out = []
        for t in self.terms:
            cross = []
            coeff = t.coeff
            for i, j, c in t.cross:
                fi, fj = t.factors[i], t.factors[j]
                si, sj = _support_min_val(fi.base, p), _support_min_val(fj.base, p)
                li = fi.base.level if isinstance(fi.base, Box) else 10**6
                lj = fj.base.level if isinstance(fj.base, Box) else 10**6
                vc = valuation(c, p)
                # psi(c l_i l_j) constant on supports iff the three defects
                # vanish: c t_i h_j, c h_i t_j, c h_i h_j all integral
                if (
                    isinstance(fi.base, Box)
                    and isinstance(fj.base, Box)
                    and vc + si + lj >= 0
                    and vc + li + sj >= 0
                    and vc + li + lj >= 0
                ):
                    ci, cj = fi.base.center, fj.base.center
                    if ci and cj:
                        coeff = coeff * psi_finite(c * ci * cj, p)
                    continue
                cross.append((i, j, c))
            out.append(PadicTerm(coeff, t.factors, tuple(cross)))
        return PadicFn(p, out, self.forms)

    def fourier(self, pairing: list[tuple[int, Fraction]], measure: Fraction, gamma_sign: int = 1) -> "PadicFn":
        """F(y) = gamma * measure^(1/2)-normalized int phi(x) psi(-B(x,y)) dx
        where B(x, y) = sum_i lambda_i x_i y_{sigma(i)}; pairing[i] =
        (sigma(i), lambda_i).  Requires cross-free terms."""
        p = self.p
        out_terms: list[PadicTerm] = []
        for t in self.terms:
            if t.cross:
                raise NotImplementedError("fourier of cross-phased term: simplify first")
            pieces: list[list[tuple[AlgVal, Factor1D]]] = []
            for i, f in enumerate(t.factors):
                sig, lam = pairing[i]
                # int f(x_i) psi(-lam x_i y_sig) dx_i = hat(f)(-lam y_sig)
                hat = fourier_factor_1d(f, p)
                scaled = []
                for cf, fac in hat:
                    extra, newfac = _substitute_scale(fac, -lam, p)
                    scaled.append((cf * extra, newfac))
                pieces.append(scaled)
            for combo in iproduct(*pieces):
                coeff = t.coeff * AlgVal.of(Fraction(measure))
                if gamma_sign == -1:
                    coeff = coeff * Fraction(-1)
                facs: list[Factor1D | None] = [None] * 4
                for i, (cf, fac) in enumerate(combo):
                    sig, lam = pairing[i]
                    coeff = coeff * cf
                    facs[sig] = fac
                assert all(f is not None for f in facs)
                out_terms.append(PadicTerm(coeff, tuple(facs)))
        return PadicFn(p, out_terms, self.forms)

    def inner(self, o: "PadicFn") -> AlgVal:
        """<f, g> = int f(x) conj(g(x)) dx over Q_p^4 (dx self-dual)."""
        assert self.p == o.p and la.mat_eq(self.forms, o.forms)
        p = self.p
        detL = la.det(self.forms)
        jac = AlgVal.of(Fraction(p) ** valuation(detL, p))
        total = ZERO
        for t1 in self.terms:
            for t2 in o.terms:
                pair_cross = _merge_cross(t1.cross, t2.cross)
                val = t1.coeff * t2.coeff.conj()
                if not pair_cross:
                    acc = Cyclo.rational(1)
                    dead = False
                    for f, g in zip(t1.factors, t2.factors):
                        part = integral_pair_1d(f, g, p)
                        if part.is_zero():
                            dead = True
                            break
                        acc = acc * part
                    if not dead:
                        total = total + val * acc * jac
                    continue
                blocks = _cross_blocks(pair_cross)
                acc = Cyclo.rational(1)
                dead = False
                done: set[int] = set()
                for blk, entries in blocks:
                    part = _integral_block(
                        [t1.factors[i] for i in blk], [t2.factors[i] for i in blk], entries, blk, p
                    )
                    if part.is_zero():
                        dead = True
                        break
                    acc = acc * part
                    done |= set(blk)
                if dead:
                    continue
                for i in range(4):
                    if i in done:
                        continue
                    part = integral_pair_1d(t1.factors[i], t2.factors[i], p)
                    if part.is_zero():
                        dead = True
                        break
                    acc = acc * part
                if not dead:
                    total = total + val * acc * jac
        return total


def _substitute_scale(f: Factor1D, lam: Fraction, p: int) -> tuple[Cyclo, Factor1D]:
    """factor(lam * z) = coeff * factor'(z)."""
    coeff = Cyclo.rational(1)
    if isinstance(f.base, Box):
        nb: Box | UnitSupport = Box(f.base.center / lam, f.base.level - valuation(lam, p))
    else:
        nb = UnitSupport(f.base.m - valuation(lam, p), f.base.mu)
        if f.base.mu is not None:
            coeff = f.base.mu.value(lam)
    return coeff, Factor1D(nb, f.c * lam * lam, f.b * lam)


def _merge_cross(c1, c2):
    out: dict[tuple[int, int], Fraction] = {}
    for i, j, c in c1:
        out[(i, j)] = out.get((i, j), Fraction(0)) + c
    for i, j, c in c2:
        out[(i, j)] = out.get((i, j), Fraction(0)) - c  # conjugate flips sign
    return [(i, j, c) for (i, j), c in out.items() if c]


def _cross_blocks(entries):
    """Group cross entries into connected coordinate blocks."""
    parent = {}

    def find(x):
        while parent.get(x, x) != x:
            x = parent[x]
        return x

    for i, j, _ in entries:
        parent.setdefault(i, i)
        parent.setdefault(j, j)
        parent[find(i)] = find(j)
    blocks: dict[int, list] = {}
    for i, j, c in entries:
        blocks.setdefault(find(i), []).append((i, j, c))
    out = []
    for root, ents in blocks.items():
        coords = sorted({i for e in ents for i in e[:2]})
        out.append((coords, ents))
    return out


def _integral_block(fs, gs, entries, coords, p) -> Cyclo:
    """Exact block integral of prod f_i conj(g_i) psi(sum c x_i x_j) by
    coset enumeration (small blocks only)."""
    levels = [max(constancy_level(f, p), constancy_level(g, p)) for f, g in zip(fs, gs)]
    tmins = [min(_support_min_val(f.base, p), _support_min_val(g.base, p)) for f, g in zip(fs, gs)]
    # raise levels until the cross phase is constant on all cells
    for i, j, c in entries:
        ii, jj = coords.index(i), coords.index(j)
        vc = valuation(c, p)
        levels[ii] = max(levels[ii], -vc - tmins[jj])
        levels[jj] = max(levels[jj], -vc - tmins[ii])
        levels[ii] = max(levels[ii], (-vc + 1) // 2)
        levels[jj] = max(levels[jj], (-vc + 1) // 2)
    reps = []
    for (f, g), L in zip(zip(fs, gs), levels):
        cands = []
        for t in support_cosets(f, p, max(L, constancy_level(f, p))):
            base_level = constancy_level(f, p)
            extra = max(L - base_level, 0)
            for j in range(p**extra):
                cands.append(t + j * Fraction(p) ** base_level)
        reps.append((cands, L))
    total = Cyclo.rational(0)
    volume = Fraction(1)
    for _, L in reps:
        volume *= Fraction(p) ** (-L)
    for combo in iproduct(*(c for c, _ in reps)):
        acc = Cyclo.rational(1)
        dead = False
        for t, f, g in zip(combo, fs, gs):
            v1 = f.value(t, p)
            if v1.is_zero():
                dead = True
                break
            v2 = g.value(t, p)
            if v2.is_zero():
                dead = True
                break
            acc = acc * v1 * v2.conj()
        if dead:
            continue
        for i, j, c in entries:
            acc = acc * psi_finite(c * combo[coords.index(i)] * combo[coords.index(j)], p)
        total = total + acc
    return total * volume


# ---------------------------------------------------------------------------
# case wiring: forms, pairings, measures
# ---------------------------------------------------------------------------

HYPERBOLIC_PAIRING = [
    (3, Fraction(1)),
    (2, Fraction(-1)),
    (1, Fraction(-1)),
    (0, Fraction(1)),
]


def gram_diag(cd: CaseData) -> list[Fraction] | None:
    """Diagonal of the quadratic form <x,x> on X' in the v-coordinates,
    or None in the hyperbolic (matrix-algebra) cases."""
    qd = cd.qd
    if cd.case == CASE_U or (cd.case == CASE_J and cd.j_variant == "ii"):
        return None
    if cd.case == CASE_J:
        s2 = cd.s * cd.s
        return [qd.u / 2, Fraction(-1, 2), -qd.u * qd.J1 / (2 * s2), qd.J1 / (2 * s2)]
    s2 = cd.s * cd.s
    if cd.case == CASE_J1:
        return [Fraction(1), -1 / qd.u, -qd.J / s2, qd.J / (s2 * qd.u)]
    # CASE_J2: swap the roles of B1 and B2 (J unchanged)
    return [Fraction(1), -1 / qd.u, -qd.J / s2, qd.J / (s2 * qd.u)]


def quad_value(cd: CaseData, x: list[Fraction]) -> Fraction:
    """<x, x> on X' (the quadratic form entering the phase generator)."""
    d = gram_diag(cd)
    if d is None:
        return 2 * (x[0] * x[3] - x[1] * x[2])
    return sum(di * xi * xi for di, xi in zip(d, x))


def case_measure(cd: CaseData, p: int) -> Fraction:
    """The scalar of the self-dual measure on X' against prod dx_i."""
    qd = cd.qd
    if cd.case == CASE_U or (cd.case == CASE_J and cd.j_variant == "ii"):
        return Fraction(1)
    if cd.case == CASE_J:
        val = qd.u * qd.J1 / (4 * cd.s**2)
    else:
        val = qd.J / (cd.s**2 * qd.u)
    return Fraction(p) ** (-valuation(val, p))


def fourier_pairing(cd: CaseData) -> list[tuple[int, Fraction]]:
    d = gram_diag(cd)
    if d is None:
        return HYPERBOLIC_PAIRING
    return [(i, di) for i, di in enumerate(d)]


def fourier_gamma_sign(cd: CaseData) -> int:
    from .localfield import hilbert_symbol

    qd = cd.qd
    if cd.case == CASE_U:
        return 1
    if cd.case == CASE_J:
        return hilbert_symbol(qd.u, qd.J1, cd.place)
    return hilbert_symbol(qd.u, qd.J, cd.place)


def weil_fourier(cd: CaseData, phi: PadicFn) -> PadicFn:
    """omega(w) for the standard Weyl element of the case presentation."""
    return phi.simplify().fourier(fourier_pairing(cd), case_measure(cd, phi.p), fourier_gamma_sign(cd))


def weil_phase(cd: CaseData, phi: PadicFn, b: Fraction) -> PadicFn:
    """omega(n(b)): multiply by psi(b/2 <x,x>) (cases u/J) or by
    psi(-b/2 <x,x>) (cases J1/J2, lower-triangular generator)."""
    sign = Fraction(1) if cd.case in (CASE_U, CASE_J) else Fraction(-1)
    d = gram_diag(cd)
    if d is None:
        c = sign * b
        return phi.phase_cross([(0, 3, c), (1, 2, -c)])
    return phi.phase_diag([sign * b * di / 2 for di in d])


def weil_dilate(cd: CaseData, phi: PadicFn, a: Fraction) -> PadicFn:
    """omega(m(a)) phi = |a|^2 phi(a x)."""
    return phi.dilate(a)


def inner_xprime(cd: CaseData, f: PadicFn, g: PadicFn) -> AlgVal:
    return f.inner(g) * AlgVal.of(case_measure(cd, f.p))


# ---------------------------------------------------------------------------
# partial Fourier transform to the standard polarization
# ---------------------------------------------------------------------------


def pf_forms(cd: CaseData) -> tuple[Mat, list[bool]]:
    """The linear forms in x at which the (possibly hatted) factors of the
    transformed function are evaluated, and the per-slot hat flags."""
    qd = cd.qd
    t, s, u, J1, J2, J = cd.t, cd.s, qd.u, qd.J1, qd.J2, qd.J
    z = Fraction(0)
    if cd.case == CASE_U:
        return la.identity(4), [True, True, True, True]
    if cd.case == CASE_J and cd.j_variant == "i":
        forms = la.mat(
            [
                [1, z, z, t],
                [Fraction(-1, 2), z, z, t / 2],
                [z, s, s * t / J1, z],
                [z, J1 / (2 * s), -t / (2 * s), z],
            ]
        )
        return forms, [False, True, False, True]
    if cd.case == CASE_J and cd.j_variant == "ii":
        t1 = cd.t1
        forms = la.mat(
            [
                [Fraction(1, 2), t1 / 2, t / (2 * t1), t / 2],
                [Fraction(-1, 2), t1 / 2, -t / (2 * t1), t / 2],
                [Fraction(-1, 2), -t1 / 2, t / (2 * t1), t / 2],
                [u / 2, -u * t1 / 2, -u * t / (2 * t1), u * t / 2],
            ]
        )
        return forms, [False, True, True, False]
    if cd.case == CASE_J1:
        forms = la.mat(
            [
                [1, t, z, z],
                [Fraction(-1, 2), t / 2, z, z],
                [z, z, s / t, s],
                [z, z, -J / (2 * s * t), J / (2 * s)],
            ]
        )
        return forms, [False, True, False, True]
    # CASE_J2: swap the tensor factors in the J1 construction
    return _pf_forms_j2(cd)


def _pf_forms_j2(cd: CaseData) -> tuple[Mat, list[bool]]:
    t, s, J = cd.t, cd.s, cd.qd.J
    z = Fraction(0)
    forms = la.mat(
        [
            [1, z, t, z],
            [Fraction(-1, 2), z, t / 2, z],
            [z, s / t, z, s],
            [z, -J / (2 * s * t), z, J / (2 * s)],
        ]
    )
    return forms, [False, True, False, True]


def pf_measure(cd: CaseData, p: int) -> AlgVal:
    qd = cd.qd
    t, s, u, J1, J = cd.t, cd.s, qd.u, qd.J1, qd.J
    if cd.case == CASE_U:
        val = 4 * u
        vv = valuation(val, p)
        # |4u|^(-1/2)
        return AlgVal.of(Fraction(p) ** (vv // 2), p if vv % 2 else 1)
    if cd.case == CASE_J and cd.j_variant == "i":
        val = u * qd.J * J1 / (4 * s * s)
    elif cd.case == CASE_J and cd.j_variant == "ii":
        val = u * qd.J
    else:
        val = qd.J * qd.J / (s * s * u)
    vv = valuation(val, p)
    # |val|^(1/2) = p^(-v/2)
    return AlgVal.of(Fraction(p) ** (-(vv - (vv % 2)) // 2 - (vv % 2)), p if vv % 2 else 1)


def partial_fourier(cd: CaseData, phi: PadicFn) -> PadicFn:
    """The transform S(X') -> S(X), output factors on the case forms."""
    p = phi.p
    qd = cd.qd
    if cd.case == CASE_U:
        t = cd.t
        a_par = [t, -t * qd.J1, -t * qd.J2, t * qd.J]
        b_par = [Fraction(1), Fraction(1), -2 * t * qd.J, -2 * t * qd.J]
        out_terms = []
        for term in phi.simplify().terms:
            if term.cross:
                raise NotImplementedError("partial Fourier needs cross-free terms")
            pieces = []
            for i, f in enumerate(term.factors):
                ai, bi = a_par[i], b_par[i]
                inner_factor = replace(f, c=f.c + ai / (bi * bi))
                hat = fourier_factor_1d(inner_factor, p)
                lam = -2 * ai / bi
                outs = []
                for cf, fac in hat:
                    extra, nf = _substitute_scale(fac, lam, p)
                    nf = replace(nf, c=nf.c + ai / 2)
                    mag = AlgVal.of(Fraction(p) ** (-valuation(lam, p)))
                    outs.append((cf * extra * mag, nf))
                pieces.append(outs)
            for combo in iproduct(*pieces):
                coeff = term.coeff * pf_measure(cd, p)
                facs = []
                for cf, fac in combo:
                    coeff = coeff * cf
                    facs.append(fac)
                out_terms.append(PadicTerm(coeff, tuple(facs)))
        return PadicFn(p, out_terms, la.identity(4))
    forms, hats = pf_forms(cd)
    out_terms = []
    for term in phi.simplify().terms:
        if term.cross:
            raise NotImplementedError("partial Fourier needs cross-free terms")
        pieces = []
        for f, hat_flag in zip(term.factors, hats):
            if not hat_flag:
                pieces.append([(AlgVal.of(1), f)])
            else:
                pieces.append(fourier_factor_1d(f, p))
        for combo in iproduct(*pieces):
            coeff = term.coeff * pf_measure(cd, p)
            facs = []
            for cf, fac in combo:
                coeff = coeff * cf
                facs.append(fac)
            out_terms.append(PadicTerm(coeff, tuple(facs)))
    return PadicFn(p, out_terms, forms)


# ---------------------------------------------------------------------------
# the catalogue of phi' and the closed forms of phi
# ---------------------------------------------------------------------------


def phi_prime_boxes(cd: CaseData, p: int, scale: AlgVal | None = None) -> PadicFn:
    """phi' = scale * indicator of the standard lattice (cases ur/st-ram/1d)."""
    coeff = scale if scale is not None else AlgVal.of(1)
    return PadicFn(p, [PadicTerm(coeff, (box0(0),) * 4)])


def phi_prime_for(cd: CaseData, rep: str, p: int, mu: UnitCharacter | None = None) -> PadicFn:
    """The section-6.5 entry for the representation case tag."""
    q = p
    if rep == "ur":
        return phi_prime_boxes(cd, p)
    if rep == "rps":
        assert mu is not None and cd.case == CASE_U
        n = mu.n
        # q^((n+1)/2) (q-1)^(-1/2)
        const = AlgVal.of(
            Fraction(q) ** ((n + 1) // 2) * Fraction(1, q - 1),
            (q if (n + 1) % 2 else 1) * (q - 1),
        )
        facs = (box0(0), box0(0), box0(n), Factor1D(UnitSupport(0, mu)))
        return PadicFn(p, [PadicTerm(const, facs)])
    if rep == "st-split":
        assert cd.case == CASE_U
        const = AlgVal.of(1, q)
        facs = (box0(0), box0(0), box0(1), box0(0))
        return PadicFn(p, [PadicTerm(const, facs)])
    if rep == "st-ram":
        assert cd.case == CASE_J and cd.j_variant == "i" and cd.s == 1
        return phi_prime_boxes(cd, p, AlgVal.of(1, q))
    if rep == "1d":
        assert cd.case in (CASE_J1, CASE_J2) and cd.s == 1
        return phi_prime_boxes(cd, p, AlgVal.of(1, q))
    raise ValueError(f"unknown representation case {rep}")


def closed_phi_value(cd: CaseData, rep: str, sub: str, p: int, x: list[Fraction],
                     mu: UnitCharacter | None = None) -> AlgVal:
    """The displayed closed form of phi = partial Fourier of phi',
    evaluated at a rational point (independent expected value)."""
    qd = cd.qd
    t, s = cd.t, cd.s
    u, J1, J2, J = qd.u, qd.J1, qd.J2, qd.J
    x1, x2, x3, x4 = x

    def absval(val: Fraction) -> Fraction:
        return Fraction(p) ** (-valuation(val, p)) if val else Fraction(0)

    def ind(val: Fraction, level: int = 0) -> bool:
        return val == 0 or valuation(val, p) >= level

    if rep == "ur" and sub == "espl-fur":
        from .localfield import hilbert_symbol
        from .weil import HALF, gamma_scaled

        g = gamma_scaled(J1, cd.place, HALF)
        sym = hilbert_symbol(2 * t * J2, J1, cd.place)
        two = absval(Fraction(2)) ** 2
        # |2|^2 |J1|^(3/2) |J2| with |J1|^(3/2) = |J1| |J1|^(1/2)
        vj1 = valuation(J1, p)
        lead = AlgVal.of(
            g.as_cyclo()
            * Fraction(sym)
            * two
            * absval(J2)
            * Fraction(p) ** (-vj1)
            * Fraction(p) ** (-(vj1 - (vj1 % 2)) // 2 - (vj1 % 2)),
            p if vj1 % 2 else 1,
        )
        if not (ind(2 * x1) and ind(2 * J1 * x2) and ind(2 * J * x3) and ind(2 * J * x4)):
            return ZERO
        ph = psi_finite(t / 2 * (x1 * x1 - J1 * x2 * x2 + J2 * x3 * x3 - J * x4 * x4), p)
        return lead * ph
    if rep == "ur" and sub == "einert-j":
        if not (ind(x1) and ind(s * x2) and ind(s * t * x3 / J1) and ind(t * x4)):
            return ZERO
        vj = valuation(J, p)
        return AlgVal.of(Fraction(p) ** (-(vj - (vj % 2)) // 2 - (vj % 2)), p if vj % 2 else 1)
    if rep == "ur" and sub == "einert-j1":
        if not (ind(x1) and ind(t * x2) and ind(s * x3 / t) and ind(s * x4)):
            return ZERO
        vj = valuation(J, p)
        return AlgVal.of(Fraction(p) ** (-(vj - (vj % 2)) // 2 - (vj % 2)), p if vj % 2 else 1)
    if rep == "ur" and sub == "eram":
        t1 = cd.t1
        a1, b1 = x1, x4
        a2, b2 = x2, x3 / J1
        conds = (
            ind(a1 - t * b1)
            and ind(a2 - t * b2)
            and ind(a1 + t * b1 + t1 * a2 + t * t1 * b2)
            and ind(a1 + t * b1 - t1 * a2 - t * t1 * b2, -1)
        )
        if not conds:
            return ZERO
        return AlgVal.of(Fraction(1, p), p)
    if rep == "rps":
        n = mu.n
        g = gauss_sum(mu, cd.place)
        # q^(-3n/2 + 1/2) (q-1)^(-1/2) g(mu, psi)
        num = Fraction(p) ** ((1 - 3 * n) // 2) * Fraction(1, p - 1)
        rad = (p if (1 - 3 * n) % 2 else 1) * (p - 1)
        lead = AlgVal.of(g * num, rad)
        if not (ind(x1) and ind(x2) and ind(x3, -n)):
            return ZERO
        if x4 == 0 or valuation(x4, p) != -n:
            return ZERO
        ph = psi_finite(t / 2 * (-J2 * x3 * x3 + J * x4 * x4), p)
        return lead * ph * mu.value(x4).conj()
    if rep == "st-split":
        if not (ind(x1) and ind(x2) and ind(x3, -1) and ind(x4)):
            return ZERO
        ph = psi_finite(-t * J2 / 2 * x3 * x3, p)
        return AlgVal.of(ph * Fraction(1, p), p)
    if rep == "st-ram":
        if not (ind(x1) and ind(x4, -1) and ind(x2 + t * x3 / J1) and ind(x2 - t * x3 / J1, -1)):
            return ZERO
        return AlgVal.of(Fraction(1, p))
    if rep == "1d":
        swap = cd.case == CASE_J2
        a1, a2 = x1, (x2 if not swap else x3)
        b1 = x4
        b2 = (x3 / J1) if not swap else (x2 / J2)
        if not (ind(a1) and ind(a2) and ind(b1 + t * b2) and ind(b1 - t * b2, -1)):
            return ZERO
        return AlgVal.of(Fraction(1, p), p)
    raise ValueError(f"no closed form for {rep}/{sub}")


def q_minus(p):
    return p - 1
