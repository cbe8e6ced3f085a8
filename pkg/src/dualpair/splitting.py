"""The splitting s = s' * mu of the metaplectic cocycle over
GU(V)^0 x GU(W), its closed forms on quaternion generators, the doubled
splitting on Sp_16, and the verification harness.

Two independent routes are kept throughout: s' * mu goes through the
Leray/cocycle machinery on explicit 8x8 matrices, while the closed forms
are direct Hilbert-symbol expressions in the quaternion coordinates.
Their agreement, the coboundary identity ds = z_Y, and the product
formula over the places of Q are the main verification targets.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import _linalg as la
from ._linalg import Mat
from .localfield import Place, REAL, finite, hilbert_symbol
from .qspaces import (
    CASE_J,
    CASE_J1,
    CASE_J2,
    CASE_U,
    CaseData,
    GElement,
    Quat,
    QuatData,
    case_data,
    embed_b_right,
)
from .symplectic import HALF, SympSpace, cocycle_gsp, cocycle_lagrangian, standard_space
from .weil import Mu8, gamma_scaled

SP8 = standard_space(4)


def s_prime(g: GElement, cd: CaseData) -> Mu8:
    """The free splitting s'(g) = gamma^j(g) attached to the auxiliary
    polarization Y'."""
    if cd.gamma_sign == 1:
        return Mu8(0)
    return Mu8(0) if cd.j_exponent(g) % 2 == 0 else Mu8(4)


_H0_INV_CACHE: dict[int, Mat] = {}


def mu_correction(g: GElement, cd: CaseData, v: Place) -> Mu8:
    """mu(g) = z_Y(h0 g h0^-1, h0) * z_Y(h0, g)^-1 via the GSp cocycle."""
    h0 = cd.h0
    h0_inv = _H0_INV_CACHE.get(id(cd))
    if h0_inv is None:
        h0_inv = SP8.sp_inverse(h0, Fraction(1))
        _H0_INV_CACHE[id(cd)] = h0_inv
    conj = la.mat_mul(la.mat_mul(h0, g.mat), h0_inv)
    first = cocycle_gsp(conj, h0, v, SP8)
    second = cocycle_gsp(h0, g.mat, v, SP8)
    return first * second.inv()


def s_full(g: GElement, cd: CaseData, v: Place) -> Mu8:
    return s_prime(g, cd) * mu_correction(g, cd, v)


def s_closed(g: GElement, qd: QuatData, v: Place) -> Mu8:
    """Closed form of the splitting on one-sided generators: g must be
    alpha_i^-1 on the GU(V)^0 side or alpha on the GU(W) side."""
    sides = [not g.a1.is_zero() and g.a1.coords() != (1, 0, 0, 0),
             not g.a2.is_zero() and g.a2.coords() != (1, 0, 0, 0),
             not g.w.is_zero() and g.w.coords() != (1, 0, 0, 0)]
    if sum(sides) > 1:
        raise ValueError("closed form applies to one-sided generators")
    if sides[0]:
        return _closed_gu_v(g.a1, qd.J1, qd.J2, v)
    if sides[1]:
        return _closed_gu_v(g.a2, qd.J2, qd.J1, v)
    if sides[2]:
        return _closed_gu_w(g.w, qd.J, qd.J1, v)
    return Mu8(0)


def _closed_gu_v(al: Quat, Ji: Fraction, Jj: Fraction, v: Place) -> Mu8:
    a, b, c, d = al.coords()
    nu = al.norm()
    if b == 0 and d == 0:
        return Mu8(0)
    disc = b * b - d * d * Ji
    if disc == 0:
        g = gamma_scaled(Jj, v, HALF)
        sym = hilbert_symbol((a * b + c * d * Ji) * nu * Ji, Jj, v)
        return g * Mu8.from_sign(sym)
    return Mu8.from_sign(hilbert_symbol(-disc * nu * Ji, Jj, v))


def _closed_gu_w(al: Quat, J: Fraction, J1: Fraction, v: Place) -> Mu8:
    a, b, c, d = al.coords()
    nu = al.norm()
    if b == 0 and d == 0:
        return Mu8.from_sign(hilbert_symbol(nu, J1, v))
    disc = b * b - d * d * J
    if disc == 0:
        g = gamma_scaled(J1, v, HALF)
        sym = hilbert_symbol(a * b - c * d * J, J1, v)
        return g * Mu8.from_sign(sym)
    return Mu8.from_sign(hilbert_symbol(-disc * J, J1, v))


# ---------------------------------------------------------------------------
# sampling and verification
# ---------------------------------------------------------------------------


def random_generator(qd: QuatData, rng: random.Random, bound: int = 20, side: str | None = None) -> GElement:
    """A one-sided generator with quaternion coordinates in [-bound, bound]
    and nonzero norm."""
    side = side or rng.choice(["b1", "b2", "w"])
    mk = {"b1": qd.b1_elt, "b2": qd.b2_elt, "w": qd.b_elt}[side]
    wrap = {"b1": GElement.from_b1, "b2": GElement.from_b2, "w": GElement.from_b}[side]
    while True:
        al = mk(*[Fraction(rng.randint(-bound, bound)) for _ in range(4)])
        if not al.is_zero() and al.norm() != 0:
            return wrap(qd, al)


def random_element(qd: QuatData, rng: random.Random, bound: int = 20, length: int = 2) -> GElement:
    g = GElement.identity(qd)
    for _ in range(length):
        g = g * random_generator(qd, rng, bound)
    return g


@dataclass
class Report:
    kind: str
    case: str
    place: str
    trials: int
    passes: int
    failures: list = field(default_factory=list)
    seed: int | None = None

    @property
    def ok(self) -> bool:
        return self.passes == self.trials and not self.failures

    def to_json(self) -> str:
        return json.dumps(
            {
                "kind": self.kind,
                "case": self.case,
                "place": self.place,
                "trials": self.trials,
                "passes": self.passes,
                "failures": self.failures,
                "seed": self.seed,
            },
            sort_keys=True,
        )


def verify_coboundary(cd: CaseData, v: Place, trials: int, seed: int = 0, bound: int = 9,
                      corrupt: bool = False) -> Report:
    """ds = z_Y: z_Y(g, g') = s(g g') s(g)^-1 s(g')^-1 on random pairs of
    generators; also checks s_full = s_closed on every sampled generator."""
    rng = random.Random(seed)
    rep = Report(kind="coboundary", case=f"{cd.case}/{cd.j_variant}" if cd.j_variant else cd.case,
                 place=repr(v), trials=trials, passes=0, seed=seed)
    for t in range(trials):
        g1 = random_generator(cd.qd, rng, bound)
        g2 = random_generator(cd.qd, rng, bound)
        s1 = s_full(g1, cd, v)
        s2 = s_full(g2, cd, v)
        c1 = s_closed(g1, cd.qd, v)
        c2 = s_closed(g2, cd.qd, v)
        s12 = s_full(g1 * g2, cd, v)
        z = cocycle_gsp(g1.mat, g2.mat, v, SP8)
        if corrupt:
            s1 = s1 * Mu8(4) ** (1 if g1.nu != 1 else 0) * Mu8(4)
        lhs = s12 * s1.inv() * s2.inv()
        good = (lhs == z) and (s1 == c1) and (s2 == c2)
        if good:
            rep.passes += 1
        else:
            rep.failures.append(
                {
                    "trial": t,
                    "g1": [str(x) for x in (g1.a1.coords(), g1.a2.coords(), g1.w.coords())],
                    "g2": [str(x) for x in (g2.a1.coords(), g2.a2.coords(), g2.w.coords())],
                    "lhs": lhs.k,
                    "rhs": z.k,
                    "closed": [c1.k, c2.k],
                    "full": [s1.k, s2.k],
                }
            )
    return rep


def splitting_support(qd: QuatData, g: GElement) -> list[Place]:
    """Places at which s_v(g) could differ from 1, for a one-sided
    generator: primes dividing 2 u J1 J2 and the coordinate data."""
    nums = [qd.u, qd.J1, qd.J2, Fraction(2)]
    for al in (g.a1, g.a2, g.w):
        nums.extend(x for x in al.coords() if x)
        nums.append(al.norm())
        # discriminants entering the closed forms
    for al, Ji in ((g.a1, qd.J1), (g.a2, qd.J2), (g.w, qd.J)):
        disc = al.b**2 - al.d**2 * Ji
        if disc:
            nums.append(disc)
        mix = al.a * al.b + al.c * al.d * Ji
        if mix:
            nums.append(mix)
        mix2 = al.a * al.b - al.c * al.d * qd.J
        if mix2:
            nums.append(mix2)
    ps: set[int] = set()
    for x in nums:
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


def verify_product_formula(qd: QuatData, gammas: list[GElement]) -> Report:
    """prod_v s_v(gamma) = 1 for rational one-sided generators, via the
    closed forms place by place over the finite support."""
    rep = Report(kind="product-formula", case="global", place="all", trials=len(gammas), passes=0)
    for i, g in enumerate(gammas):
        total = Mu8(0)
        for v in splitting_support(qd, g):
            total = total * s_closed(g, qd, v)
        if total.k == 0:
            rep.passes += 1
        else:
            rep.failures.append({"index": i, "gamma": [str(g.a1), str(g.a2), str(g.w)], "product": total.k})
    return rep


# ---------------------------------------------------------------------------
# the doubled splitting on Sp_16
# ---------------------------------------------------------------------------


@dataclass
class Doubled:
    """The 16-dimensional doubled apparatus, in the V + V coordinates with
    Gram diag(J, -J); the diagonal Lagrangian carries the reference
    cocycle z_{V^triangle}."""

    qd: QuatData
    space: SympSpace = field(repr=False, default=None)  # type: ignore[assignment]
    vtriangle: Mat = field(repr=False, default=None)  # type: ignore[assignment]

    def __post_init__(self):
        g8 = standard_space(4).gram
        self.space = SympSpace(la.block([[g8, la.zeros(8, 8)], [la.zeros(8, 8), la.scal_mul(-1, g8)]]))
        self.vtriangle = la.block([[la.identity(8), la.identity(8)]])

    def iota(self, g1: Mat, g2: Mat) -> Mat:
        nu1 = standard_space(4).similitude(g1)
        nu2 = standard_space(4).similitude(g2)
        if nu1 != nu2:
            raise ValueError("iota requires matching similitudes")
        return la.block([[g1, la.zeros(8, 8)], [la.zeros(8, 8), g2]])

    def gu_wsquare(self, a: Quat, b: Quat, c: Quat, d: Quat) -> Mat:
        """The 16x16 matrix of [[a,b],[c,d]] in GU(W-square), given w.r.t.
        the basis w = (1,-1)/2, w* = (1,1); verified to be a similitude."""
        qd = self.qd
        # x tensor (1,0) and x tensor (0,1) expand over w, w*:
        # (1,0) = w + (1/2) w*, (0,1) = -w + (1/2) w*
        # action of [[a,b],[c,d]]: w -> a w + b w*, w* -> c w + d w*
        half = Fraction(1, 2)
        e_plus = [(qd.b_elt(1), half)]  # coefficients of (1,0) on (w, w*)
        # compute images of (1,0) and (0,1) in terms of (1,0), (0,1)
        rows = []
        for coeff_w, coeff_ws in ((qd.b_elt(1), half), (qd.b_elt(-1), half)):
            # image = coeff_w (a w + b w*) + coeff_ws (c w + d w*)
            im_w = coeff_w * a + coeff_ws * c
            im_ws = coeff_w * b + coeff_ws * d
            # back to (1,0), (0,1): w = (1,0)/2 - (0,1)/2, w* = (1,0)+(0,1)
            c1 = im_w * half + im_ws
            c2 = im_w * (-half) + im_ws
            rows.append((c1, c2))
        m = la.zeros(16, 16)
        for blk_i, (c1, c2) in enumerate(rows):
            m1 = embed_b_right(self.qd, c1)
            m2 = embed_b_right(self.qd, c2)
            for i in range(8):
                for j in range(8):
                    m[blk_i * 8 + i][j] = m1[i][j]
                    m[blk_i * 8 + i][8 + j] = m2[i][j]
        self.space.similitude(m)  # raises if not a similitude
        return m

    def jhat(self, c: Quat) -> int:
        """j-hat of an element of GU(W-square) from its lower-left B-entry:
        0 if c = 0; 1 if c != 0, nu(c) = 0; 2 if nu(c) != 0."""
        if c.is_zero():
            return 0
        return 2 if c.norm() != 0 else 1

    def s_hat(self, c_entry: Quat, v: Place) -> Mu8:
        """s-hat(g) = gamma^jhat for split B; identically 1 for ramified B."""
        if self.qd.b_ramified(v):
            return Mu8(0)
        gamma = hilbert_symbol(self.qd.u, self.qd.J1, v)
        if gamma == 1:
            return Mu8(0)
        return Mu8(0) if self.jhat(c_entry) % 2 == 0 else Mu8(4)

    def z_vtriangle(self, g1: Mat, g2: Mat, v: Place) -> Mu8:
        return cocycle_lagrangian(self.space, self.vtriangle, g1, g2, v)

    def h0_prime(self, cd: CaseData) -> Mat:
        """h0' = id tensor h0 with h0 the displayed 4x4 base change on the
        doubled W side (cases u/J, via Morita) or on the doubled V side
        (cases J1/J2); satisfies V-nabla h0' = X'-square and
        V-triangle h0' = Y'-square (asserted)."""
        half = Fraction(1, 2)
        h0w = la.mat([
            [1, 0, 0, -half],
            [-1, 0, 0, -half],
            [0, 1, half, 0],
            [0, 1, -half, 0],
        ])
        qd = self.qd
        if cd.case in (CASE_U, CASE_J):
            e, eprime = _case_idempotents(cd)
            # W-square-dagger basis (e w, e' w, e' w*, -e w*) as pairs in B + B
            wd = [
                (e * half, e * (-half)),
                (eprime * half, eprime * (-half)),
                (eprime, eprime),
                (e * (-1), e * (-1)),
            ]
            vside = cd.x_basis  # a basis of V-dagger inside V
            tensor_rows = []
            for m in vside:
                for b1, b2 in wd:
                    tensor_rows.append(
                        la.row_mul(m, embed_b_right(qd, b1)) + la.row_mul(m, embed_b_right(qd, b2))
                    )
        else:
            vrow, vstar = cd._v_vstar()
            # V-square basis (v_1, v_2, v_1*, v_2*) as pairs of V-elements
            vd = [
                ([x * half for x in vrow], [-x * half for x in vrow]),
                ([x * half for x in vstar], [-x * half for x in vstar]),
                (list(vstar), list(vstar)),
                ([-x for x in vrow], [-x for x in vrow]),
            ]
            bbasis = [qd.b_elt(1), qd.b_elt(0, 1), qd.b_elt(0, 0, 1), qd.b_elt(0, 0, 0, 1)]
            tensor_rows = []
            for bk in bbasis:
                for p, q in vd:
                    mk = embed_b_right(qd, bk)
                    tensor_rows.append(la.row_mul(p, mk) + la.row_mul(q, mk))
        # matrix of id tensor h0w in the tensor basis (the doubled index is
        # the inner one), conjugated into the V + V coordinates
        m_tensor = la.zeros(16, 16)
        for i in range(4):
            for j in range(4):
                for k in range(4):
                    m_tensor[4 * i + j][4 * i + k] = h0w[j][k]
        t_mat = la.mat(tensor_rows)
        out = la.mat_mul(la.mat_mul(la.inverse(t_mat), m_tensor), t_mat)
        if not self.space.in_sp(out):
            raise ArithmeticError("h0' is not symplectic")
        vnabla = la.block([[la.identity(8), la.scal_mul(-1, la.identity(8))]])
        xprime_sq = [row + [Fraction(0)] * 8 for row in cd.x_basis] + [
            [Fraction(0)] * 8 + row for row in cd.x_basis
        ]
        yprime_sq = [row + [Fraction(0)] * 8 for row in cd.y_basis] + [
            [Fraction(0)] * 8 + row for row in cd.y_basis
        ]
        if not la.row_spans_equal(la.mat_mul(vnabla, out), la.mat(xprime_sq)):
            raise ArithmeticError("V-nabla h0' != X'-square")
        if not la.row_spans_equal(la.mat_mul(self.vtriangle, out), la.mat(yprime_sq)):
            raise ArithmeticError("V-triangle h0' != Y'-square")
        return out

    def h0_hat(self, cd: CaseData) -> Mat:
        """h0-hat = h0' iota(h0, h0)^-1: moves (V-nabla, V-triangle) to
        (X-square, Y-square)."""
        out = la.mat_mul(self.h0_prime(cd), la.inverse(self.iota(cd.h0, cd.h0)))
        vnabla = la.block([[la.identity(8), la.scal_mul(-1, la.identity(8))]])
        y_rows = []
        for i in range(4):
            row = [Fraction(0)] * 16
            row[4 + i] = Fraction(1)
            y_rows.append(row)
        for i in range(4):
            row = [Fraction(0)] * 16
            row[12 + i] = Fraction(1)
            y_rows.append(row)
        x_rows = []
        for i in range(4):
            row = [Fraction(0)] * 16
            row[i] = Fraction(1)
            x_rows.append(row)
        for i in range(4):
            row = [Fraction(0)] * 16
            row[8 + i] = Fraction(1)
            x_rows.append(row)
        if not la.row_spans_equal(la.mat_mul(vnabla, out), la.mat(x_rows)):
            raise ArithmeticError("V-nabla h0-hat != X-square")
        if not la.row_spans_equal(la.mat_mul(self.vtriangle, out), la.mat(y_rows)):
            raise ArithmeticError("V-triangle h0-hat != Y-square")
        return out

    def mu_hat(self, g: Mat, h0hat: Mat, v: Place) -> Mu8:
        """mu-hat(g) = z_tri(g, h^-1) * z_tri(h^-1, h g h^-1)^-1."""
        hinv = la.inverse(h0hat)
        conj = la.mat_mul(la.mat_mul(h0hat, g), hinv)
        return self.z_vtriangle(g, hinv, v) * self.z_vtriangle(hinv, conj, v).inv()


def _case_idempotents(cd: CaseData) -> tuple[Quat, Quat]:
    qd, t = cd.qd, cd.t
    if cd.case == CASE_U:
        e = qd.b_elt(Fraction(1, 2), 1 / (2 * t), 0, 0)
        eprime = qd.b_elt(0, 0, Fraction(1, 2), 1 / (2 * t))
    else:  # CASE_J
        e = qd.b_elt(Fraction(1, 2), 0, 1 / (2 * t), 0)
        eprime = qd.b_elt(0, Fraction(1, 2), 0, -1 / (2 * t))
    return e, eprime


def j_y_conjugate(g: GElement) -> GElement:
    """The involution j_Y(g) = J g J^-1 with J = ((j1, j2), j)."""
    qd = g.qd
    j1 = qd.b1_elt(0, 0, 1)
    j2 = qd.b2_elt(0, 0, 1)
    jb = qd.b_elt(0, 0, 1)
    return GElement(qd, j1 * g.a1 * j1.inv(), j2 * g.a2 * j2.inv(), jb * g.w * jb.inv())
