"""Quaternion data (u, J1, J2, J), the algebras E, B, B1, B2, the
8-dimensional symplectic space V tensor W with its explicit similitude
embeddings, per-case base changes h0, and the doubled 16-dimensional
apparatus.

Basis conventions: e1 = 1 x 1, e2 = j1 x 1, e3 = 1 x j2, e4 = j1 x j2 and
the dual basis e1*..e4*; matrices act on row vectors on the right; the
matrix of a quaternion action is the one whose i-th row holds the
coordinates of the image of the i-th basis vector.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
import json

from . import _linalg as la
from ._linalg import Mat
from .localfield import (
    REAL,
    Place,
    finite,
    hilbert_symbol,
    is_local_square,
    valuation,
)
from .symplectic import SympSpace, standard_space, standard_y


def rational_sqrt(x: Fraction | int) -> Fraction | None:
    x = Fraction(x)
    if x < 0:
        return None
    ns = int(x.numerator ** 0.5)
    ds = int(x.denominator ** 0.5)
    for n in (ns - 1, ns, ns + 1):
        for d in (ds - 1, ds, ds + 1):
            if d > 0 and n >= 0 and Fraction(n, d) ** 2 == x:
                return Fraction(n, d)
    return None


# ---------------------------------------------------------------------------
# quaternion arithmetic
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Quat:
    """a + b i + c j + d ij in the quaternion algebra (u, J) over Q."""

    u: Fraction
    J: Fraction
    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    @staticmethod
    def of(u, J, a, b=0, c=0, d=0) -> "Quat":
        return Quat(Fraction(u), Fraction(J), Fraction(a), Fraction(b), Fraction(c), Fraction(d))

    def _like(self, a, b, c, d) -> "Quat":
        return Quat(self.u, self.J, a, b, c, d)

    def __add__(self, o: "Quat") -> "Quat":
        return self._like(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    def __sub__(self, o: "Quat") -> "Quat":
        return self._like(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)

    def __mul__(self, o) -> "Quat":
        if isinstance(o, (int, Fraction)):
            f = Fraction(o)
            return self._like(self.a * f, self.b * f, self.c * f, self.d * f)
        assert self.u == o.u and self.J == o.J
        u, J = self.u, self.J
        a1, b1, c1, d1 = self.a, self.b, self.c, self.d
        a2, b2, c2, d2 = o.a, o.b, o.c, o.d
        return self._like(
            a1 * a2 + u * b1 * b2 + J * c1 * c2 - u * J * d1 * d2,
            a1 * b2 + b1 * a2 - J * c1 * d2 + J * d1 * c2,
            a1 * c2 + c1 * a2 + u * b1 * d2 - u * d1 * b2,
            a1 * d2 + d1 * a2 + b1 * c2 - c1 * b2,
        )

    def __rmul__(self, o):
        return self * o

    def conj(self) -> "Quat":
        return self._like(self.a, -self.b, -self.c, -self.d)

    def norm(self) -> Fraction:
        return self.a**2 - self.u * self.b**2 - self.J * self.c**2 + self.u * self.J * self.d**2

    def trace(self) -> Fraction:
        return 2 * self.a

    def inv(self) -> "Quat":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("quaternion of norm zero")
        return self.conj() * (1 / n)

    def is_zero(self) -> bool:
        return not (self.a or self.b or self.c or self.d)

    def coords(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.a, self.b, self.c, self.d)


# ---------------------------------------------------------------------------
# structure constants
# ---------------------------------------------------------------------------


class QuatData:
    """The structure constants (u, J1, J2) with J = J1 J2, and the ambient
    quaternion algebras.  Validation: at every place of Q at least one of
    u, J, J1, J2 must be a local square."""

    def __init__(self, u, J1, J2, validate: bool = True):
        self.u = Fraction(u)
        self.J1 = Fraction(J1)
        self.J2 = Fraction(J2)
        self.J = self.J1 * self.J2
        if 0 in (self.u, self.J1, self.J2):
            raise ValueError("structure constants must be nonzero")
        if validate:
            bad = self.violating_places()
            if bad:
                raise ValueError(f"no square among (u, J, J1, J2) at places {bad}")

    # element constructors per algebra
    def e_elt(self, a, b=0) -> Quat:
        return Quat.of(self.u, self.J1, a, b)  # E sits inside any of them

    def b_elt(self, a, b=0, c=0, d=0) -> Quat:
        return Quat.of(self.u, self.J, a, b, c, d)

    def b1_elt(self, a, b=0, c=0, d=0) -> Quat:
        return Quat.of(self.u, self.J1, a, b, c, d)

    def b2_elt(self, a, b=0, c=0, d=0) -> Quat:
        return Quat.of(self.u, self.J2, a, b, c, d)

    def relevant_places(self) -> list[Place]:
        ps = {2}
        for x in (self.u, self.J1, self.J2):
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

    def violating_places(self) -> list[Place]:
        out = []
        for v in self.relevant_places():
            if not any(is_local_square(x, v) for x in (self.u, self.J, self.J1, self.J2)):
                out.append(v)
        return out

    def b_ramified(self, v: Place) -> bool:
        return hilbert_symbol(self.u, self.J, v) == -1

    def b1_ramified(self, v: Place) -> bool:
        return hilbert_symbol(self.u, self.J1, v) == -1

    def b2_ramified(self, v: Place) -> bool:
        return hilbert_symbol(self.u, self.J2, v) == -1

    def e_split(self, v: Place) -> bool:
        return is_local_square(self.u, v)

    # JSON round trip (exact rationals as "num/den" strings)
    def to_json(self) -> str:
        def enc(x: Fraction) -> str:
            return f"{x.numerator}/{x.denominator}"

        places = []
        for v in self.relevant_places():
            places.append(
                {
                    "place": "real" if v.is_real else v.p,
                    "square": [
                        name
                        for name, x in [("u", self.u), ("J", self.J), ("J1", self.J1), ("J2", self.J2)]
                        if is_local_square(x, v)
                    ],
                }
            )
        return json.dumps({"u": enc(self.u), "J1": enc(self.J1), "J2": enc(self.J2), "places": places})

    @staticmethod
    def from_json(text: str) -> "QuatData":
        obj = json.loads(text)

        def dec(s) -> Fraction:
            if isinstance(s, str) and "/" in s:
                n, d = s.split("/")
                return Fraction(int(n), int(d))
            return Fraction(s)

        return QuatData(dec(obj["u"]), dec(obj["J1"]), dec(obj["J2"]))


def make_quat_data(u, J1, J2) -> QuatData:
    return QuatData(u, J1, J2)


# ---------------------------------------------------------------------------
# the 8x8 embeddings
# ---------------------------------------------------------------------------


def embed_b1_left(qd: QuatData, al: Quat) -> Mat:
    """Row-action matrix of v -> al * v for al in B1 (left action on the
    first tensor factor)."""
    a, b, c, d = al.coords()
    u, J1, J2, J = qd.u, qd.J1, qd.J2, qd.J
    z = Fraction(0)
    return la.mat(
        [
            [a, c, z, z, b * u, d * u * J1, z, z],
            [c * J1, a, z, z, d * u * J1, b * u * J1, z, z],
            [z, z, a, c, z, z, -b * u * J2, -d * u * J],
            [z, z, c * J1, a, z, z, -d * u * J, -b * u * J],
            [b, -d, z, z, a, -c * J1, z, z],
            [-d, b / J1, z, z, -c, a, z, z],
            [z, z, -b / J2, d / J2, z, z, a, -c * J1],
            [z, z, d / J2, -b / J, z, z, -c, a],
        ]
    )


def embed_b2_left(qd: QuatData, al: Quat) -> Mat:
    a, b, c, d = al.coords()
    u, J1, J2, J = qd.u, qd.J1, qd.J2, qd.J
    z = Fraction(0)
    return la.mat(
        [
            [a, z, c, z, b * u, z, d * u * J2, z],
            [z, a, z, c, z, -b * u * J1, z, -d * u * J],
            [c * J2, z, a, z, d * u * J2, z, b * u * J2, z],
            [z, c * J2, z, a, z, -d * u * J, z, -b * u * J],
            [b, z, -d, z, a, z, -c * J2, z],
            [z, -b / J1, z, d / J1, z, a, z, -c * J2],
            [-d, z, b / J2, z, -c, z, a, z],
            [z, d / J1, z, -b / J, z, -c, z, a],
        ]
    )


def embed_b_right(qd: QuatData, al: Quat) -> Mat:
    a, b, c, d = al.coords()
    u, J1, J2, J = qd.u, qd.J1, qd.J2, qd.J
    z = Fraction(0)
    return la.mat(
        [
            [a, z, z, c, b * u, z, z, -d * u * J],
            [z, a, c * J1, z, z, -b * u * J1, d * u * J, z],
            [z, c * J2, a, z, z, d * u * J, -b * u * J2, z],
            [c * J, z, z, a, -d * u * J, z, z, b * u * J],
            [b, z, z, d, a, z, z, -c * J],
            [z, -b / J1, -d, z, z, a, -c * J2, z],
            [z, -d, -b / J2, z, z, -c * J1, a, z],
            [d, z, z, b / J, -c, z, z, a],
        ]
    )


SIDE_B1 = "B1-left"
SIDE_B2 = "B2-left"
SIDE_B = "B-right"


def embed(qd: QuatData, al: Quat, side: str) -> Mat:
    """Similitude matrix of the quaternion action; nu = nu(al)."""
    if al.norm() == 0:
        raise ValueError("similitude requires nu(alpha) != 0")
    if side == SIDE_B1:
        return embed_b1_left(qd, al)
    if side == SIDE_B2:
        return embed_b2_left(qd, al)
    if side == SIDE_B:
        return embed_b_right(qd, al)
    raise ValueError(f"unknown side {side}")


# ---------------------------------------------------------------------------
# group elements of GU(V)^0 x GU(W)
# ---------------------------------------------------------------------------


@dataclass
class GElement:
    """An element of GU(V)^0 x GU(W), carried both as quaternion data
    (a1, a2, w) -- the group element ((a1^-1, a2^-1)-action, w-action) --
    and as its 8x8 matrix on V tensor W."""

    qd: QuatData
    a1: Quat  # in B1; the GU(V) component acts by v -> (a1 a2)^-1 v
    a2: Quat  # in B2
    w: Quat  # in B; the GU(W) component acts by v -> v w
    mat: Mat = field(repr=False, default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.mat is None:
            m1 = embed_b1_left(self.qd, self.a1.inv())
            m2 = embed_b2_left(self.qd, self.a2.inv())
            mw = embed_b_right(self.qd, self.w)
            self.mat = la.mat_mul(la.mat_mul(m1, m2), mw)

    @property
    def nu(self) -> Fraction:
        return self.w.norm() / (self.a1.norm() * self.a2.norm())

    def __mul__(self, other: "GElement") -> "GElement":
        assert self.qd is other.qd
        return GElement(
            self.qd,
            self.a1 * other.a1,
            self.a2 * other.a2,
            self.w * other.w,
            la.mat_mul(self.mat, other.mat),
        )

    @staticmethod
    def identity(qd: QuatData) -> "GElement":
        return GElement(qd, qd.b1_elt(1), qd.b2_elt(1), qd.b_elt(1))

    @staticmethod
    def from_b1(qd: QuatData, al: Quat) -> "GElement":
        """The generator g_1 := al^-1 in GU(V)^0 (al in B1^x)."""
        return GElement(qd, al, qd.b2_elt(1), qd.b_elt(1))

    @staticmethod
    def from_b2(qd: QuatData, al: Quat) -> "GElement":
        return GElement(qd, qd.b1_elt(1), al, qd.b_elt(1))

    @staticmethod
    def from_b(qd: QuatData, al: Quat) -> "GElement":
        """The generator g := al in GU(W) (al in B^x)."""
        return GElement(qd, qd.b1_elt(1), qd.b2_elt(1), al)


# ---------------------------------------------------------------------------
# case data: complete polarizations and base changes
# ---------------------------------------------------------------------------

CASE_U = "u-square"
CASE_J = "J-square"
CASE_J1 = "J1-square"
CASE_J2 = "J2-square"


@dataclass
class CaseData:
    qd: QuatData
    place: Place
    case: str
    t: Fraction  # the exact rational square root used by the case
    s: Fraction  # auxiliary scalar (cases J-i / J1); 1 by default
    t1: Fraction | None  # second root for case J (ii)
    j_variant: str  # "i" or "ii" for the J case, "" otherwise
    h0: Mat = field(repr=False, default=None)  # type: ignore[assignment]
    x_basis: Mat = field(repr=False, default=None)  # type: ignore[assignment]
    y_basis: Mat = field(repr=False, default=None)  # type: ignore[assignment]

    @property
    def gamma_sign(self) -> int:
        """The sign gamma of the free splitting s'."""
        if self.case == CASE_U:
            return 1  # B1 and B2 are split when u is a square
        if self.case == CASE_J:
            return hilbert_symbol(self.qd.u, self.qd.J1, self.place)
        return hilbert_symbol(self.qd.u, self.qd.J, self.place)

    def j_exponent(self, g: GElement) -> int:
        """The exponent j in s'(g) = gamma^j."""
        qd = self.qd
        if self.case in (CASE_U, CASE_J):
            # criterion on the Morita image of the GU(W) component
            m = self.morita_b(g.w)
            return 0 if m[1][0] == 0 else 1
        # J1/J2 case: criterion on the GU(V') image of the GU(V) component
        a = self.vprime_matrix_entry(g)
        return 0 if a.is_zero() else 1

    def morita_b(self, al: Quat) -> Mat:
        """The 2x2 image of al in M_2(F) (cases u, J: B is split)."""
        a, b, c, d = al.coords()
        t = self.t
        if self.case == CASE_U:
            J = self.qd.J
            return la.mat([[a + b * t, c + d * t], [(c - d * t) * J, a - b * t]])
        if self.case == CASE_J:
            u = self.qd.u
            return la.mat([[a + c * t, b - d * t], [u * (b + d * t), a - c * t]])
        raise ValueError("no Morita image of B in the J1/J2 cases")

    def morita_b1(self, al: Quat) -> Mat:
        """2x2 image of al in B1 under the case's i_1 (where B1 is split)."""
        a, b, c, d = al.coords()
        if self.case == CASE_U:
            t = self.t
            J1 = self.qd.J1
            return la.mat([[a - b * t, -(c - d * t)], [-J1 * (c + d * t), a + b * t]])
        if self.case == CASE_J and self.j_variant == "ii":
            t1 = self.t1
            u = self.qd.u
            return la.mat([[a + c * t1, b - d * t1], [u * (b + d * t1), a - c * t1]])
        if self.case == CASE_J1:
            t, u = self.t, self.qd.u
            return la.mat([[a + c * t, 2 * (b - d * t)], [u * (b + d * t) / 2, a - c * t]])
        raise ValueError("i_1 is not available in this case/variant")

    def morita_b2(self, al: Quat) -> Mat:
        a, b, c, d = al.coords()
        if self.case == CASE_U:
            t, J1, J = self.t, self.qd.J1, self.qd.J
            return la.mat(
                [
                    [a + b * t, -(c + d * t) / (2 * t * J1)],
                    [-2 * t * J * (c - d * t), a - b * t],
                ]
            )
        if self.case == CASE_J and self.j_variant == "ii":
            t, t1, u = self.t, self.t1, self.qd.u
            r = t / t1
            return la.mat([[a - c * r, -u * (b + d * r)], [-(b - d * r), a + c * r]])
        raise ValueError("i_2 to M_2(F) is not available in this case/variant")

    def vprime_matrix_entry(self, g: GElement) -> Quat:
        """Lower-left B-entry of the GU(V') matrix of the GU(V)-component
        of g (cases J1/J2), computed from the action on the basis v, v*.
        x' g := (g^-1 x)' and g^-1 acts by left multiplication by a1 a2;
        a triangular criterion is insensitive to the inversion."""
        qd = self.qd
        m = la.mat_mul(embed_b1_left(qd, g.a1), embed_b2_left(qd, g.a2))
        vrow, vstar = self._v_vstar()
        img = la.row_mul(vstar, m)
        beta, _delta = self._expand_over_b(img, vrow, vstar)
        return beta

    def _v_vstar(self) -> tuple[list[Fraction], list[Fraction]]:
        t = self.t
        z = Fraction(0)
        if self.case == CASE_J1:
            v = [Fraction(1, 2), 1 / (2 * t), z, z, z, z, z, z]
            vs = [z, z, z, z, Fraction(1), t, z, z]
            return v, vs
        # CASE_J2: swap the roles of B1 and B2 (indices 2 <-> 3)
        v = [Fraction(1, 2), z, 1 / (2 * t), z, z, z, z, z]
        vs = [z, z, z, z, Fraction(1), z, t, z]
        return v, vs

    def _expand_over_b(self, x: list[Fraction], v: list[Fraction], vs: list[Fraction]) -> tuple[Quat, Quat]:
        """Write x = v * beta + v* * delta with beta, delta in B."""
        qd = self.qd
        basis_elts = [qd.b_elt(1), qd.b_elt(0, 1), qd.b_elt(0, 0, 1), qd.b_elt(0, 0, 0, 1)]
        cols = []
        for base in (v, vs):
            for be in basis_elts:
                cols.append(la.row_mul(base, embed_b_right(qd, be)))
        coords = la.solve_left(cols, list(x))
        beta = sum((coords[i] * basis_elts[i] for i in range(1, 4)), coords[0] * basis_elts[0])
        delta = sum((coords[4 + i] * basis_elts[i] for i in range(1, 4)), coords[4] * basis_elts[0])
        return beta, delta


def pick_case(qd: QuatData, v: Place) -> str:
    """Case priority u > J > J1 > J2 among exact rational squares."""
    for val, case in ((qd.u, CASE_U), (qd.J, CASE_J), (qd.J1, CASE_J1), (qd.J2, CASE_J2)):
        if rational_sqrt(val) is not None:
            return case
    raise ValueError("no rational square among (u, J, J1, J2); pick different data")


def case_data(qd: QuatData, v: Place, case: str | None = None, s: Fraction | int = 1, j_variant: str = "i") -> CaseData:
    case = case or pick_case(qd, v)
    s = Fraction(s)
    u, J1, J2, J = qd.u, qd.J1, qd.J2, qd.J
    z = Fraction(0)
    t1 = None
    if case == CASE_U:
        t = rational_sqrt(u)
        if t is None:
            raise ValueError("u is not a rational square")
        h0 = la.mat(
            [
                [-1 / (2 * t), z, z, z, Fraction(-1, 2), z, z, z],
                [z, 1 / (2 * t * J1), z, z, z, Fraction(-1, 2), z, z],
                [z, z, 1 / (2 * t * J2), z, z, z, Fraction(-1, 2), z],
                [z, z, z, -1 / (2 * t * J), z, z, z, Fraction(-1, 2)],
                [Fraction(1), z, z, z, -t, z, z, z],
                [z, Fraction(1), z, z, z, t * J1, z, z],
                [z, z, Fraction(1), z, z, z, t * J2, z],
                [z, z, z, Fraction(1), z, z, z, -t * J],
            ]
        )
        x_basis = la.mat(
            [
                [1, 0, 0, 0, t, 0, 0, 0],
                [0, 1, 0, 0, 0, -t * J1, 0, 0],
                [0, 0, -1 / (2 * t * J), 0, 0, 0, 1 / (2 * J1), 0],
                [0, 0, 0, -1 / (2 * t * J), 0, 0, 0, Fraction(-1, 2)],
            ]
        )
        y_basis = la.mat(
            [
                [-1 / (2 * t), 0, 0, 0, Fraction(1, 2), 0, 0, 0],
                [0, 1 / (2 * t * J1), 0, 0, 0, Fraction(1, 2), 0, 0],
                [0, 0, -J1, 0, 0, 0, -t * J, 0],
                [0, 0, 0, 1, 0, 0, 0, -t * J],
            ]
        )
    elif case == CASE_J:
        t = rational_sqrt(J)
        if t is None:
            raise ValueError("J is not a rational square")
        h0 = la.mat(
            [
                [Fraction(1, 2), z, z, t / (2 * J), z, z, z, z],
                [z, Fraction(1, 2), t / (2 * J2), z, z, z, z, z],
                [z, z, z, z, Fraction(-1, 2), z, z, t / 2],
                [z, z, z, z, z, Fraction(-1, 2), t / (2 * J1), z],
                [z, z, z, z, Fraction(1), z, z, t],
                [z, z, z, z, z, Fraction(1), t / J1, z],
                [Fraction(1), z, z, -t / J, z, z, z, z],
                [z, Fraction(1), -t / J2, z, z, z, z, z],
            ]
        )
        if j_variant == "i":
            x_basis = la.mat(
                [
                    [Fraction(1, 2), 0, 0, 1 / (2 * t), 0, 0, 0, 0],
                    [0, 0, 0, 0, Fraction(1, 2), 0, 0, -t / 2],
                    [0, Fraction(1, 2) / s, J1 / (2 * t) / s, 0, 0, 0, 0, 0],
                    [0, 0, 0, 0, 0, -J1 / 2 / s, t / 2 / s, 0],
                ]
            )
            y_basis = la.mat(
                [
                    [0, 0, 0, 0, 1, 0, 0, t],
                    [-1, 0, 0, 1 / t, 0, 0, 0, 0],
                    [0, 0, 0, 0, 0, s, s * t / J1, 0],
                    [0, s / J1, -s / t, 0, 0, 0, 0, 0],
                ]
            )
        else:
            t1 = rational_sqrt(J1)
            if t1 is None:
                raise ValueError("variant (ii) needs J1 a rational square")
            x_basis = la.mat(
                [
                    [Fraction(1, 2), 1 / (2 * t1), t1 / (2 * t), 1 / (2 * t), 0, 0, 0, 0],
                    [0, 0, 0, 0, Fraction(1, 2), -t1 / 2, t / (2 * t1), -t / 2],
                    [0, 0, 0, 0, Fraction(1, 2), t1 / 2, -t / (2 * t1), -t / 2],
                    [1 / (2 * u), -1 / (2 * t1 * u), -t1 / (2 * t * u), 1 / (2 * t * u), 0, 0, 0, 0],
                ]
            )
            y_basis = la.mat(
                [
                    [0, 0, 0, 0, Fraction(1, 2), t1 / 2, t / (2 * t1), t / 2],
                    [Fraction(-1, 2), 1 / (2 * t1), -t1 / (2 * t), 1 / (2 * t), 0, 0, 0, 0],
                    [Fraction(-1, 2), -1 / (2 * t1), t1 / (2 * t), 1 / (2 * t), 0, 0, 0, 0],
                    [0, 0, 0, 0, u / 2, -t1 * u / 2, -t * u / (2 * t1), t * u / 2],
                ]
            )
    elif case == CASE_J1:
        t = rational_sqrt(J1)
        if t is None:
            raise ValueError("J1 is not a rational square")
        h0 = la.mat(
            [
                [Fraction(1, 2), 1 / (2 * t), z, z, z, z, z, z],
                [z, z, Fraction(1, 2), 1 / (2 * t), z, z, z, z],
                [z, z, z, z, Fraction(-1, 2), t / 2, z, z],
                [z, z, z, z, z, z, Fraction(-1, 2), t / 2],
                [z, z, z, z, Fraction(1), t, z, z],
                [z, z, z, z, z, z, Fraction(1), t],
                [Fraction(1), -1 / t, z, z, z, z, z, z],
                [z, z, Fraction(1), -1 / t, z, z, z, z],
            ]
        )
        x_basis = la.mat(
            [
                [Fraction(1, 2), 1 / (2 * t), 0, 0, 0, 0, 0, 0],
                [0, 0, 0, 0, Fraction(1, 2), -t / 2, 0, 0],
                [0, 0, t / (2 * s), 1 / (2 * s), 0, 0, 0, 0],
                [0, 0, 0, 0, 0, 0, J / (2 * s * t), -J / (2 * s)],
            ]
        )
        y_basis = la.mat(
            [
                [0, 0, 0, 0, 1, t, 0, 0],
                [-1, 1 / t, 0, 0, 0, 0, 0, 0],
                [0, 0, 0, 0, 0, 0, s / t, s],
                [0, 0, -s * t / J, s / J, 0, 0, 0, 0],
            ]
        )
    elif case == CASE_J2:
        # swap the roles of B1 and B2: run the J1 construction in the
        # swapped algebra and conjugate by the tensor-factor permutation
        qd_sw = QuatData(qd.u, qd.J2, qd.J1, validate=False)
        cd_sw = case_data(qd_sw, v, CASE_J1, s=s)
        perm = _swap_b1_b2_matrix()
        t = cd_sw.t
        h0 = la.mat_mul(la.mat_mul(perm, cd_sw.h0), perm)
        x_basis = la.mat_mul(cd_sw.x_basis, perm)
        y_basis = la.mat_mul(cd_sw.y_basis, perm)
    else:
        raise ValueError(f"unknown case {case}")

    cd = CaseData(
        qd=qd, place=v, case=case, t=t, s=s, t1=t1, j_variant=(j_variant if case == CASE_J else ""),
        h0=h0, x_basis=x_basis, y_basis=y_basis,
    )
    _check_case(cd)
    return cd


def _swap_b1_b2_matrix() -> Mat:
    """Coordinate permutation induced by swapping the tensor factors:
    e2 <-> e3, e2* <-> e3*."""
    perm = la.identity(8)
    for i, j in ((1, 2), (5, 6)):
        perm[i][i] = perm[j][j] = Fraction(0)
        perm[i][j] = perm[j][i] = Fraction(1)
    return perm


def _check_case(cd: CaseData) -> None:
    sp = standard_space(4)
    if not sp.in_sp(cd.h0):
        raise ArithmeticError("h0 is not symplectic")
    n = 4
    x_std = la.mat([[Fraction(1 if j == i else 0) for j in range(8)] for i in range(n)])
    y_std = standard_y(n)
    if not la.row_spans_equal(la.mat_mul(x_std, cd.h0), cd.x_basis):
        raise ArithmeticError("X' != X h0")
    if not la.row_spans_equal(la.mat_mul(y_std, cd.h0), cd.y_basis):
        raise ArithmeticError("Y' != Y h0")
    # <<v_i, v_j*>> = delta_ij
    gram = la.mat_mul(la.mat_mul(cd.x_basis, sp.gram), la.transpose(cd.y_basis))
    if not la.mat_eq(gram, la.identity(n)):
        raise ArithmeticError("primed bases are not dual")
