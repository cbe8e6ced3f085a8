"""Exact Sp(2n, Q) / GSp(2n, Q), Bruhat data, Leray invariants, and the
metaplectic 2-cocycle with its similitude extension.

Conventions: matrices act on row vectors on the right.  The standard
polarized space has basis e_1..e_n, e_1*..e_n* with Gram matrix
J = ((0, 1_n), (-1_n, 0)); Y = span(e*) is the reference Lagrangian.
A generic symplectic space with an arbitrary nondegenerate antisymmetric
Gram matrix is supported, because the doubled 16-dimensional space uses
the diagonal Lagrangian rather than the standard one.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import _linalg as la
from ._linalg import Mat
from .localfield import Place, hilbert_symbol
from .weil import Mu8, SymForm, gamma_scaled, weil_index_form


class SympSpace:
    """A symplectic Q-space given by an exact antisymmetric Gram matrix."""

    def __init__(self, gram: Mat):
        self.gram = la.mat(gram)
        self.dim = len(self.gram)
        if self.dim % 2:
            raise ValueError("symplectic spaces are even dimensional")
        if la.det(self.gram) == 0:
            raise ValueError("form is degenerate")
        for i in range(self.dim):
            for j in range(self.dim):
                if self.gram[i][j] != -self.gram[j][i]:
                    raise ValueError("form is not antisymmetric")

    @property
    def n(self) -> int:
        return self.dim // 2

    def pair(self, x: list[Fraction], y: list[Fraction]) -> Fraction:
        return sum(a * b for a, b in zip(la.row_mul(x, self.gram), y))

    def is_isotropic(self, rows: Mat) -> bool:
        g = la.mat_mul(la.mat_mul(rows, self.gram), la.transpose(rows))
        return all(all(x == 0 for x in row) for row in g)

    def is_lagrangian(self, rows: Mat) -> bool:
        return len(rows) == self.n and la.rank(rows) == self.n and self.is_isotropic(rows)

    def in_sp(self, g: Mat, nu: Fraction | int = 1) -> bool:
        lhs = la.mat_mul(la.mat_mul(g, self.gram), la.transpose(g))
        return la.mat_eq(lhs, la.scal_mul(Fraction(nu), self.gram))

    def similitude(self, g: Mat, check: bool = False) -> Fraction:
        """The similitude factor; with check=True the whole defining
        identity g G g^T = nu G is verified, otherwise one nonzero entry
        is used."""
        if check:
            lhs = la.mat_mul(la.mat_mul(g, self.gram), la.transpose(g))
            nu = None
            for i in range(self.dim):
                for j in range(self.dim):
                    if self.gram[i][j]:
                        cand = lhs[i][j] / self.gram[i][j]
                        if nu is None:
                            nu = cand
                        elif nu != cand:
                            raise ValueError("not a symplectic similitude")
                    elif lhs[i][j]:
                        raise ValueError("not a symplectic similitude")
            assert nu is not None
            return nu
        i, j = self._anchor
        gi = la.row_mul(g[i], self.gram)
        val = sum(x * y for x, y in zip(gi, g[j]))
        return val / self.gram[i][j]

    @property
    def _anchor(self) -> tuple[int, int]:
        if not hasattr(self, "_anchor_cache"):
            found = next(
                (i, j) for i in range(self.dim) for j in range(self.dim) if self.gram[i][j]
            )
            self._anchor_cache = found
        return self._anchor_cache

    def sp_inverse(self, g: Mat, nu: Fraction | None = None) -> Mat:
        """g^-1 = (1/nu) G g^T G^-1 for a symplectic similitude."""
        if nu is None:
            nu = self.similitude(g)
        if not hasattr(self, "_gram_inv"):
            self._gram_inv = la.inverse(self.gram)
        out = la.mat_mul(la.mat_mul(self.gram, la.transpose(g)), self._gram_inv)
        inv_nu = 1 / nu
        return [[x * inv_nu for x in row] for row in out]


_STD_SPACES: dict[int, SympSpace] = {}


def standard_space(n: int) -> SympSpace:
    if n not in _STD_SPACES:
        g = la.zeros(2 * n, 2 * n)
        for i in range(n):
            g[i][n + i] = Fraction(1)
            g[n + i][i] = Fraction(-1)
        _STD_SPACES[n] = SympSpace(g)
    return _STD_SPACES[n]


def standard_y(n: int) -> Mat:
    """The Lagrangian Y = span(e_1*, ..., e_n*)."""
    rows = la.zeros(n, 2 * n)
    for i in range(n):
        rows[i][n + i] = Fraction(1)
    return rows


def canonical_lagrangian(space: SympSpace, rows: Mat) -> Mat:
    """Reduced row echelon form, so equality of Lagrangians is syntactic."""
    if not space.is_lagrangian(rows):
        raise ValueError("rows do not span a Lagrangian")
    return la.row_basis(rows)


# ---------------------------------------------------------------------------
# Leray invariant
# ---------------------------------------------------------------------------


def leray(space: SympSpace, y: Mat, y1: Mat, y2: Mat, checked: bool = True) -> SymForm:
    """The Leray form q(Y, Y', Y'') of three Lagrangians: possibly the
    0-dimensional form; Sp-invariant as a congruence class."""
    if checked:
        for lam in (y, y1, y2):
            if not space.is_lagrangian(lam):
                raise ValueError("Leray invariant requires Lagrangian subspaces")
    # generic fast path: pairwise transversality via three determinants
    if la.det(y + y1) != 0 and la.det(y1 + y2) != 0 and la.det(y2 + y) != 0:
        return _leray_transverse(space, y, y1, y2)
    r = la.row_basis(
        la.row_span_intersect(y, y1) + la.row_span_intersect(y1, y2) + la.row_span_intersect(y2, y)
    )
    if not r:
        return _leray_transverse(space, y, y1, y2)
    # pass to R^perp / R with the induced form
    gram_r = la.mat_mul(space.gram, la.transpose(r))  # dim x |r|
    rperp = la.null_space(la.transpose(gram_r))
    # complement of R inside R^perp: first linearly independent rows
    comp: Mat = []
    base = [row[:] for row in r]
    for row in rperp:
        if la.rank(base + comp + [row]) > len(base) + len(comp):
            comp.append(row)
    q_gram = la.mat_mul(la.mat_mul(comp, space.gram), la.transpose(comp))
    quot = SympSpace(q_gram)

    def project(lam: Mat) -> Mat:
        inter = la.row_span_intersect(lam, rperp)
        coords = []
        basis = comp + r
        for w in inter:
            sol = _express(w, basis)
            coords.append(sol[: len(comp)])
        return la.row_basis(coords)

    return _leray_transverse(quot, project(y), project(y1), project(y2))


def _express(v: list[Fraction], basis: Mat) -> list[Fraction]:
    """Coordinates of v in the given (independent, spanning-for-v) rows."""
    cols = la.transpose(basis)
    # solve basis^T coeffs = v as least structured exact solve
    aug = [row[:] + [v[i]] for i, row in enumerate(cols)]
    red, pivots = la.rref(aug)
    n = len(basis)
    out = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        if c == n:
            raise ValueError("vector not in span")
        out[c] = red[i][n]
    return out


def _leray_transverse(space: SympSpace, y: Mat, y1: Mat, y2: Mat) -> SymForm:
    if not y:
        return SymForm.empty()
    n = space.n
    assert len(y) == n and len(y1) == n and len(y2) == n
    # unique g in N_Y with Y' g = Y'': write each w in Y'' as x' + yy with
    # x' in Y', yy in Y; then q(x', z') = <<x', z' b>> where z' b is the
    # Y-component of the element of Y'' over z'
    basis = y1 + y  # rows form a basis of the space by transversality
    coords = la.mat_mul(y2, la.inverse(basis))
    xs = la.mat_mul([row[:n] for row in coords], y1)
    ys = la.mat_mul([row[n:] for row in coords], y)
    # {xs} is a basis of Y' (transversality of Y'' and Y); Gram of q on it
    gram = la.mat_mul(la.mat_mul(xs, space.gram), la.transpose(ys))
    q = SymForm(gram)
    if not q.is_nondegenerate():
        raise ArithmeticError("Leray form came out degenerate")
    return q


# ---------------------------------------------------------------------------
# cocycles
# ---------------------------------------------------------------------------

HALF = Fraction(1, 2)


def cocycle_lagrangian(space: SympSpace, lam: Mat, g1: Mat, g2: Mat, v: Place) -> Mu8:
    """z_L(g1, g2) = gamma(1/2 psi o q(L, L g2^-1, L g1)) for g1, g2 in Sp."""
    q = leray(space, lam, la.mat_mul(lam, space.sp_inverse(g2, Fraction(1))), la.mat_mul(lam, g1))
    return weil_index_form(q, v, HALF)


def cocycle_sp(g1: Mat, g2: Mat, v: Place, space: SympSpace | None = None) -> Mu8:
    """Rao's 2-cocycle z_Y on Sp(2n) for the standard polarization.
    Uses Y g = (C | D) block slicing and the block formula for the
    symplectic inverse."""
    n = len(g1) // 2
    sp = space or standard_space(n)
    y = standard_y(n)
    yg1 = [row[:] for row in g1[n:]]
    # rows n..2n of g2^-1 = (-C^T | A^T) blocks of g2
    a2 = [row[:n] for row in g2[:n]]
    c2 = [row[:n] for row in g2[n:]]
    yg2inv = [[-c2[j][i] for j in range(n)] + [a2[j][i] for j in range(n)] for i in range(n)]
    q = leray(sp, y, yg2inv, yg1, checked=False)
    return weil_index_form(q, v, HALF)


# -- Bruhat decomposition ----------------------------------------------------


def tau_j(n: int, j: int) -> Mat:
    """e_i -> e_i and e_i* -> e_i* for i <= n-j; e_i -> -e_i*, e_i* -> e_i
    for i > n-j."""
    m = la.zeros(2 * n, 2 * n)
    for i in range(n - j):
        m[i][i] = Fraction(1)
        m[n + i][n + i] = Fraction(1)
    for i in range(n - j, n):
        m[i][n + i] = Fraction(-1)
        m[n + i][i] = Fraction(1)
    return m


def m_block(a: Mat) -> Mat:
    n = len(a)
    at_inv = la.transpose(la.inverse(a))
    return la.block([[a, la.zeros(n, n)], [la.zeros(n, n), at_inv]])


def n_block(b: Mat) -> Mat:
    n = len(b)
    for i in range(n):
        for j in range(n):
            if b[i][j] != b[j][i]:
                raise ValueError("n(b) requires symmetric b")
    return la.block([[la.identity(n), b], [la.zeros(n, n), la.identity(n)]])


def d_nu(n: int, nu: Fraction | int) -> Mat:
    m = la.identity(2 * n)
    for i in range(n):
        m[n + i][n + i] = Fraction(nu)
    return m


@dataclass
class BruhatData:
    p1: Mat
    j: int
    p2: Mat
    x_class: Fraction  # det(a_1 a_2), well defined modulo squares


def bruhat(h: Mat) -> BruhatData:
    """Exact factorization h = p1 tau_j p2 with p_i in the Siegel parabolic
    P_Y; j = rank of the lower-left block; construct-and-verify."""
    n = len(h) // 2
    A, B, C, D = la.blocks2(h, n)
    j = la.rank(C)
    u, vmat = _rank_normal(C, j)
    # h1 = m(t(u)^-1) h m(v): lower-left block becomes diag(0_(n-j), 1_j)
    mu_left = m_block(la.transpose(la.inverse(u)))
    mv_right = m_block(vmat)
    h1 = la.mat_mul(la.mat_mul(mu_left, h), mv_right)
    A1, B1, C1, D1 = la.blocks2(h1, n)
    # clear D off the pivot rows: right-multiply by n(-b)
    d21 = [row[: n - j] for row in D1[n - j :]]
    d22 = [row[n - j :] for row in D1[n - j :]]
    b = la.zeros(n, n)
    for i in range(j):
        for k in range(n - j):
            b[n - j + i][k] = d21[i][k]
            b[k][n - j + i] = d21[i][k]
        for k in range(j):
            b[n - j + i][n - j + k] = d22[i][k]
    h2 = la.mat_mul(h1, n_block(la.scal_mul(-1, b)))
    A2, B2, C2, D2 = la.blocks2(h2, n)
    a11 = [row[: n - j] for row in A2[: n - j]]
    a12 = [row[n - j :] for row in A2[: n - j]]
    a22 = [row[n - j :] for row in A2[n - j :]]
    b11 = [row[: n - j] for row in B2[: n - j]]
    d11 = [row[: n - j] for row in D2[: n - j]]
    # h2 = n(btil) m(atil) tau_j with atil = diag(A11, 1_j)
    atil = la.identity(n)
    for i in range(n - j):
        for k in range(n - j):
            atil[i][k] = a11[i][k]
    btil = la.zeros(n, n)
    if n - j:
        b11d = la.mat_mul(b11, la.inverse(d11))
        for i in range(n - j):
            for k in range(n - j):
                btil[i][k] = b11d[i][k]
    for i in range(n - j):
        for k in range(j):
            btil[i][n - j + k] = a12[i][k]
            btil[n - j + k][i] = a12[i][k]
    for i in range(j):
        for k in range(j):
            btil[n - j + i][n - j + k] = a22[i][k]
    p_left = la.mat_mul(n_block(btil), m_block(atil))
    # h = [m(t(u)) p_left] tau_j [n(b) m(v^-1)]
    p1 = la.mat_mul(m_block(la.transpose(u)), p_left)
    p2 = la.mat_mul(n_block(b), m_block(la.inverse(vmat)))
    recomposed = la.mat_mul(la.mat_mul(p1, tau_j(n, j)), p2)
    if not la.mat_eq(recomposed, h):
        raise ArithmeticError("Bruhat recomposition failed")
    x_class = la.det(la.transpose(u)) * la.det(atil) * la.det(la.inverse(vmat))
    return BruhatData(p1=p1, j=j, p2=p2, x_class=x_class)


def _rank_normal(c: Mat, j: int) -> tuple[Mat, Mat]:
    """Invertible u, v with u c v = diag(0_(n-j), 1_j)."""
    n = len(c)
    work = [row[:] for row in c]
    u = la.identity(n)
    vmat = la.identity(n)
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, n) if work[i][col]), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        u[r], u[piv] = u[piv], u[r]
        inv = 1 / work[r][col]
        work[r] = [x * inv for x in work[r]]
        u[r] = [x * inv for x in u[r]]
        for i in range(n):
            if i != r and work[i][col]:
                f = work[i][col]
                work[i] = [x - f * y for x, y in zip(work[i], work[r])]
                u[i] = [x - f * y for x, y in zip(u[i], u[r])]
        r += 1
    assert r == j
    # clear the non-pivot columns of the echelon rows (column operations)
    piv_cols = [next(cidx for cidx in range(n) if work[i][cidx]) for i in range(r)]
    for i in range(r):
        pc = piv_cols[i]
        for cidx in range(n):
            if cidx != pc and work[i][cidx]:
                f = work[i][cidx]
                for t in range(n):
                    work[t][cidx] -= f * work[t][pc]
                    vmat[t][cidx] -= f * vmat[t][pc]
    # column permutation: pivot column i -> n-j+i
    perm: list[int | None] = [None] * n
    for i, pc in enumerate(piv_cols):
        perm[pc] = n - j + i
    it = iter(c_ for c_ in range(n) if c_ not in {n - j + i for i in range(j)})
    for cidx in range(n):
        if perm[cidx] is None:
            perm[cidx] = next(it)
    pmat = la.zeros(n, n)
    for src, dst in enumerate(perm):
        pmat[src][dst] = Fraction(1)
    vmat = la.mat_mul(vmat, pmat)
    # row permutation: pivot row i -> n-j+i, zero rows move to the top
    u = [u[j + t] for t in range(n - j)] + [u[i] for i in range(j)]
    target = la.zeros(n, n)
    for i in range(j):
        target[n - j + i][n - j + i] = Fraction(1)
    if not la.mat_eq(la.mat_mul(la.mat_mul(u, c), vmat), target):
        raise ArithmeticError("rank normal form failed")
    return u, vmat


def x_invariant(h: Mat) -> Fraction:
    return bruhat(h).x_class


def j_invariant(h: Mat) -> int:
    n = len(h) // 2
    return la.rank([row[:n] for row in h[n:]])


# -- similitude extension -----------------------------------------------------


_BRUHAT_CACHE: dict[tuple, BruhatData] = {}


def bruhat_cached(h: Mat) -> BruhatData:
    key = tuple(tuple(row) for row in h)
    out = _BRUHAT_CACHE.get(key)
    if out is None:
        out = bruhat(h)
        if len(_BRUHAT_CACHE) > 4096:
            _BRUHAT_CACHE.clear()
        _BRUHAT_CACHE[key] = out
    return out


def v_y(h: Mat, nu: Fraction | int, v: Place) -> Mu8:
    """v_Y(h, nu) = (x(h), nu) * gamma(nu, 1/2 psi)^(-j(h))."""
    nu = Fraction(nu)
    if nu == 0:
        raise ValueError("nu must be nonzero")
    if nu == 1:
        return Mu8(0)
    data = bruhat_cached(h)
    sym = hilbert_symbol(data.x_class, nu, v)
    return Mu8.from_sign(sym) * gamma_scaled(nu, v, HALF) ** (-data.j)


def _scale_cols(g: Mat, n: int, c: Fraction) -> Mat:
    """g * d(c): scale the last n columns (O(n^2))."""
    return [row[:n] + [x * c for x in row[n:]] for row in g]


def _scale_rows(g: Mat, n: int, c: Fraction) -> Mat:
    """d(c) * g: scale the last n rows."""
    return [row[:] for row in g[:n]] + [[x * c for x in row] for row in g[n:]]


def cocycle_gsp(g1: Mat, g2: Mat, v: Place, space: SympSpace | None = None) -> Mu8:
    """z_Y on GSp(2n): z(g, g') = z^Sp(h, alpha_nu(h')) v_Y(h', nu) where
    g = h d(nu), g' = h' d(nu')."""
    n = len(g1) // 2
    sp = space or standard_space(n)
    nu1 = sp.similitude(g1)
    nu2 = sp.similitude(g2)
    h1 = _scale_cols(g1, n, 1 / nu1)
    h2 = _scale_cols(g2, n, 1 / nu2)
    h2c = _scale_cols(_scale_rows(h2, n, nu1), n, 1 / nu1)
    return cocycle_sp(h1, h2c, v, sp) * v_y(h2, nu1, v)
