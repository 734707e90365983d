"""Matrices over the coefficient rings, and exact linear algebra over the
Euclidean domains we need: Smith normal forms with unimodular transforms
over Z, Q and Q[t,t^-1], kernels, divisibility-exact solves, homology of
free complexes, contractions of acyclic complexes, and chain homotopy
inverses.

Row-vector convention throughout: the matrix of f: C -> D has shape
(rank C, rank D) and acts on row vectors on the right, so "apply f then g"
is the ordinary product F @ G.  This matches the handle chain complex
convention; block formulas quoted from column-convention displays are
assembled blockwise in this convention at the call sites.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .rings import LAURENT_Q, LaurentPoly, QQ, Ring, ZZ, poly_divmod


@dataclass(frozen=True)
class Mat:
    ring: Ring
    rows: tuple  # tuple of tuples of ring elements
    shape: tuple

    @staticmethod
    def from_rows(ring, rows):
        rows = tuple(tuple(r) for r in rows)
        if rows:
            w = len(rows[0])
            if any(len(r) != w for r in rows):
                raise ValueError("ragged matrix")
        else:
            w = 0
        return Mat(ring, rows, (len(rows), w))

    @staticmethod
    def zero(ring, nr, nc):
        z = ring.zero()
        return Mat(ring, tuple(tuple(z for _ in range(nc)) for _ in range(nr)),
                   (nr, nc))

    @staticmethod
    def identity(ring, n):
        z, o = ring.zero(), ring.one()
        return Mat(ring, tuple(tuple(o if i == j else z for j in range(n))
                               for i in range(n)), (n, n))

    def __getitem__(self, ij):
        return self.rows[ij[0]][ij[1]]

    def add(self, o):
        if self.shape != o.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {o.shape}")
        r = self.ring
        return Mat(r, tuple(tuple(r.add(a, b) for a, b in zip(ra, rb))
                            for ra, rb in zip(self.rows, o.rows)), self.shape)

    def neg(self):
        r = self.ring
        return Mat(r, tuple(tuple(r.neg(a) for a in ra) for ra in self.rows),
                   self.shape)

    def sub(self, o):
        return self.add(o.neg())

    def mul(self, o):
        """self then o as maps: matrix product self @ o."""
        if self.shape[1] != o.shape[0]:
            raise ValueError(f"cannot compose {self.shape} with {o.shape}")
        r = self.ring
        n, k, m = self.shape[0], self.shape[1], o.shape[1]
        out = []
        for i in range(n):
            row = []
            for j in range(m):
                acc = r.zero()
                for s in range(k):
                    a = self.rows[i][s]
                    if r.is_zero(a):
                        continue
                    b = o.rows[s][j]
                    if r.is_zero(b):
                        continue
                    acc = r.add(acc, r.mul(a, b))
                row.append(acc)
            out.append(tuple(row))
        return Mat(r, tuple(out), (n, m))

    def scale(self, c):
        r = self.ring
        return Mat(r, tuple(tuple(r.mul(c, a) for a in ra) for ra in self.rows),
                   self.shape)

    def scale_sign(self, s):
        return self if s == 1 else self.neg()

    def conj_transpose(self):
        """Matrix of the dual map f^* in the dual bases (row convention)."""
        r = self.ring
        nr, nc = self.shape
        return Mat(r, tuple(tuple(r.conj(self.rows[i][j]) for i in range(nr))
                            for j in range(nc)), (nc, nr))

    def transpose(self):
        nr, nc = self.shape
        return Mat(self.ring, tuple(tuple(self.rows[i][j] for i in range(nr))
                                    for j in range(nc)), (nc, nr))

    def is_zero(self):
        r = self.ring
        return all(r.is_zero(a) for row in self.rows for a in row)

    def map_entries(self, fn, ring=None):
        r = ring if ring is not None else self.ring
        return Mat(r, tuple(tuple(fn(a) for a in row) for row in self.rows),
                   self.shape)

    def to_lists(self):
        return [list(r) for r in self.rows]


def block_mat(ring, blocks, row_sizes, col_sizes):
    """Assemble a matrix from a grid of optional Mat blocks.

    blocks[i][j] maps the i-th source summand to the j-th target summand
    (row convention); None means zero.
    """
    nr, nc = sum(row_sizes), sum(col_sizes)
    out = [[ring.zero()] * nc for _ in range(nr)]
    r0 = 0
    for i, rs in enumerate(row_sizes):
        c0 = 0
        for j, cs in enumerate(col_sizes):
            b = blocks[i][j]
            if b is not None:
                if b.shape != (rs, cs):
                    raise ValueError(
                        f"block ({i},{j}) has shape {b.shape}, wanted {(rs, cs)}")
                for a in range(rs):
                    for c in range(cs):
                        out[r0 + a][c0 + c] = b.rows[a][c]
            c0 += cs
        r0 += rs
    return Mat.from_rows(ring, out)


# ---------------------------------------------------------------------------
# Euclidean domains for Smith normal forms.


class Domain:
    """Euclidean structure on top of a Ring."""

    ring: Ring

    def norm(self, a):
        raise NotImplementedError

    def divmod(self, a, b):
        raise NotImplementedError

    def divides(self, a, b):
        """a | b exactly?"""
        if self.ring.is_zero(b):
            return True
        if self.ring.is_zero(a):
            return False
        _, r = self.divmod(b, a)
        return self.ring.is_zero(r)

    def exact_div(self, b, a):
        q, r = self.divmod(b, a)
        if not self.ring.is_zero(r):
            raise ArithmeticError("inexact division")
        return q

    def normalize_unit(self, a):
        """(u, a') with a = u * a' and a' the canonical associate."""
        raise NotImplementedError


class IntDomain(Domain):
    ring = ZZ

    def norm(self, a):
        return abs(a)

    def divmod(self, a, b):
        q, r = divmod(a, b)
        # symmetric remainder keeps norms small
        if r * 2 > abs(b):
            q, r = q + (1 if b > 0 else -1), r - abs(b)
        return q, r

    def normalize_unit(self, a):
        if a < 0:
            return -1, -a
        return 1, a


class RatDomain(Domain):
    ring = QQ

    def norm(self, a):
        return 0 if a == 0 else 1

    def divmod(self, a, b):
        return a / b, Fraction(0)

    def normalize_unit(self, a):
        if a == 0:
            return Fraction(1), Fraction(0)
        return a, Fraction(1)


class LaurentDomain(Domain):
    """Q[t,t^-1] is Euclidean with norm = length of the support interval;
    canonical associates are monic polynomials with nonzero constant term."""

    ring = LAURENT_Q

    def norm(self, a):
        if a.is_zero():
            return -1
        return a.degree() - a.valuation()

    def divmod(self, a, b):
        if b.is_zero():
            raise ZeroDivisionError
        va, da = a.dense()
        vb, db = b.dense()
        if not da:
            return LaurentPoly(), LaurentPoly()
        q, r = poly_divmod(da, db)
        # a = t^va A, b = t^vb B, A = qB + r => a = (t^(va-vb) q) b + t^va r
        return (LaurentPoly.from_dense(va - vb, q),
                LaurentPoly.from_dense(va, r))

    def normalize_unit(self, a):
        if a.is_zero():
            return LaurentPoly.const(1), a
        v, d = a.dense()
        lead = d[-1]
        unit = LaurentPoly.monomial(v, lead)
        norm = LaurentPoly.from_dense(0, [c / lead for c in d])
        return unit, norm


INT_DOMAIN = IntDomain()
RAT_DOMAIN = RatDomain()
LAURENT_DOMAIN = LaurentDomain()


def domain_for(ring):
    if ring is ZZ or isinstance(ring, type(ZZ)):
        return INT_DOMAIN
    if ring is QQ or isinstance(ring, type(QQ)):
        return RAT_DOMAIN
    from .rings import LaurentRing
    if isinstance(ring, LaurentRing):
        if not ring.rational:
            raise ValueError("Smith forms are taken over Q[t,t^-1]; "
                             "rationalize first")
        return LAURENT_DOMAIN
    raise ValueError(f"no Euclidean structure for ring {ring.name}")


@dataclass
class SmithForm:
    """U A V = D with U, V unimodular; inverses tracked."""

    ring: Ring
    D: Mat
    U: Mat
    Uinv: Mat
    V: Mat
    Vinv: Mat
    diagonal: list  # canonical-associate diagonal entries

    @property
    def rank(self):
        return sum(1 for d in self.diagonal if not self.ring.is_zero(d))


def smith_normal_form(A: Mat, domain=None):
    dom = domain or domain_for(A.ring)
    ring = A.ring
    nr, nc = A.shape
    a = [list(r) for r in A.rows]
    U = [list(r) for r in Mat.identity(ring, nr).rows]
    Ui = [list(r) for r in Mat.identity(ring, nr).rows]
    V = [list(r) for r in Mat.identity(ring, nc).rows]
    Vi = [list(r) for r in Mat.identity(ring, nc).rows]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]
        for r in range(nr):
            Ui[r][i], Ui[r][j] = Ui[r][j], Ui[r][i]

    def swap_cols(i, j):
        for r in range(nr):
            a[r][i], a[r][j] = a[r][j], a[r][i]
        for r in range(nc):
            V[r][i], V[r][j] = V[r][j], V[r][i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def add_row(dst, src, c):
        # row_dst += c * row_src ; U likewise; Uinv column op (inverse)
        a[dst] = [ring.add(x, ring.mul(c, y)) for x, y in zip(a[dst], a[src])]
        U[dst] = [ring.add(x, ring.mul(c, y)) for x, y in zip(U[dst], U[src])]
        nc_ = ring.neg(c)
        for r in range(nr):
            Ui[r][src] = ring.add(Ui[r][src], ring.mul(Ui[r][dst], nc_))

    def add_col(dst, src, c):
        # col_dst += col_src * c
        for r in range(nr):
            a[r][dst] = ring.add(a[r][dst], ring.mul(a[r][src], c))
        for r in range(nc):
            V[r][dst] = ring.add(V[r][dst], ring.mul(V[r][src], c))
        nc_ = ring.neg(c)
        Vi[src] = [ring.add(x, ring.mul(nc_, y)) for x, y in zip(Vi[src], Vi[dst])]

    def scale_row(i, u, uinv):
        a[i] = [ring.mul(u, x) for x in a[i]]
        U[i] = [ring.mul(u, x) for x in U[i]]
        for r in range(nr):
            Ui[r][i] = ring.mul(Ui[r][i], uinv)

    n = min(nr, nc)
    for k in range(n):
        while True:
            # pick pivot of least norm in the remaining block
            piv = None
            best = None
            for i in range(k, nr):
                for j in range(k, nc):
                    if not ring.is_zero(a[i][j]):
                        nm = dom.norm(a[i][j])
                        if best is None or nm < best:
                            best, piv = nm, (i, j)
            if piv is None:
                break
            i, j = piv
            if i != k:
                swap_rows(k, i)
            if j != k:
                swap_cols(k, j)
            dirty = False
            for i in range(k + 1, nr):
                if not ring.is_zero(a[i][k]):
                    q, _ = dom.divmod(a[i][k], a[k][k])
                    add_row(i, k, ring.neg(q))
                    if not ring.is_zero(a[i][k]):
                        dirty = True
            for j in range(k + 1, nc):
                if not ring.is_zero(a[k][j]):
                    q, _ = dom.divmod(a[k][j], a[k][k])
                    add_col(j, k, ring.neg(q))
                    if not ring.is_zero(a[k][j]):
                        dirty = True
            if not dirty and all(ring.is_zero(a[i][k]) for i in range(k + 1, nr)) \
                    and all(ring.is_zero(a[k][j]) for j in range(k + 1, nc)):
                break
        if ring.is_zero(a[k][k]):
            continue

    # enforce divisibility chain d_k | d_{k+1}
    changed = True
    while changed:
        changed = False
        for k in range(n - 1):
            if ring.is_zero(a[k][k]):
                # push zeros to the end
                for j in range(k + 1, n):
                    if not ring.is_zero(a[j][j]):
                        swap_rows(k, j)
                        swap_cols(k, j)
                        changed = True
                        break
                continue
            if ring.is_zero(a[k + 1][k + 1]):
                continue
            if not dom.divides(a[k][k], a[k + 1][k + 1]):
                add_col(k, k + 1, ring.one())
                # re-clear the 2x2 corner
                while not ring.is_zero(a[k + 1][k]):
                    q, _ = dom.divmod(a[k + 1][k], a[k][k])
                    add_row(k + 1, k, ring.neg(q))
                    if ring.is_zero(a[k + 1][k]):
                        break
                    swap_rows(k, k + 1)
                while not ring.is_zero(a[k][k + 1]):
                    q, _ = dom.divmod(a[k][k + 1], a[k][k])
                    add_col(k + 1, k, ring.neg(q))
                    if ring.is_zero(a[k][k + 1]):
                        break
                    swap_cols(k, k + 1)
                changed = True

    # canonical associates on the diagonal
    for k in range(n):
        if not ring.is_zero(a[k][k]):
            u, nrm = dom.normalize_unit(a[k][k])
            if not ring.eq(u, ring.one()):
                # row_k := u^-1 * row_k  (u is a unit: compute its inverse)
                uin = _unit_inverse(dom, u)
                scale_row(k, uin, u)

    D = Mat.from_rows(ring, a)
    sf = SmithForm(ring, D,
                   Mat.from_rows(ring, U), Mat.from_rows(ring, Ui),
                   Mat.from_rows(ring, V), Mat.from_rows(ring, Vi),
                   [a[k][k] for k in range(n)])
    _check_smith(sf, A)
    return sf


def _unit_inverse(dom, u):
    ring = dom.ring
    if ring is ZZ:
        if u not in (1, -1):
            raise ArithmeticError("non-unit")
        return u
    if ring is QQ:
        return Fraction(1) / u
    # Laurent unit c * t^k
    if len(u.coeffs) != 1:
        raise ArithmeticError(f"non-unit {u}")
    e, c = u.coeffs[0]
    return LaurentPoly.monomial(-e, Fraction(1) / Fraction(c))


def _check_smith(sf, A):
    ring = sf.ring
    if not sf.U.mul(A).mul(sf.V).sub(sf.D).is_zero():
        raise ArithmeticError("Smith form: U A V != D")
    n = sf.U.shape[0]
    if not sf.U.mul(sf.Uinv).sub(Mat.identity(ring, n)).is_zero():
        raise ArithmeticError("Smith form: U Uinv != I")
    m = sf.V.shape[0]
    if not sf.Vinv.mul(sf.V).sub(Mat.identity(ring, m)).is_zero():
        raise ArithmeticError("Smith form: Vinv V != I")
    off = [(i, j) for i in range(sf.D.shape[0]) for j in range(sf.D.shape[1])
           if i != j and not ring.is_zero(sf.D[i, j])]
    if off:
        raise ArithmeticError("Smith form not diagonal")


def kernel_basis(A: Mat, sf=None):
    """Rows spanning {x : x A = 0} over the domain of A.ring."""
    if sf is None:
        sf = smith_normal_form(A)
    ring = A.ring
    nr, nc = A.shape
    idx = [i for i in range(nr)
           if i >= min(nr, nc) or ring.is_zero(sf.diagonal[i])]
    rows = [sf.U.rows[i] for i in idx]
    return Mat.from_rows(ring, rows) if rows else Mat.zero(ring, 0, nr), idx, sf


def kernel_coordinates(x_rows: Mat, A: Mat, sf, idx):
    """Coordinates of rows of x_rows (lying in ker A) in the kernel basis."""
    ring = A.ring
    y = x_rows.mul(sf.Uinv)
    nr = A.shape[0]
    non_kernel = [i for i in range(nr) if i not in idx]
    for r in range(y.shape[0]):
        for i in non_kernel:
            if not ring.is_zero(y[r, i]):
                raise ArithmeticError("row not in the kernel")
    rows = [tuple(y[r, i] for i in idx) for r in range(y.shape[0])]
    return Mat.from_rows(ring, rows) if rows else Mat.zero(ring, 0, len(idx))


def solve_left(A: Mat, B: Mat, sf=None, domain=None):
    """X with X A = B over the domain, or None if no exact solution."""
    dom = domain or domain_for(A.ring)
    ring = A.ring
    if sf is None:
        sf = smith_normal_form(A, dom)
    nr, nc = A.shape
    BV = B.mul(sf.V)
    k = B.shape[0]
    Y = [[ring.zero()] * nr for _ in range(k)]
    for r in range(k):
        for j in range(nc):
            b = BV[r, j]
            if j < min(nr, nc) and not ring.is_zero(sf.diagonal[j]):
                if not dom.divides(sf.diagonal[j], b):
                    return None
                Y[r][j] = dom.exact_div(b, sf.D[j, j])
            else:
                if not ring.is_zero(b):
                    return None
    X = Mat.from_rows(ring, Y).mul(sf.U)
    return X


# ---------------------------------------------------------------------------
# Homology of bounded free complexes.


def betti_numbers(complex_):
    """Per-degree ranks over the fraction field (exact, field coefficients)."""
    out = {}
    for r in complex_.degrees():
        rank_r = complex_.rank(r)
        dr = complex_.d.get(r)
        dr1 = complex_.d.get(r + 1)
        rk_dr = _field_rank(dr) if dr is not None else 0
        rk_dr1 = _field_rank(dr1) if dr1 is not None else 0
        out[r] = rank_r - rk_dr - rk_dr1
    return out


def _field_rank(M: Mat):
    """Rank over the fraction field of the (commutative) entry ring."""
    if M.shape[0] == 0 or M.shape[1] == 0:
        return 0
    ring = M.ring
    if ring is QQ or ring is ZZ:
        rows = [[Fraction(x) for x in r] for r in M.rows]
        return _rank_q(rows)
    from .rings import LaurentRing
    if isinstance(ring, LaurentRing):
        # evaluate at a random-ish rational point avoiding low-degree roots:
        # exact rank needs care, so compute rank via Smith form instead
        sf = smith_normal_form(M.map_entries(_to_rational_laurent, LAURENT_Q))
        return sf.rank
    raise ValueError(f"no rank routine over {ring.name}")


def _to_rational_laurent(p):
    return LaurentPoly.from_dict({e: Fraction(c) for e, c in p.coeffs})


def _rank_q(rows):
    rows = [r[:] for r in rows]
    nr, nc = len(rows), len(rows[0])
    rank, rpos = 0, 0
    for c in range(nc):
        piv = next((r for r in range(rpos, nr) if rows[r][c] != 0), None)
        if piv is None:
            continue
        rows[rpos], rows[piv] = rows[piv], rows[rpos]
        inv = Fraction(1) / rows[rpos][c]
        rows[rpos] = [x * inv for x in rows[rpos]]
        for r in range(nr):
            if r != rpos and rows[r][c] != 0:
                f = rows[r][c]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[rpos])]
        rank += 1
        rpos += 1
        if rpos == nr:
            break
    return rank


def laurent_homology(complex_):
    """Module description over Q[t,t^-1] per degree.

    Returns {r: (free_rank, [monic torsion orders with nonzero constant
    term, ordered by divisibility])}.
    """
    out = {}
    for r in complex_.degrees():
        h = HomologyAt(complex_, r)
        out[r] = (h.free_rank, h.torsion)
    return out


class HomologyAt:
    """Homology of a Laurent complex at one degree, with class coordinates.

    Presents H_r = R^k / rowspan(W); classes are reported in the Smith
    coordinates of W, one coordinate per nonzero diagonal entry (reduced
    modulo it) plus the free coordinates.
    """

    def __init__(self, complex_, r):
        self.ring = complex_.ring
        self.dom = LAURENT_DOMAIN
        rank_r = complex_.rank(r)
        dr = complex_.d.get(r)
        dr1 = complex_.d.get(r + 1)
        if dr is None or dr.shape[1] == 0:
            self.K = Mat.identity(self.ring, rank_r)
            self.idx = list(range(rank_r))
            self.sf_d = None
        else:
            self.K, self.idx, self.sf_d = kernel_basis(dr)
        k = self.K.shape[0]
        self._dr = dr
        if dr1 is None or dr1.shape[0] == 0 or k == 0:
            W = Mat.zero(self.ring, 0, k)
        elif dr is None or dr.shape[1] == 0:
            W = dr1
        else:
            W = kernel_coordinates(dr1, dr, self.sf_d, self.idx)
        self.sfW = smith_normal_form(W, self.dom) if k else None
        self.k = k
        self.torsion, self.free_rank = [], 0
        self.coord_orders = []  # per Smith coordinate: order (None = free)
        if k:
            diag = list(self.sfW.diagonal) + [LaurentPoly()] * k
            for j in range(k):
                d = diag[j] if j < len(self.sfW.diagonal) else LaurentPoly()
                if self.ring.is_zero(d):
                    self.coord_orders.append(None)
                    self.free_rank += 1
                elif self.dom.norm(d) > 0:
                    self.coord_orders.append(d)
                    self.torsion.append(d)
                else:
                    self.coord_orders.append(LaurentPoly.const(1))

    def q_dimension(self):
        if self.free_rank:
            return None
        return sum(self.dom.norm(d) for d in self.torsion)

    def class_coords(self, cycle_rows: Mat):
        """Smith coordinates of homology classes of cycles (rows)."""
        if self.k == 0:
            return Mat.zero(self.ring, cycle_rows.shape[0], 0)
        if self._dr is None or self._dr.shape[1] == 0:
            y = cycle_rows
        else:
            y = kernel_coordinates(cycle_rows, self._dr, self.sf_d, self.idx)
        z = y.mul(self.sfW.V)
        out = []
        for row in z.rows:
            o = []
            for j, entry in enumerate(row):
                order = self.coord_orders[j]
                if order is None:
                    o.append(entry)
                elif self.dom.norm(order) == 0:
                    o.append(LaurentPoly())
                else:
                    _, rem = self.dom.divmod(entry, order)
                    o.append(rem)
            out.append(tuple(o))
        return Mat.from_rows(self.ring, out)

    def class_is_zero(self, coords_row):
        for j, entry in enumerate(coords_row):
            order = self.coord_orders[j]
            if order is None:
                if not self.ring.is_zero(entry):
                    return False
            elif self.dom.norm(order) > 0:
                if not self.dom.divides(order, entry):
                    return False
        return True


# ---------------------------------------------------------------------------
# Contractions and homotopy inverses (over a field or over Q[t,t^-1]).


def chain_contraction(complex_):
    """Gamma with d Gamma + Gamma d = 1 for an acyclic bounded free complex.

    Returns {r: Mat C_r -> C_{r+1}}; raises if the complex is not acyclic.
    """
    ring = complex_.ring
    degs = sorted(complex_.degrees())
    if not degs:
        return {}
    lo = degs[0]
    # kernels and sections per degree
    K, idx, sfs, T, S = {}, {}, {}, {}, {}
    for r in degs:
        dr = complex_.d.get(r)
        if dr is None or dr.shape[1] == 0:
            K[r] = Mat.identity(ring, complex_.rank(r))
            idx[r] = list(range(complex_.rank(r)))
            sfs[r] = None
        else:
            K[r], idx[r], sfs[r] = kernel_basis(dr)
        # T_r: coordinates map (valid on cycles): restrict Uinv to kernel cols
        if sfs[r] is None:
            T[r] = Mat.identity(ring, complex_.rank(r))
        else:
            ui = sfs[r].Uinv
            rows = [tuple(ui[i, j] for j in idx[r]) for i in range(ui.shape[0])]
            T[r] = Mat.from_rows(ring, rows) if rows else \
                Mat.zero(ring, 0, len(idx[r]))
    for r in degs:
        dr1 = complex_.d.get(r + 1)
        k = K[r].shape[0]
        if dr1 is None:
            if k != 0:
                raise ArithmeticError(f"complex not acyclic in degree {r}")
            S[r] = Mat.zero(ring, 0, 0)
            continue
        X = solve_left(dr1, K[r])
        if X is None:
            raise ArithmeticError(f"complex not acyclic in degree {r}")
        S[r] = X  # k_r x rank_{r+1}, S dr1 = K
    gamma = {}
    for r in degs:
        rank_r = complex_.rank(r)
        rank_r1 = complex_.rank(r + 1)
        if rank_r1 == 0:
            gamma[r] = Mat.zero(ring, rank_r, 0)
            continue
        dr = complex_.d.get(r)
        proj = Mat.identity(ring, rank_r)
        if dr is not None and dr.shape[1] > 0 and (r - 1) in S and S[r - 1].shape[0] > 0:
            proj = proj.sub(dr.mul(T[r - 1]).mul(S[r - 1]))
        gamma[r] = proj.mul(T[r]).mul(S[r])
    return gamma
