"""Concordance obstructions: Alexander polynomials, Blanchfield pairings
by both routes (Seifert matrix and chain level), Fox-Milnor factorisation,
Levine-Tristram signatures at roots of unity in exact cyclotomic
arithmetic, the metabolic screen, and metaboliser search on desk-scale
modules.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import sympy

from .chains import ChainComplex, chain_homotopy_inverse, duality_map
from .diagram import Diagram
from .intervals import sign_of_real_cyclotomic
from .linalg import (HomologyAt, LAURENT_DOMAIN, Mat, _rank_q,
                     smith_normal_form, solve_left)
from .rings import (LAURENT_Q, LaurentPoly, QtModElem, laurent_mod_coords,
                    poly_divmod, poly_gcd, poly_mul, poly_add)


# ---------------------------------------------------------------------------
# Alexander polynomial.


def normalize_alexander(p: LaurentPoly):
    """Primitive integer coefficients, symmetric exponent range, value +1
    at t = 1."""
    if p.is_zero():
        return p
    v, dn = p.dense()
    from math import gcd
    dens = [c.denominator for c in dn if c != 0]
    nums = [abs(c.numerator) for c in dn if c != 0]
    lcm = 1
    for d in dens:
        lcm = lcm * d // gcd(lcm, d)
    g = 0
    for n in nums:
        g = gcd(g, n * lcm // 1)
    ints = [int(c * lcm) for c in dn]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    ints = [x // g for x in ints]
    deg = len(ints) - 1
    # center the exponent range
    shift = -(deg // 2) if deg % 2 == 0 else -(deg // 2)
    out = LaurentPoly.from_dict({shift + i: c for i, c in enumerate(ints)
                                 if c != 0})
    if out.evaluate(Fraction(1)) < 0:
        out = -out
    return out


def alexander_equal_up_to_units(p: LaurentPoly, q: LaurentPoly):
    pv, pd = p.dense()
    qv, qd = q.dense()
    if len(pd) != len(qd):
        return False
    if not pd:
        return True
    for sign in (1, -1):
        f = Fraction(sign) * Fraction(pd[-1], qd[-1]) if qd[-1] else None
        if f and all(Fraction(a) == f * Fraction(b) for a, b in zip(pd, qd)):
            return True
    return False


def alexander_polynomial_from_complex(YL: ChainComplex):
    """Generator of the order ideal of H_1 over Q[t,t^-1], normalized."""
    h1 = HomologyAt(YL, 1)
    if h1.free_rank:
        raise ValueError("H_1 has a free part; not a knot complex")
    out = LaurentPoly.const(Fraction(1))
    for o in h1.torsion:
        out = out * o
    return normalize_alexander(out)


def alexander_polynomial(d: Diagram):
    if d.is_unknot:
        return LaurentPoly.const(1)
    from .knotcx import (abelian_word_hom, build_knot_chain_data,
                         specialize_complex)
    data = build_knot_chain_data(d)
    Y = specialize_complex(data.complex_free, abelian_word_hom(data))
    return alexander_polynomial_from_complex(Y)


def alexander_from_seifert(V):
    """det(V - t V^T), normalized (twist-knot oracle and cross-check)."""
    n = len(V)
    if n == 0:
        return LaurentPoly.const(1)
    t = LAURENT_Q.t()
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            row.append(LAURENT_Q.sub(LaurentPoly.const(Fraction(V[i][j])),
                                     LaurentPoly.monomial(1, Fraction(V[j][i]))))
        rows.append(row)
    det = _laurent_det(Mat.from_rows(LAURENT_Q, rows))
    return normalize_alexander(det)


def _laurent_det(M: Mat):
    n = M.shape[0]
    if n == 0:
        return LaurentPoly.const(1)
    # fraction-free expansion is fine at desk scale
    if n == 1:
        return M[0, 0]
    det = LaurentPoly()
    for j in range(n):
        minor = Mat.from_rows(M.ring, [
            [M[i, k] for k in range(n) if k != j] for i in range(1, n)])
        term = M[0, j] * _laurent_det(minor)
        det = det + term if j % 2 == 0 else det - term
    return det


# ---------------------------------------------------------------------------
# Rational functions over Q[t] (for the Seifert-matrix Blanchfield route).


@dataclass(frozen=True)
class RatFun:
    num: tuple
    den: tuple  # monic, gcd(num, den) = 1

    @staticmethod
    def make(num, den):
        num = [Fraction(x) for x in num]
        den = [Fraction(x) for x in den]
        while num and num[-1] == 0:
            num.pop()
        while den and den[-1] == 0:
            den.pop()
        if not den:
            raise ZeroDivisionError
        if not num:
            return RatFun((), (Fraction(1),))
        g = poly_gcd(num, den)
        if len(g) > 1:
            num, _ = poly_divmod(num, g)
            den, _ = poly_divmod(den, g)
        lead = den[-1]
        num = tuple(x / lead for x in num)
        den = tuple(x / lead for x in den)
        return RatFun(num, den)

    @staticmethod
    def const(c):
        return RatFun.make([Fraction(c)], [Fraction(1)])

    @staticmethod
    def t():
        return RatFun.make([0, 1], [1])

    def __add__(self, o):
        return RatFun.make(
            poly_add(poly_mul(list(self.num), list(o.den)),
                     poly_mul(list(o.num), list(self.den))),
            poly_mul(list(self.den), list(o.den)))

    def __neg__(self):
        return RatFun(tuple(-x for x in self.num), self.den)

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, o):
        return RatFun.make(poly_mul(list(self.num), list(o.num)),
                           poly_mul(list(self.den), list(o.den)))

    def inverse(self):
        if not self.num:
            raise ZeroDivisionError
        return RatFun.make(list(self.den), list(self.num))

    def is_zero(self):
        return not self.num

    def to_qtmod(self):
        return QtModElem.from_fraction(LaurentPoly.from_dense(0, list(self.num)),
                                       LaurentPoly.from_dense(0, list(self.den)))


def _ratfun_inverse_matrix(rows):
    """Inverse of a square matrix of RatFun by Gauss-Jordan."""
    n = len(rows)
    a = [list(r) + [RatFun.const(1) if i == j else RatFun.const(0)
                    for j in range(n)] for i, r in enumerate(rows)]
    for col in range(n):
        piv = next((r for r in range(col, n) if not a[r][col].is_zero()), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix over Q(t)")
        a[col], a[piv] = a[piv], a[col]
        inv = a[col][col].inverse()
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and not a[r][col].is_zero():
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


# ---------------------------------------------------------------------------
# Blanchfield forms.


@dataclass
class BlanchfieldForm:
    """Matrix of Q(t)/Q[t,t^-1]-values on the power basis of the invariant
    factor decomposition H = + Q[t]/(f_i); t_action acts on row vectors."""

    dim: int
    orders: list                    # monic factors with nonzero constant
    t_action: Mat | None            # dim x dim over Q (as Fractions)
    values: list                    # dim x dim of QtModElem
    basis: str = ""

    def value(self, i, j):
        return self.values[i][j]

    def is_hermitian(self):
        for i in range(self.dim):
            for j in range(self.dim):
                if self.values[i][j] != self.values[j][i].conj():
                    return False
        return True

    def sesquilinear_residuals(self):
        """B(T e_i, e_j) - t^-1 B(e_i, e_j) and the second-slot version."""
        out = []
        if self.t_action is None:
            return out
        t = LaurentPoly.monomial(1, Fraction(1))
        tinv = LaurentPoly.monomial(-1, Fraction(1))
        for i in range(self.dim):
            for j in range(self.dim):
                lhs = QtModElem.zero()
                for a in range(self.dim):
                    coeff = self.t_action[i, a]
                    if coeff:
                        lhs = lhs + self.values[a][j].scale(
                            LaurentPoly.const(coeff))
                out.append(lhs - self.values[i][j].scale(tinv))
                rhs = QtModElem.zero()
                for a in range(self.dim):
                    coeff = self.t_action[j, a]
                    if coeff:
                        rhs = rhs + self.values[i][a].scale(
                            LaurentPoly.const(coeff))
                out.append(rhs - self.values[i][j].scale(t))
        return out

    def is_sesquilinear(self):
        return all(x.is_zero() for x in self.sesquilinear_residuals())

    def q_pairing_matrix(self):
        """The pairing as a Q-matrix: rows indexed by the Q-basis, columns
        by (Q-basis of the target coordinates)."""
        den = [Fraction(1)]
        for o in self.orders:
            _, d = o.dense()
            den = poly_mul(den, d)
        deg = len(den) - 1
        rows = []
        for i in range(self.dim):
            row = []
            for j in range(self.dim):
                v = self.values[i][j]
                # common-denominator numerator coordinates
                num = poly_mul(list(v.num), _poly_exact_div(den, list(v.den)))
                num = num + [Fraction(0)] * (deg - len(num))
                row.extend(num[:deg])
            rows.append(row)
        return rows

    def is_nonsingular(self):
        if self.dim == 0:
            return True
        rows = self.q_pairing_matrix()
        return _rank_q(rows) == self.dim


def _poly_exact_div(a, b):
    q, r = poly_divmod(a, b)
    if r:
        raise ArithmeticError("inexact polynomial division")
    return q


def module_from_square_presentation(P: Mat):
    """Invariant factors, class coordinates and t-action for coker(P) over
    Q[t,t^-1] (P square, full rank).  Returns (orders, T, gen_coords,
    coords_to_gens) where gen_coords[i] are the normal-form coordinates of
    the i-th standard generator."""
    sf = smith_normal_form(P)
    n = P.shape[1]
    factors = []
    for j in range(n):
        dj = sf.diagonal[j]
        if dj.is_zero():
            raise ValueError("presentation is not torsion")
        if LAURENT_DOMAIN.norm(dj) > 0:
            factors.append((j, dj))
    offsets, pos = {}, 0
    for j, f in factors:
        offsets[j] = pos
        pos += LAURENT_DOMAIN.norm(f)
    dim = pos

    def coords_of(vec_row):
        out = [Fraction(0)] * dim
        z = Mat.from_rows(LAURENT_Q, [vec_row]).mul(sf.V)
        for j, f in factors:
            deg = LAURENT_DOMAIN.norm(f)
            cs = laurent_mod_coords(z[0, j], f)
            out[offsets[j]:offsets[j] + deg] = cs
        return tuple(out)

    t_rows = []
    for j, f in factors:
        deg = LAURENT_DOMAIN.norm(f)
        for i in range(deg):
            cs = laurent_mod_coords(LaurentPoly.monomial(i + 1, Fraction(1)), f)
            row = [Fraction(0)] * dim
            row[offsets[j]:offsets[j] + deg] = cs
            t_rows.append(tuple(row))
    T = Mat.from_rows(None, t_rows) if dim else Mat.from_rows(None, [])
    gen_coords = [coords_of([LAURENT_Q.one() if k == i else LAURENT_Q.zero()
                             for k in range(n)]) for i in range(n)]
    # basis element (j, power i) as a generator combination: row j of Vinv
    basis_gens = []
    for j, f in factors:
        deg = LAURENT_DOMAIN.norm(f)
        for i in range(deg):
            basis_gens.append((j, i, [sf.Vinv[j, k] for k in range(n)]))
    orders = [f for _, f in factors]
    return orders, T, gen_coords, basis_gens


def blanchfield_from_seifert(V):
    """Bl(a, b) = a^T (1 - t)(tV - V^T)^-1 b mod Q[t,t^-1], transported to
    the power basis of H = coker(tV - V^T)."""
    n = len(V)
    if n == 0:
        return BlanchfieldForm(0, [], None, [])
    for i in range(n):
        if len(V[i]) != n:
            raise ValueError("Seifert matrix must be square")
    det_check = _int_det([[V[i][j] - V[j][i] for j in range(n)]
                          for i in range(n)])
    if det_check not in (1, -1):
        raise ValueError("V - V^T must be unimodular")
    A = [[RatFun.make([Fraction(-V[j][i]), Fraction(V[i][j])], [1])
          for j in range(n)] for i in range(n)]
    Ainv = _ratfun_inverse_matrix(A)
    one_minus_t = RatFun.make([1, -1], [1])
    gen_values = [[(one_minus_t * Ainv[i][j]).to_qtmod() for j in range(n)]
                  for i in range(n)]
    # presentation of H: rows of (tV - V^T)
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            row.append(LaurentPoly.from_dict(
                {1: Fraction(V[i][j]), 0: Fraction(-V[j][i])}))
        rows.append(row)
    P = Mat.from_rows(LAURENT_Q, rows)
    orders, T, gen_coords, basis_gens = module_from_square_presentation(P)
    dim = len(basis_gens)
    values = _transport_values(gen_values, basis_gens, orders)
    return BlanchfieldForm(dim, orders, T, values, basis="seifert")


def _transport_values(gen_values, basis_gens, orders):
    """Values on basis elements b = t^i sum_k c_k(t) gen_k, using
    sesquilinearity (conjugate-linear first slot)."""
    dim = len(basis_gens)
    out = [[QtModElem.zero() for _ in range(dim)] for _ in range(dim)]
    for a, (j1, i1, c1) in enumerate(basis_gens):
        for b, (j2, i2, c2) in enumerate(basis_gens):
            acc = QtModElem.zero()
            for k1, p1 in enumerate(c1):
                if p1.is_zero():
                    continue
                for k2, p2 in enumerate(c2):
                    if p2.is_zero():
                        continue
                    v = gen_values[k1][k2]
                    v = v.scale(p1.conj() * p2)
                    acc = acc + v
            shift = LaurentPoly.monomial(i2 - i1, Fraction(1))
            out[a][b] = acc.scale(shift)
    return out


def _int_det(M):
    n = len(M)
    if n == 0:
        return 1
    rows = [[Fraction(x) for x in r] for r in M]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if piv is None:
            return 0
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            det = -det
        det *= rows[col][col]
        inv = Fraction(1) / rows[col][col]
        rows[col] = [x * inv for x in rows[col]]
        for r in range(col + 1, n):
            f = rows[r][col]
            if f:
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
    return det


def blanchfield_chain_level(N: ChainComplex, theta):
    """Bl([x],[y]) = (1/s) conj(z(x)) with delta(z) = s theta'_0(y), from
    the zero-surgery complex over Q[t,t^-1]."""
    theta0 = duality_map(N, theta)
    if not theta0.is_chain_map():
        raise ValueError("theta_0 is not a chain map")
    theta_inv, k_src, k_tgt = chain_homotopy_inverse(theta0)
    h1 = HomologyAt(N, 1)
    if h1.free_rank:
        raise ValueError("H_1 has a free part; not a knot zero surgery")
    # representative cycles for the normal-form basis
    reps = []  # (order index j, power i, cycle row in N_1)
    coord_idx = [j for j, o in enumerate(h1.coord_orders)
                 if o is not None and LAURENT_DOMAIN.norm(o) > 0]
    orders = [h1.coord_orders[j] for j in coord_idx]
    VinvW = h1.sfW.Vinv
    cycles = []
    for j in coord_idx:
        y = [VinvW[j, k] for k in range(VinvW.shape[1])]
        cyc = Mat.from_rows(LAURENT_Q, [y]).mul(h1.K)
        cycles.append(cyc)
    s_ann = LaurentPoly.const(Fraction(1))
    for o in orders:
        s_ann = s_ann * o
    delta2 = N.delta(2)  # N^1 -> N^2
    dim = sum(LAURENT_DOMAIN.norm(o) for o in orders)
    basis = []
    for jj, o in enumerate(orders):
        for i in range(LAURENT_DOMAIN.norm(o)):
            basis.append((jj, i))
    t = LaurentPoly.monomial(1, Fraction(1))

    core = {}
    for jj, cyc_j in enumerate(cycles):
        target = cyc_j.mul(theta_inv.comp(1)).scale(s_ann)
        z = solve_left(delta2, target)
        if z is None:
            raise ArithmeticError("no z with delta z = s theta'(y); "
                                  "annihilator bound failed")
        for kk, cyc_k in enumerate(cycles):
            val = LaurentPoly()
            for a in range(cyc_k.shape[1]):
                val = val + cyc_k[0, a].conj() * z[0, a]
            core[(kk, jj)] = QtModElem.from_fraction(val, s_ann)
    values = [[QtModElem.zero()] * dim for _ in range(dim)]
    for a, (j1, i1) in enumerate(basis):
        for b, (j2, i2) in enumerate(basis):
            shift = LaurentPoly.monomial(i2 - i1, Fraction(1))
            values[a][b] = core[(j1, j2)].scale(shift)
    # t-action on the normal-form basis
    t_rows = []
    for jj, o in enumerate(orders):
        deg = LAURENT_DOMAIN.norm(o)
        off = sum(LAURENT_DOMAIN.norm(orders[x]) for x in range(jj))
        for i in range(deg):
            cs = laurent_mod_coords(LaurentPoly.monomial(i + 1, Fraction(1)), o)
            row = [Fraction(0)] * dim
            row[off:off + deg] = cs
            t_rows.append(tuple(row))
    T = Mat.from_rows(None, t_rows) if dim else Mat.from_rows(None, [])
    return BlanchfieldForm(dim, orders, T, values, basis="chain")


def blanchfield_route_match(b1: BlanchfieldForm, b2: BlanchfieldForm,
                            max_degree=2):
    """Identification test for two forms on cyclic modules: search for a
    unit u with b2 = u conj(u) b1 under the canonical module isomorphism.
    Falls back to invariant-level agreement (orders, metaboliser count)."""
    o1 = sorted(repr(o) for o in b1.orders)
    o2 = sorted(repr(o) for o in b2.orders)
    if o1 != o2:
        return {"orders_match": False, "identified": False}
    out = {"orders_match": True}
    if b1.dim == 0:
        out["identified"] = True
        return out
    if len(b1.orders) == 1:
        f = b1.orders[0]
        _, fd = f.dense()
        x = sympy.symbols("x")
        fpoly = sympy.Poly([sympy.Rational(c) for c in reversed(fd)], x)
        v1 = b1.values[0][0]
        v2 = b2.values[0][0]
        # ratio = v2 / v1 in Q[t]/(f); values are n/(den) with den | f-power
        r1 = _qtmod_mod_f(v1, f)
        r2 = _qtmod_mod_f(v2, f)
        if r1 is None or r2 is None or all(c == 0 for c in r1):
            out["identified"] = False
            return out
        ratio = _modp_div(r2, r1, fd)
        if ratio is None:
            out["identified"] = False
            return out
        # find u with u conj(u) = ratio mod f: small exact lattice search
        deg = len(fd) - 1
        tinv = _t_inverse_coeffs(fd)
        good = _search_unit(ratio, fd, tinv, deg)
        out["identified"] = good is not None
        if good is not None:
            out["unit"] = [str(c) for c in good]
        return out
    out["identified"] = False
    out["note"] = "non-cyclic module; invariant-level agreement only"
    return out


def _qtmod_mod_f(v: QtModElem, f: LaurentPoly):
    """Write v = p/f with p mod f (requires den | f)."""
    _, fd = f.dense()
    den = list(v.den)
    q, r = poly_divmod(fd, den)
    if r:
        return None
    p = poly_mul(list(v.num), q)
    _, p = poly_divmod(p, fd)
    return p + [Fraction(0)] * (len(fd) - 1 - len(p))


def _modp_div(a, b, f):
    """a / b mod f over Q, None if b not invertible."""
    from .rings import poly_xgcd
    g, u, _ = poly_xgcd(b, f)
    if len(g) != 1:
        return None
    inv = [x / g[0] for x in u]
    _, r = poly_divmod(poly_mul(a, inv), f)
    return r + [Fraction(0)] * (len(f) - 1 - len(r))


def _t_inverse_coeffs(fd):
    from .rings import poly_xgcd
    g, u, _ = poly_xgcd([Fraction(0), Fraction(1)], fd)
    return [x / g[0] for x in u]


def _search_unit(ratio, fd, tinv, deg, trials=(0, 1, -1, 2, -2,
                                               Fraction(1, 2),
                                               Fraction(-1, 2))):
    """u in Q[t]/(f) with u(t) u(t^-1) = ratio.

    When f splits over Q into distinct linear factors the norm equation is
    solved exactly by interpolation over the root pairs (r, 1/r);
    otherwise a small rational coefficient lattice is exhausted."""

    def ubar(u):
        out = [Fraction(0)]
        cur = [Fraction(1)]
        for c in u:
            if c:
                out = poly_add(out, [x * c for x in cur])
            cur = poly_mul(cur, tinv)
            _, cur = poly_divmod(cur, fd)
        _, out = poly_divmod(out, fd)
        return out

    want = list(ratio)
    while want and want[-1] == 0:
        want.pop()

    def check(u):
        prod = poly_mul(u, ubar(u))
        _, prod = poly_divmod(prod, fd)
        while prod and prod[-1] == 0:
            prod.pop()
        return prod == want

    u = _interpolated_unit(ratio, fd)
    if u is not None and any(u) and check(u):
        return u
    import itertools
    for combo in itertools.product(trials, repeat=deg):
        if all(c == 0 for c in combo):
            continue
        u = [Fraction(c) for c in combo]
        if check(u):
            return u
    return None


def _interpolated_unit(ratio, fd):
    """Solve u(t) u(1/t) = ratio mod f when f has distinct rational roots,
    by prescribing u on each reciprocal root pair and interpolating."""
    x = sympy.symbols("x")
    poly = sympy.Poly([sympy.Rational(c) for c in reversed(fd)], x)
    roots = sympy.roots(poly)
    if sum(roots.values()) != poly.degree() or any(m != 1 for m in
                                                   roots.values()):
        return None
    rs = []
    for r in roots:
        if not r.is_rational:
            return None
        rs.append(Fraction(str(r)))

    def ev(coeffs, at):
        out = Fraction(0)
        for c in reversed(coeffs):
            out = out * at + c
        return out

    values = {}
    used = set()
    for r in rs:
        if r in used:
            continue
        if r == 0:
            return None
        rinv = Fraction(1) / r
        c = ev(list(ratio), r)
        if rinv == r:
            # self-reciprocal root: need a rational square root
            num, den = c.numerator, c.denominator
            sn = math.isqrt(abs(num))
            sd = math.isqrt(den)
            if num < 0 or sn * sn != num or sd * sd != den:
                return None
            values[r] = Fraction(sn, sd)
            used.add(r)
        else:
            if rinv not in rs:
                return None
            values[r] = Fraction(1)
            values[rinv] = c
            used.add(r)
            used.add(rinv)
    # Lagrange interpolation
    pts = sorted(values.items())
    n = len(pts)
    coeffs = [Fraction(0)] * n
    for i, (xi, yi) in enumerate(pts):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, (xj, _) in enumerate(pts):
            if i == j:
                continue
            basis = poly_mul(basis, [-xj, Fraction(1)])
            denom *= (xi - xj)
        scale = yi / denom
        for k, b in enumerate(basis):
            coeffs[k] += scale * b
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _symbolic_u_ubar(us, fd, tinv):
    """Coefficients of u(t) u(t^-1) mod f, symbolically in the u_i."""
    deg = len(fd) - 1
    # powers of t and of t^-1 modulo f, as rational coefficient rows
    tpows, cur = [], [Fraction(1)] + [Fraction(0)] * (deg - 1)
    for _ in range(deg):
        tpows.append(cur[:])
        cur = poly_mul(cur, [Fraction(0), Fraction(1)])
        _, cur = poly_divmod(cur, fd)
        cur = cur + [Fraction(0)] * (deg - len(cur))
    tinvpows, cur = [], [Fraction(1)] + [Fraction(0)] * (deg - 1)
    for _ in range(deg):
        tinvpows.append(cur[:])
        cur = poly_mul(cur, tinv)
        _, cur = poly_divmod(cur, fd)
        cur = cur + [Fraction(0)] * (deg - len(cur))
    out = [sympy.Integer(0)] * deg
    for i in range(deg):
        for j in range(deg):
            prod = poly_mul(tpows[i], tinvpows[j])
            _, prod = poly_divmod(prod, fd)
            prod = prod + [Fraction(0)] * (deg - len(prod))
            for k in range(deg):
                if prod[k]:
                    out[k] += us[i] * us[j] * sympy.Rational(prod[k])
    return out


# ---------------------------------------------------------------------------
# Fox-Milnor.


def fox_milnor_test(p: LaurentPoly):
    """Decide p = f(t) f(t^-1) up to units +-t^k, via exact factorization
    over Q and Gauss's lemma for the integral refinement."""
    if p.is_zero():
        raise ValueError("zero polynomial")
    if abs(p.evaluate(Fraction(1))) != 1:
        raise ValueError("polynomial violates Delta(1) = +-1")
    v, dn = p.dense()
    x = sympy.symbols("x")
    poly = sympy.Poly([sympy.Rational(c) for c in reversed(dn)], x)
    if poly.degree() % 2 == 1:
        return {"passes": False, "reason": "odd degree"}
    factors = sympy.factor_list(poly.as_expr())
    const, facs = factors
    items = []
    for fac, mult in facs:
        items.append((sympy.Poly(fac, x), mult))

    def conj_class(q):
        # t^deg q(1/t), normalized monic-rational
        cs = q.all_coeffs()  # highest first
        rev = list(reversed(cs))
        qq = sympy.Poly(rev, x)
        return qq.monic()

    used = [0] * len(items)
    fpoly = sympy.Poly([1], x)
    for i, (q, m) in enumerate(items):
        qc = conj_class(q)
        if qc == q.monic():
            if (m - used[i]) % 2 != 0:
                return {"passes": False,
                        "reason": f"self-conjugate factor {q.as_expr()} "
                                  f"has odd multiplicity"}
            for _ in range((m - used[i]) // 2):
                fpoly = fpoly * q
            used[i] = m
        else:
            if used[i] == m:
                continue
            partner = None
            for jx, (q2, m2) in enumerate(items):
                if jx != i and q2.monic() == qc:
                    partner = jx
                    break
            if partner is None or items[partner][1] != m:
                return {"passes": False,
                        "reason": f"factor {q.as_expr()} lacks a conjugate "
                                  f"partner of equal multiplicity"}
            for _ in range(m - used[i]):
                fpoly = fpoly * q
            used[i] = m
            used[partner] = items[partner][1]
    # integral witness: clear to primitive integer coefficients
    fint = fpoly * sympy.Rational(sympy.lcm([sympy.fraction(sympy.Rational(c))[1]
                                             for c in fpoly.all_coeffs()]))
    fint = sympy.Poly([sympy.Integer(c) for c in fint.all_coeffs()], x)
    content = sympy.gcd_list(fint.all_coeffs())
    fint = sympy.Poly([c // content for c in fint.all_coeffs()], x)
    coeffs = [int(c) for c in reversed(fint.all_coeffs())]
    f_laurent = LaurentPoly.from_dict({i: c for i, c in enumerate(coeffs)})
    prod = f_laurent * f_laurent.conj()
    if not alexander_equal_up_to_units(normalize_alexander(prod),
                                       normalize_alexander(p)):
        return {"passes": False,
                "reason": "factor pairing found but unit matching failed"}
    return {"passes": True, "factor": f_laurent}


# ---------------------------------------------------------------------------
# Levine-Tristram signatures.


def cyclotomic_poly(m):
    x = sympy.symbols("x")
    return sympy.Poly(sympy.cyclotomic_poly(m, x), x)


class CyclotomicField:
    """Q[x]/(Phi_m): dense rational coefficient vectors."""

    def __init__(self, m):
        self.m = m
        cs = [Fraction(int(c)) for c in
              reversed(cyclotomic_poly(m).all_coeffs())]
        self.mod = cs
        self.deg = len(cs) - 1

    def reduce(self, coeffs):
        _, r = poly_divmod([Fraction(c) for c in coeffs], self.mod)
        return tuple(r + [Fraction(0)] * (self.deg - len(r)))

    def zero(self):
        return tuple(Fraction(0) for _ in range(self.deg))

    def const(self, c):
        out = [Fraction(0)] * self.deg
        if self.deg:
            out[0] = Fraction(c)
        return tuple(out)

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x for x in a)

    def sub(self, a, b):
        return tuple(x - y for x, y in zip(a, b))

    def mul(self, a, b):
        return self.reduce(poly_mul(list(a), list(b)))

    def scal(self, q, a):
        return tuple(Fraction(q) * x for x in a)

    def is_zero(self, a):
        return all(x == 0 for x in a)

    def omega(self, k=1):
        return self.reduce([Fraction(0)] * k + [Fraction(1)])

    def omega_inv(self):
        return self.omega(self.m - 1)


def omega_is_alexander_root(p: LaurentPoly, k, m):
    from math import gcd
    mm = m // gcd(k, m)
    _, pd = p.dense()
    phi = [Fraction(int(c)) for c in
           reversed(cyclotomic_poly(mm).all_coeffs())]
    _, r = poly_divmod([Fraction(c) for c in pd], phi)
    return not r


def levine_tristram(V, k, m):
    """Signature of (1 - w)V + (1 - conj(w))V^T at w = exp(2 pi i k/m),
    by exact cyclotomic arithmetic (charpoly over Q[x]/Phi, Descartes count
    for real-rooted polynomials, interval-certified coefficient signs)."""
    from math import gcd
    if k % m == 0:
        raise ValueError("omega = 1 is excluded")
    n = len(V)
    delta = alexander_from_seifert(V)
    if omega_is_alexander_root(delta, k, m):
        raise ValueError("omega is a root of the Alexander polynomial; "
                         "signature jump point")
    if n == 0:
        return 0
    mm = m // gcd(k, m)
    kk = k // gcd(k, m)
    K = CyclotomicField(mm)
    w = K.omega(kk % mm)
    wbar = K.omega((-kk) % mm)
    one = K.const(1)
    a = K.sub(one, w)
    b = K.sub(one, wbar)
    H = [[K.add(K.scal(V[i][j], a), K.scal(V[j][i], b)) for j in range(n)]
         for i in range(n)]
    coeffs = _charpoly_cyclotomic(K, H)  # monic, length n+1, lowest first
    # strip exact zero roots
    nz = 0
    while nz <= n and K.is_zero(coeffs[nz]):
        nz += 1
    reduced = coeffs[nz:]
    signs = []
    for c in reduced:
        if K.is_zero(c):
            signs.append(0)
        else:
            signs.append(sign_of_real_cyclotomic(list(c), kk, mm))
    pos = _descartes_positive(signs)
    neg = _descartes_positive([s * (-1) ** i for i, s in enumerate(signs)])
    return pos - neg


def _descartes_positive(signs):
    nz = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(nz, nz[1:]) if a * b < 0)


def _charpoly_cyclotomic(K, H):
    """Faddeev-LeVerrier: coefficients of det(lambda I - H), lowest first."""
    n = len(H)
    M = [[K.zero() for _ in range(n)] for _ in range(n)]
    cs = [K.const(1)]  # c_n = 1 (will reverse at the end)
    c = K.const(1)
    for kstep in range(1, n + 1):
        # M = H (M + c I)
        Mplus = [[K.add(M[i][j], c) if i == j else M[i][j]
                  for j in range(n)] for i in range(n)]
        newM = [[K.zero() for _ in range(n)] for _ in range(n)]
        for i in range(n):
            for j in range(n):
                acc = K.zero()
                for l in range(n):
                    if K.is_zero(H[i][l]) or K.is_zero(MplusRow := Mplus[l][j]):
                        continue
                    acc = K.add(acc, K.mul(H[i][l], MplusRow))
                newM[i][j] = acc
        M = newM
        tr = K.zero()
        for i in range(n):
            tr = K.add(tr, M[i][i])
        c = K.scal(Fraction(-1, kstep), tr)
        cs.append(c)
    # cs = [1, c_{n-1}, ..., c_0] highest-degree first
    return list(reversed(cs))


def signature_symmetric_int(M):
    """Signature of a symmetric integer/rational matrix: Descartes on the
    (real-rooted) characteristic polynomial, exactly."""
    n = len(M)
    if n == 0:
        return 0
    # rational charpoly by Faddeev over Q
    Mq = [[Fraction(x) for x in row] for row in M]
    cs = [Fraction(1)]
    Mk = [[Fraction(0)] * n for _ in range(n)]
    c = Fraction(1)
    for kstep in range(1, n + 1):
        Mplus = [[Mk[i][j] + (c if i == j else 0) for j in range(n)]
                 for i in range(n)]
        newM = [[sum(Mq[i][l] * Mplus[l][j] for l in range(n))
                 for j in range(n)] for i in range(n)]
        Mk = newM
        tr = sum(Mk[i][i] for i in range(n))
        c = Fraction(-1, kstep) * tr
        cs.append(c)
    coeffs = list(reversed(cs))  # lowest first
    nzidx = 0
    while nzidx <= n and coeffs[nzidx] == 0:
        nzidx += 1
    reduced = coeffs[nzidx:]
    signs = [0 if c == 0 else (1 if c > 0 else -1) for c in reduced]
    pos = _descartes_positive(signs)
    neg = _descartes_positive([s * (-1) ** i for i, s in enumerate(signs)])
    return pos - neg


# ---------------------------------------------------------------------------
# Screens and metabolisers.


DEFAULT_OMEGA_SAMPLES = [(1, 2), (1, 3), (1, 4), (1, 5), (2, 5), (1, 6),
                         (1, 7), (1, 8)]


def seifert_metabolic_screen(V, samples=None):
    """Necessary conditions only: sigma(V + V^T) = 0, Fox-Milnor on
    det(V - t V^T), Levine-Tristram = 0 at regular sample points."""
    samples = samples or DEFAULT_OMEGA_SAMPLES
    n = len(V)
    if n == 0:
        return {"verdict": "passes screen", "signature": 0,
                "fox_milnor": True, "signatures": {}}
    sym = [[V[i][j] + V[j][i] for j in range(n)] for i in range(n)]
    sig = signature_symmetric_int(sym)
    if sig != 0:
        return {"verdict": "obstructed", "first_failure": "signature",
                "signature": sig}
    delta = alexander_from_seifert(V)
    fm = fox_milnor_test(delta)
    if not fm["passes"]:
        return {"verdict": "obstructed", "first_failure": "fox_milnor",
                "signature": 0, "fox_milnor": fm}
    sigs = {}
    for (k, m) in samples:
        if omega_is_alexander_root(delta, k, m):
            continue
        s = levine_tristram(V, k, m)
        sigs[f"{k}/{m}"] = s
        if s != 0:
            return {"verdict": "obstructed",
                    "first_failure": f"levine_tristram@{k}/{m}",
                    "signature": 0, "signatures": sigs}
    return {"verdict": "passes screen", "signature": 0,
            "fox_milnor": True, "signatures": sigs}


def blanchfield_metaboliser_search(b: BlanchfieldForm, bound=6):
    """All metabolisers P = P-perp for cyclic modules (exhaustive via
    divisor submodules); for non-cyclic modules a structured family
    (products of divisor submodules and graphs between isomorphic cyclic
    factors) is searched and the result may be incomplete."""
    if b.dim > bound:
        raise ValueError(f"dimension {b.dim} above the search bound {bound}")
    if b.dim == 0:
        return {"metabolisers": [[]], "exhaustive": True}
    subs = _candidate_submodules(b)
    found = []
    seen = set()
    for gens in subs:
        span = _q_span(b, gens)
        key = tuple(sorted(map(tuple, span))) if span else ()
        if key in seen:
            continue
        seen.add(key)
        perp = _perp_space(b, span)
        if _same_space(span, perp):
            found.append([list(map(str, g)) for g in gens])
    return {"metabolisers": found,
            "exhaustive": len(b.orders) == 1}


def _all_monic_divisors(f: LaurentPoly):
    _, fd = f.dense()
    x = sympy.symbols("x")
    poly = sympy.Poly([sympy.Rational(c) for c in reversed(fd)], x)
    _, facs = sympy.factor_list(poly.as_expr())
    import itertools
    div = [sympy.Poly([1], x)]
    for fac, mult in facs:
        fp = sympy.Poly(fac, x)
        newdiv = []
        for d in div:
            for e in range(mult + 1):
                newdiv.append(d * fp ** e)
        div = newdiv
    out = []
    for d in div:
        cs = [Fraction(str(c)) for c in reversed(sympy.Poly(d, x).all_coeffs())]
        out.append(LaurentPoly.from_dense(0, cs))
    return out


def _candidate_submodules(b: BlanchfieldForm):
    """Generating sets (rows in the Q-power-basis coordinates)."""
    import itertools
    offsets, pos = [], 0
    degs = []
    for o in b.orders:
        offsets.append(pos)
        d = LAURENT_DOMAIN.norm(o)
        degs.append(d)
        pos += d

    def embed(j, coeffs):
        row = [Fraction(0)] * b.dim
        row[offsets[j]:offsets[j] + degs[j]] = coeffs
        return tuple(row)

    per_factor = []
    for j, o in enumerate(b.orders):
        gens = []
        for div in _all_monic_divisors(o):
            v, dd = div.dense()
            if len(dd) - 1 >= degs[j] and len(dd) - 1 > 0:
                gens.append(None)  # the full-order divisor = zero submodule
            cs = laurent_mod_coords(div, o)
            gens.append(embed(j, cs))
        per_factor.append([g for g in gens if g is not None])
    cands = []
    for combo in itertools.product(*per_factor):
        cands.append(list(combo))
    # graph submodules between pairs of factors with equal orders
    for j1 in range(len(b.orders)):
        for j2 in range(j1 + 1, len(b.orders)):
            if repr(b.orders[j1]) != repr(b.orders[j2]):
                continue
            for num, den_exp in [(1, 0), (-1, 0), (1, 1), (-1, 1), (1, -1),
                                 (-1, -1)]:
                u = LaurentPoly.monomial(den_exp, Fraction(num))
                cs = laurent_mod_coords(u, b.orders[j2])
                g = list(embed(j1, laurent_mod_coords(
                    LaurentPoly.const(Fraction(1)), b.orders[j1])))
                g2 = embed(j2, cs)
                gen = tuple(a + bb for a, bb in zip(g, g2))
                cands.append([gen])
    return cands


def _t_shift(b: BlanchfieldForm, row):
    return tuple(sum(Fraction(row[i]) * b.t_action[i, j]
                     for i in range(b.dim)) for j in range(b.dim))


def _q_span(b: BlanchfieldForm, gens):
    """Q-basis of the T-invariant span of the generators."""
    rows = []
    for g in gens:
        cur = tuple(Fraction(x) for x in g)
        for _ in range(b.dim + 1):
            rows.append(cur)
            cur = _t_shift(b, cur)
    return _row_reduce(rows)


def _row_reduce(rows):
    rows = [list(r) for r in rows]
    out = []
    pivots = {}
    for r in rows:
        r = r[:]
        for pcol, prow in pivots.items():
            if r[pcol] != 0:
                f = r[pcol]
                r = [x - f * y for x, y in zip(r, prow)]
        nz = next((i for i, x in enumerate(r) if x != 0), None)
        if nz is None:
            continue
        inv = Fraction(1) / r[nz]
        r = [x * inv for x in r]
        pivots[nz] = r
        out.append(tuple(r))
    return sorted(out)


def _pair_q_rows(b: BlanchfieldForm, v, w):
    acc = QtModElem.zero()
    for i in range(b.dim):
        if v[i] == 0:
            continue
        for j in range(b.dim):
            if w[j] == 0:
                continue
            acc = acc + b.values[i][j].scale(
                LaurentPoly.const(Fraction(v[i]) * Fraction(w[j])))
    return acc


def _perp_space(b: BlanchfieldForm, span):
    """{v : Bl(v, w) = 0 for all w in span} as a Q-subspace basis."""
    if not span:
        return _row_reduce([tuple(Fraction(1) if i == j else Fraction(0)
                                  for j in range(b.dim))
                            for i in range(b.dim)])
    conditions = []
    den = [Fraction(1)]
    for o in b.orders:
        _, d = o.dense()
        den = poly_mul(den, d)
    deg = len(den) - 1
    for w in span:
        cols = []
        for i in range(b.dim):
            ei = tuple(Fraction(1) if a == i else Fraction(0)
                       for a in range(b.dim))
            val = _pair_q_rows(b, ei, w)
            num = poly_mul(list(val.num), _poly_exact_div(den, list(val.den)))
            num = num + [Fraction(0)] * (deg - len(num))
            cols.append(num[:deg])
        conditions.append(cols)
    # v . cols = 0 for each condition coordinate
    rows = []
    for cols in conditions:
        for kcoord in range(deg):
            rows.append([cols[i][kcoord] for i in range(b.dim)])
    # kernel over Q
    return _q_kernel(rows, b.dim)


def _q_kernel(rows, n):
    m = len(rows)
    a = [list(map(Fraction, r)) for r in rows]
    pivots = []
    rpos = 0
    for c in range(n):
        piv = next((r for r in range(rpos, m) if a[r][c] != 0), None)
        if piv is None:
            continue
        a[rpos], a[piv] = a[piv], a[rpos]
        inv = Fraction(1) / a[rpos][c]
        a[rpos] = [x * inv for x in a[rpos]]
        for r in range(m):
            if r != rpos and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[rpos])]
        pivots.append(c)
        rpos += 1
        if rpos == m:
            break
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for ri, pc in enumerate(pivots):
            v[pc] = -a[ri][fc]
        basis.append(tuple(v))
    return _row_reduce(basis)


def _same_space(s1, s2):
    return _row_reduce(list(s1) + list(s2)) == _row_reduce(list(s1)) == \
        _row_reduce(list(s2))


# ---------------------------------------------------------------------------
# The representation into Gamma = Z x| Q(t)/Q[t,t^-1].


def gamma_representation(bl: BlanchfieldForm, p_coords):
    """rho: (n, h) -> (n, Bl(p, h)); Gamma-law (n,a)(m,b) = (n+m, a+t^n b)."""
    p = tuple(Fraction(x) for x in p_coords)
    if len(p) != bl.dim:
        raise ValueError("p has the wrong dimension")

    def rho(elem):
        n, v = elem.n, elem.v
        val = _pair_q_rows(bl, p, tuple(Fraction(x) for x in v))
        return (n, val)

    return rho


def gamma_mul(x, y):
    n, a = x
    m, b = y
    return (n + m, a + b.scale(LaurentPoly.monomial(n, Fraction(1))))
