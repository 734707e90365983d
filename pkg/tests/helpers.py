"""Shared test machinery: random chain complexes over Q, random chain maps
and valid surgery data, built by exact linear algebra so every instance
genuinely satisfies its defining equations."""

import random
from fractions import Fraction

from knotchain.chains import (ChainComplex, ChainMap, SymStructure,
                              is_connected, symmetric_complex_residuals,
                              symmetric_pair_residuals, thom_complex)
from knotchain.linalg import Mat
from knotchain.rings import QQ


def random_complex(rng, max_rank=3, degrees=(0, 3)):
    """Random bounded free complex over Q with exact d^2 = 0, produced by
    conjugating a direct sum of elementary complexes by random unimodular
    changes of basis."""
    lo, hi = degrees
    ranks = {r: 0 for r in range(lo, hi + 1)}
    pieces = []  # (degree r, elementary [r -> r-1] or single)
    for r in range(lo, hi + 1):
        for _ in range(rng.randint(0, max_rank)):
            if r > lo and rng.random() < 0.6:
                pieces.append((r, "pair"))
                ranks[r] += 1
                ranks[r - 1] += 1
            else:
                pieces.append((r, "single"))
                ranks[r] += 1
    d = {}
    # assemble elementary boundaries in the standard basis
    slots = {r: [] for r in ranks}  # (piece id, role)
    for pid, (r, kind) in enumerate(pieces):
        slots[r].append((pid, "top"))
        if kind == "pair":
            slots[r - 1].append((pid, "bottom"))
    pos = {}
    for r, lst in slots.items():
        for i, key in enumerate(lst):
            pos[key] = (r, i)
    for r in range(lo + 1, hi + 1):
        m = [[QQ.zero() for _ in range(ranks.get(r - 1, 0))]
             for _ in range(ranks.get(r, 0))]
        for pid, (rr, kind) in enumerate(pieces):
            if kind == "pair" and rr == r:
                i = pos[(pid, "top")][1]
                j = pos[(pid, "bottom")][1]
                m[i][j] = Fraction(1)
        d[r] = Mat.from_rows(QQ, m)
    cx = ChainComplex(QQ, {r: n for r, n in ranks.items() if n},
                      {r: m for r, m in d.items()
                       if m.shape[0] or m.shape[1]})
    # conjugate by random unimodular matrices
    change = {}
    for r in cx.degrees():
        n = cx.rank(r)
        u = [[Fraction(1 if i == j else 0) for j in range(n)]
             for i in range(n)]
        for _ in range(2 * n):
            i, j = rng.randrange(n), rng.randrange(n)
            if i != j:
                c = Fraction(rng.randint(-2, 2))
                for k in range(n):
                    u[i][k] += c * u[j][k]
        change[r] = Mat.from_rows(QQ, u)
    inv = {r: _q_inverse(change[r]) for r in change}
    newd = {}
    for r, m in cx.d.items():
        a = change.get(r, Mat.identity(QQ, cx.rank(r)))
        binv = inv.get(r - 1, Mat.identity(QQ, cx.rank(r - 1)))
        newd[r] = a.mul(m).mul(binv)
    return ChainComplex(QQ, dict(cx.ranks), newd)


def _q_inverse(m: Mat):
    n = m.shape[0]
    a = [list(r) + [Fraction(1 if i == j else 0) for j in range(n)]
         for i, r in enumerate(m.rows)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        f = Fraction(1) / a[col][col]
        a[col] = [x * f for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                g = a[r][col]
                a[r] = [x - g * y for x, y in zip(a[r], a[col])]
    return Mat.from_rows(QQ, [tuple(row[n:]) for row in a])


def random_symmetric_complex(rng, n_dim=3, max_rank=2):
    """(C, phi) with phi_0 strictly symmetric (so phi_s = 0 for s >= 1 is a
    complete structure) satisfying the Q-group equations exactly: solves
    the linear equations for phi_0 and picks a random solution."""
    for _ in range(60):
        cx = random_complex(rng, max_rank=max_rank, degrees=(0, n_dim))
        phi0 = _solve_phi0(rng, cx, n_dim)
        if phi0 is None:
            continue
        phi = SymStructure(n_dim, {})
        for r, m in phi0.items():
            phi.set(0, r, m)
        phi.levels = [0, 1]
        res = symmetric_complex_residuals(cx, phi)
        if not all(m.is_zero() for m in res.values()):
            continue
        if not is_connected(cx, phi):
            continue
        return cx, phi
    raise RuntimeError("could not generate a random symmetric complex")


def _solve_phi0(rng, cx, n_dim):
    """Random solution of d phi + (-1)^r phi delta = 0 with T phi = phi."""
    unknown = []
    shapes = {}
    for r in range(cx.bottom(), cx.top() + 1):
        src, tgt = n_dim - r, r
        if cx.rank(src) and cx.rank(tgt):
            shapes[r] = (cx.rank(src), cx.rank(tgt))
            for i in range(cx.rank(src)):
                for j in range(cx.rank(tgt)):
                    unknown.append((r, i, j))
    if not unknown:
        return {}
    idx = {u: k for k, u in enumerate(unknown)}
    rows = []

    def add_equation(coeffs):
        row = [Fraction(0)] * len(unknown)
        for key, c in coeffs.items():
            row[idx[key]] += c
        rows.append(row)

    # chain condition: (phi[r+1] d_{r+1})_{ij} + (-1)^r (delta phi[r])_{ij} = 0
    for r in range(cx.bottom() - 1, cx.top() + 1):
        src = n_dim - r - 1
        if not (cx.rank(src) and cx.rank(r) >= 0):
            continue
        for i in range(cx.rank(src)):
            for j in range(cx.rank(r)):
                coeffs = {}
                if (r + 1) in shapes:
                    dmat = cx.boundary(r + 1)
                    for k in range(cx.rank(r + 1)):
                        if dmat[k, j] != 0:
                            coeffs[(r + 1, i, k)] = \
                                coeffs.get((r + 1, i, k), 0) + dmat[k, j]
                if r in shapes:
                    delta = cx.delta(n_dim - r)  # C^{n-r-1} -> C^{n-r}
                    sgn = 1 if r % 2 == 0 else -1
                    for k in range(cx.rank(n_dim - r)):
                        if delta[i, k] != 0:
                            coeffs[(r, k, j)] = coeffs.get((r, k, j), 0) + \
                                sgn * delta[i, k]
                if coeffs:
                    add_equation(coeffs)
    # symmetry: phi[r][i][j] = (-1)^{(n-r) r} phi[n-r][j][i]
    for r in shapes:
        src = n_dim - r
        if src in shapes:
            sgn = (-1) ** (src * r)
            for i in range(shapes[r][0]):
                for j in range(shapes[r][1]):
                    add_equation({(r, i, j): Fraction(1),
                                  (src, j, i): Fraction(-sgn)})
    basis = _nullspace(rows, len(unknown))
    if not basis:
        return None
    combo = [Fraction(0)] * len(unknown)
    for v in basis:
        c = Fraction(rng.randint(-2, 2))
        combo = [a + c * b for a, b in zip(combo, v)]
    out = {}
    nonzero = False
    for (r, i, j), k in idx.items():
        out.setdefault(r, [[QQ.zero()] * shapes[r][1]
                           for _ in range(shapes[r][0])])
        out[r][i][j] = combo[k]
        nonzero = nonzero or combo[k] != 0
    if not nonzero:
        return None
    return {r: Mat.from_rows(QQ, m) for r, m in out.items()}


def _nullspace(rows, n):
    if not rows:
        return [[Fraction(1 if i == j else 0) for j in range(n)]
                for i in range(n)]
    a = [list(map(Fraction, r)) for r in rows]
    m = len(a)
    pivots = []
    rpos = 0
    for c in range(n):
        piv = next((r for r in range(rpos, m) if a[r][c] != 0), None)
        if piv is None:
            continue
        a[rpos], a[piv] = a[piv], a[rpos]
        f = Fraction(1) / a[rpos][c]
        a[rpos] = [x * f for x in a[rpos]]
        for r in range(m):
            if r != rpos and a[r][c] != 0:
                g = a[r][c]
                a[r] = [x - g * y for x, y in zip(a[r], a[rpos])]
        pivots.append(c)
        rpos += 1
        if rpos == m:
            break
    free = [c for c in range(n) if c not in pivots]
    out = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for ri, pc in enumerate(pivots):
            if ri < len(a):
                v[pc] = -a[ri][fc]
        out.append(v)
    return out


def random_surgery_data(rng, cx, phi, n_dim):
    """(f: C -> D, dphi = 0) with D elementary in one degree, f a chain map
    and f phi_0 f* = 0 (valid symmetric pair data for surgery)."""
    for _ in range(200):
        if cx.bottom() + 1 > cx.top():
            break
        r = rng.randint(cx.bottom() + 1, cx.top())
        if cx.rank(r) == 0:
            continue
        D = ChainComplex(QQ, {r: 1}, {})
        # f_r must satisfy d_{r+1}-compat: rows of d_{r+1} are killed
        cands = []
        dmat = cx.boundary(r + 1)
        for _ in range(40):
            v = [Fraction(rng.randint(-2, 2)) for _ in range(cx.rank(r))]
            col = Mat.from_rows(QQ, [[x] for x in v])
            if dmat.shape[0] and not dmat.mul(col).is_zero():
                continue
            if all(x == 0 for x in v):
                continue
            f = ChainMap(cx, D, {r: col})
            dphi = SymStructure(n_dim + 1, {}, levels=[0, 1])
            res = symmetric_pair_residuals(f, dphi, phi)
            if not all(m.is_zero() for m in res.values()):
                continue
            th, thphi = thom_complex(f, dphi, phi)
            if not is_connected(th, thphi):
                continue
            return f, dphi
        break
    return None, None
