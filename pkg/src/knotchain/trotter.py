"""Trotter's explicit diagonal chain approximation on the 3-skeleton of a
presentation complex, the slant map, and the symmetric structures they
induce.

Tensors live in C tensor_Z C with the diagonal group action, represented
as integer combinations of (handle, group element) pairs on each side;
handles are (degree, index) pairs.  The slant map passes to the quotient
C^t tensor_A C by normalizing the left decoration to 1 and attaching
g^-1 h to the right.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .chains import ChainComplex, SymStructure
from .linalg import Mat
from .words import Word, FreeRingElem, fox_derivative


@dataclass
class Tensor:
    """Sum of c * (g . h^p_i) tensor (h . h^q_j) with integer c.

    Keys: ((p, i, g), (q, j, h)); g, h are Words at the free level or group
    elements of a group-algebra ring after specialization.
    """

    terms: dict = field(default_factory=dict)

    def copy(self):
        return Tensor(dict(self.terms))

    def add_term(self, left, right, c):
        if c == 0:
            return
        key = (left, right)
        v = self.terms.get(key, 0) + c
        if v == 0:
            self.terms.pop(key, None)
        else:
            self.terms[key] = v

    def __add__(self, o):
        out = self.copy()
        for (l, r), c in o.terms.items():
            out.add_term(l, r, c)
        return out

    def __sub__(self, o):
        out = self.copy()
        for (l, r), c in o.terms.items():
            out.add_term(l, r, -c)
        return out

    def scale(self, c):
        return Tensor({k: v * c for k, v in self.terms.items()}) if c else Tensor()

    def diag_act(self, u, mul):
        """Diagonal action of a group element."""
        out = Tensor()
        for ((p, i, g), (q, j, h)), c in self.terms.items():
            out.add_term((p, i, mul(u, g)), (q, j, mul(u, h)), c)
        return out

    def is_zero(self):
        return not self.terms

    def specialize(self, group_image, mul_target=None):
        """Map group decorations through a homomorphism."""
        out = Tensor()
        for ((p, i, g), (q, j, h)), c in self.terms.items():
            out.add_term((p, i, group_image(g)), (q, j, group_image(h)), c)
        return out


def tensor_of(left_chain, right_chain, mul):
    """Tensor of two dicts {(deg, idx): coeff-with-group-terms} given as
    lists of (deg, idx, group, int)."""
    out = Tensor()
    for (p, i, g, c1) in left_chain:
        for (q, j, h, c2) in right_chain:
            out.add_term((p, i, g), (q, j, h), c1 * c2)
    return out


def free_chain_terms(deg, ring_row):
    """Expand a list of FreeRingElem coefficients over handles of a degree
    into (deg, idx, word, int) terms."""
    out = []
    for idx, elt in enumerate(ring_row):
        for w, c in elt.terms:
            out.append((deg, idx, w, c))
    return out


def d_tensor(t: Tensor, cx: ChainComplex, expand, mul, conj):
    """Boundary of a tensor: x ox d(y) + (-1)^q d(x) ox y.

    expand(ring_elt) yields (group, coeff) terms of a matrix entry; mul is
    the group law, conj the group inverse composed into the left slot via
    (a x) ox y = x ox (conj(a) y) -- here we keep both decorations, so the
    left boundary acts on the left decoration directly.
    """
    out = Tensor()
    for ((p, i, g), (q, j, h)), c in t.terms.items():
        dq = cx.boundary(q)
        for l in range(dq.shape[1]):
            entry = dq[j, l]
            for (u, cu) in expand(entry):
                out.add_term((p, i, g), (q - 1, l, mul(h, u)), c * cu)
        dp = cx.boundary(p)
        sgn = 1 if q % 2 == 0 else -1
        for k in range(dp.shape[1]):
            entry = dp[i, k]
            for (u, cu) in expand(entry):
                out.add_term((p - 1, k, mul(g, u)), (q, j, h), c * cu * sgn)
    return out


def slant(t: Tensor, cx: ChainComplex, n, inv, monomial):
    """Duality maps C^{n-r} -> C_r from a degree-n tensor.

    Term (g h^p_i) ox (h h^q_j) contributes monomial(g^-1 h) to entry
    (i, j) of the component C^p -> C_q.
    """
    ring = cx.ring
    comps = {}
    for ((p, i, g), (q, j, h)), c in t.terms.items():
        if p + q != n:
            raise ValueError(f"tensor term of degree {p + q}, expected {n}")
        m = comps.setdefault(q, [[ring.zero() for _ in range(cx.rank(q))]
                                 for _ in range(cx.rank(p))])
        m[i][j] = ring.add(m[i][j], monomial(inv(g), h, c))
    phi = SymStructure(n, {})
    for r, rows in comps.items():
        phi.set(0, r, Mat.from_rows(ring, rows))
    return phi


# ---------------------------------------------------------------------------
# Trotter's formulas at the free level.


def alpha(w: Word, n_gens):
    """alpha(v) = sum_i (dv/dg_i) h^1_i as a list of Z[F] coefficients."""
    return [fox_derivative(w, g) for g in range(1, n_gens + 1)]


def _alpha_terms(coeffs, act=None):
    out = []
    for idx, elt in enumerate(coeffs):
        for w, c in elt.terms:
            out.append((1, idx, w if act is None else act * w, c))
    return out


def gamma(w: Word, n_gens):
    """The crossed homomorphism with gamma(1) = gamma(g_i) = 0 and
    gamma(uv) = gamma(u) + u gamma(v) + alpha(u) ox u alpha(v)."""
    out = Tensor()
    prefix = Word()
    alpha_prefix = [FreeRingElem.zero() for _ in range(n_gens)]
    mul = lambda a, b: a * b
    for g, e in w.syllables():
        s = Word.gen(g, e)
        if e > 0:
            gamma_s = Tensor()
            alpha_s = [FreeRingElem.one() if i == g - 1 else FreeRingElem.zero()
                       for i in range(n_gens)]
        else:
            gamma_s = Tensor()
            gamma_s.add_term((1, g - 1, s), (1, g - 1, s), 1)
            alpha_s = [-FreeRingElem.from_word(s) if i == g - 1
                       else FreeRingElem.zero() for i in range(n_gens)]
        # gamma(prefix * s)
        out = out + gamma_s.diag_act(prefix, mul)
        cross = tensor_of(_alpha_terms(alpha_prefix),
                          _alpha_terms(alpha_s, act=prefix), mul)
        out = out + cross
        alpha_prefix = [a + prefix * b for a, b in zip(alpha_prefix, alpha_s)]
        prefix = prefix * s
    return out


def trotter_delta0(presentation, identities, h3_index=None):
    """Delta_0 on all handles of the presentation 3-complex, at the free
    level.  Returns {handle: Tensor}; handles are (degree, index) with one
    3-handle per identity.

    identities: list of ordered factor lists [(w_k, relation_index, eps_k)].
    """
    n_gens = presentation.n_generators
    rels = presentation.relations
    mul = lambda a, b: a * b
    one = Word()
    out = {}
    out[(0, 0)] = Tensor({((0, 0, one), (0, 0, one)): 1})
    for i in range(n_gens):
        t = Tensor()
        t.add_term((0, 0, one), (1, i, one), 1)
        t.add_term((1, i, one), (0, 0, Word.gen(i + 1)), 1)
        out[(1, i)] = t
    gammas = {}
    for j, r in enumerate(rels):
        t = Tensor()
        t.add_term((0, 0, one), (2, j, one), 1)
        t.add_term((2, j, one), (0, 0, one), 1)
        gammas[j] = gamma(r, n_gens)
        out[(2, j)] = t - gammas[j]
    alphas_r = {j: alpha(r, n_gens) for j, r in enumerate(rels)}
    for m, factors in enumerate(identities):
        t = Tensor()
        t.add_term((0, 0, one), (3, m, one), 1)
        t.add_term((3, m, one), (0, 0, one), 1)
        fac = [(f.conjugator, f.relation, f.eps) for f in factors]
        for (w, rho, eps) in fac:
            aw = _alpha_terms(alpha(w, n_gens))
            h2 = [(2, rho, w, 1)]
            t = t + tensor_of(aw, h2, mul).scale(eps)
            t = t + tensor_of(h2, aw, mul).scale(eps)
        for (w, rho, eps) in fac:
            delta_k = (eps - 1) // 2
            if delta_k:
                inner = tensor_of([(2, rho, one, 1)],
                                  _alpha_terms(alphas_r[rho]), mul)
                t = t + inner.diag_act(w, mul).scale(delta_k)
        for li in range(len(fac)):
            for ki in range(li + 1, len(fac)):
                wl, rl, el = fac[li]
                wk, rk, ek = fac[ki]
                left = [(2, rl, wl, 1)]
                right = _alpha_terms(alphas_r[rk], act=wk)
                t = t - tensor_of(left, right, mul).scale(el * ek)
        out[(3, m)] = t
    return out
