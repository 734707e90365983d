"""From a diagram to presentations and handle chain complexes.

Builds, at the level of the free group ring, the chain complex of the
universal cover (degrees 1..c..c..1), the boundary-included complex
(1, c+2, c+3, 2) with the torus sub-complex and the identities s_o and
s_del, and the zero-surgery complex (1, c, c+1, 2); all of these are then
specialized to augmentation, abelian or metabelian coefficients through a
single ring homomorphism applied entrywise.
"""

from __future__ import annotations

from dataclasses import dataclass

from .chains import ChainComplex
from .diagram import Diagram, DiagramError, connecting_paths, quad_decomposition
from .linalg import Mat
from .rings import (FREE, QQ, LAURENT_Q, LaurentPoly, MetabelianRing,
                    WordHom, AlexanderData)
from .words import (Word, FreeRingElem, Presentation, IdentityFactor,
                    fox_derivative)


def wirtinger_relation(sign, labels):
    i1, i2, i3 = labels
    if sign == 1:
        return (Word.gen(i2, -1) * Word.gen(i1, -1) * Word.gen(i3)
                * Word.gen(i1))
    return Word.gen(i2, -1) * Word.gen(i1) * Word.gen(i3) * Word.gen(i1, -1)


def wirtinger_presentation(d: Diagram):
    """c generators, one conjugation relation per crossing (g_{i_2} first)."""
    if d.is_unknot:
        return Presentation(1, [], names={1: "g1"})
    rels = [wirtinger_relation(x.sign, x.labels) for x in d.crossings]
    return Presentation(d.n, rels)


def longitude_word(d: Diagram):
    """l = g_1^{-Wr} g_{k_1}^{eps_k} ... g_{(k+c-1)_1}^{eps_{k+c-1}},
    starting at the first crossing passed over after going under crossing 1."""
    if d.is_unknot:
        return Word()
    c = d.n
    k = _first_over_after_under_one(d)
    w = Word.gen(1) ** (-d.writhe())
    for t in range(c):
        j = (k - 1 + t) % c + 1
        x = d.crossings[j - 1]
        w = w * Word.gen(x.labels[0], x.sign)
    return w


def _first_over_after_under_one(d: Diagram):
    m = 2 * d.n
    pos_under1 = None
    # reconstruct crossing numbering positions from events
    number = {}
    for kind, idx in d.events:
        if kind == "O" and idx not in number:
            number[idx] = len(number) + 1
    for arc0, (kind, idx) in enumerate(d.events):
        if kind == "U" and number[idx] == 1:
            pos_under1 = arc0
            break
    for t in range(1, m + 1):
        kind, idx = d.events[(pos_under1 + t) % m]
        if kind == "O":
            return number[idx]
    raise DiagramError("no over-pass found after the under-pass of crossing 1")


def u_words(d: Diagram):
    """u_{k+i} = g_1^{1-Wr} g_{k_1}^{eps_k} ... g_{(k+i)_1}^{eps_{k+i}},
    returned as {crossing j: u_j}."""
    if d.is_unknot:
        return {}
    c = d.n
    k = _first_over_after_under_one(d)
    out = {}
    w = Word.gen(1) ** (1 - d.writhe())
    for t in range(c):
        j = (k - 1 + t) % c + 1
        x = d.crossings[j - 1]
        w = w * Word.gen(x.labels[0], x.sign)
        out[j] = w
    return out


def split_longitude(d: Diagram):
    """(q, l_a, l_b): split l where the knot passes under h^1_q, choosing
    the p in 0..c-2 giving the smallest valid q (q != 1)."""
    c = d.n
    k = _first_over_after_under_one(d)
    best = None
    for p in range(0, c - 1):
        j = (k - 1 + p) % c + 1
        q = d.crossings[j - 1].labels[1]  # g_{(k+p)_2}
        if q == 1:
            continue
        if best is None or q < best[1]:
            best = (p, q)
    if best is None:
        raise DiagramError("no valid splitting point for the longitude")
    p, q = best
    la = Word.gen(1) ** (-d.writhe())
    for t in range(p + 1):
        j = (k - 1 + t) % c + 1
        x = d.crossings[j - 1]
        la = la * Word.gen(x.labels[0], x.sign)
    lb = Word()
    for t in range(p + 1, c):
        j = (k - 1 + t) % c + 1
        x = d.crossings[j - 1]
        lb = lb * Word.gen(x.labels[0], x.sign)
    return q, la, lb


@dataclass
class KnotChainData:
    """Everything the chain-level constructions downstream consume."""

    diagram: Diagram
    presentation: Presentation          # boundary-included, gens c+2
    wirtinger: Presentation             # gens c
    mu: int
    lam: int
    longitude: Word
    u: dict
    w: dict
    s_o: list
    s_del: list
    q: int
    l_a: Word
    l_b: Word
    complex_free: ChainComplex          # boundary-included, over Z[F]
    unicover_free: ChainComplex
    surgery_free: ChainComplex | None
    surgery_presentation: Presentation | None
    s_s: list | None
    base_region: int | None = None


def _fox_row(rel, n_gens):
    return [fox_derivative(rel, g) for g in range(1, n_gens + 1)]


def _free_complex(ranks, d_entries):
    d = {r: Mat.from_rows(FREE, rows) for r, rows in d_entries.items()}
    return ChainComplex(FREE, ranks, d)


def boundary_presentation(d: Diagram, base_region=None):
    """The boundary-included presentation (generators g_1..g_c, mu,
    lambda; relations r_1..r_c, r_mu, r_lambda, r_del) with the verified
    identities s_o and s_del attached."""
    if d.is_unknot:
        mu, lam = Word.gen(1), Word.gen(2)
        return Presentation(
            2, [lam * mu * lam.inverse() * mu.inverse(), lam],
            names={1: "mu", 2: "lambda"})
    return build_knot_chain_data(d, base_region=base_region).presentation


def build_knot_chain_data(d: Diagram, base_region=None):
    if d.is_unknot:
        raise DiagramError("use the hard-coded unknot models")
    c = d.n
    wirt = wirtinger_presentation(d)
    q_dec = quad_decomposition(d)
    order, words, factors = connecting_paths(d, q_dec, base_region=base_region)
    so_w = [IdentityFactor(w, i - 1, 1) for w, i in factors]
    if not wirt.identity_check(so_w):
        raise DiagramError("s_o failed to verify; conventions bug")
    wirt.identities = [so_w]

    mu, lam = c + 1, c + 2
    l = longitude_word(d)
    u = u_words(d)
    k = _first_over_after_under_one(d)
    rels = list(wirt.relations)
    r_mu = Word.gen(1) * Word.gen(mu, -1)
    r_lam = l * Word.gen(lam, -1)
    r_del = (Word.gen(lam) * Word.gen(mu) * Word.gen(lam, -1)
             * Word.gen(mu, -1))
    rels += [r_mu, r_lam, r_del]
    pres = Presentation(c + 2, rels,
                        names={mu: "mu", lam: "lambda"})
    i_mu, i_lam, i_del = c, c + 1, c + 2
    s_o = [IdentityFactor(f.conjugator, f.relation, 1) for f in so_w]
    s_del = [IdentityFactor(Word(), i_del, -1),
             IdentityFactor(Word.gen(lam), i_mu, -1),
             IdentityFactor(Word(), i_lam, -1)]
    for t in range(c):
        j = (k - 1 + t) % c + 1
        s_del.append(IdentityFactor(u[j], j - 1, -1))
    s_del += [IdentityFactor(Word(), i_mu, 1),
              IdentityFactor(Word.gen(mu), i_lam, 1)]
    if not pres.identity_check(s_o):
        raise DiagramError("s_o failed over the extended presentation")
    if not pres.identity_check(s_del):
        raise DiagramError("s_del failed to verify; conventions bug")
    pres.identities = [s_o, s_del]

    one = FreeRingElem.one()
    d1 = [[FreeRingElem.from_word(Word.gen(g)) - one]
          for g in range(1, c + 3)]
    d2 = [_fox_row(r, c + 2) for r in rels]
    d3 = [pres.identity_boundary(s_o), pres.identity_boundary(s_del)]
    full = _free_complex({0: 1, 1: c + 2, 2: c + 3, 3: 2},
                         {1: d1, 2: d2, 3: d3})

    d1u = [[FreeRingElem.from_word(Word.gen(g)) - one] for g in range(1, c + 1)]
    d2u = [_fox_row(r, c) for r in wirt.relations]
    d3u = [wirt.identity_boundary(so_w)]
    uni = _free_complex({0: 1, 1: c, 2: c, 3: 1},
                        {1: d1u, 2: d2u, 3: d3u})

    # zero surgery: add a 2-handle along l and a 3-handle with identity
    # s_s = rho_s^-1 (prod u_j rho_j^-1 u_j^-1) g_1 rho_s g_1^-1
    srels = list(wirt.relations) + [l]
    spres = Presentation(c, srels)
    s_s = [IdentityFactor(Word(), c, -1)]
    for t in range(c):
        j = (k - 1 + t) % c + 1
        s_s.append(IdentityFactor(u[j], j - 1, -1))
    s_s.append(IdentityFactor(Word.gen(1), c, 1))
    if not spres.identity_check(s_s):
        raise DiagramError("surgery identity s_s failed to verify")
    spres.identities = [so_w, s_s]
    d2s = [_fox_row(r, c) for r in srels]
    d3s = [spres.identity_boundary(so_w), spres.identity_boundary(s_s)]
    surg = _free_complex({0: 1, 1: c, 2: c + 1, 3: 2},
                         {1: d1u, 2: d2s, 3: d3s})

    qq, la, lb = split_longitude(d)
    return KnotChainData(d, pres, wirt, mu, lam, l, u, words, s_o, s_del,
                         qq, la, lb, full, uni, surg, spres, s_s,
                         base_region=d.base_region_used)


# ---------------------------------------------------------------------------
# Specializations.


def augmentation_word_hom(data: KnotChainData):
    return WordHom(QQ, {g: 0 for g in range(1, data.presentation.n_generators + 1)})


def abelian_word_hom(data: KnotChainData):
    imgs = {g: 1 for g in range(1, data.wirtinger.n_generators + 1)}
    imgs[data.mu] = 1
    imgs[data.lam] = 0  # the longitude is null-homologous
    return WordHom(LAURENT_Q, imgs)


def metabelian_word_hom(data: KnotChainData, ring: MetabelianRing):
    grp = ring.group
    alex = ring.alex
    imgs = {}
    for g in range(1, data.wirtinger.n_generators + 1):
        imgs[g] = grp.elem(1, alex.meridian_classes[g])
    tmp = WordHom(ring, imgs)
    imgs = dict(imgs)
    imgs[data.mu] = grp.elem(1, alex.meridian_classes[1])
    imgs[data.lam] = tmp.group_image(data.longitude)
    return WordHom(ring, imgs)


def specialize_complex(cx_free: ChainComplex, hom: WordHom):
    return cx_free.change_rings(hom.ring_image, hom.ring)


# ---------------------------------------------------------------------------
# The rational Alexander module from the Wirtinger presentation.


def build_alexander_data(wirt: Presentation):
    """Invariant factors, t-action and meridian classes of H_1(X; Q[Z]).

    Presentation matrix: the abelianized Fox Jacobian with the g_1 column
    deleted, presenting H on generators a_i = [g_i g_1^-1], i = 2..c.
    """
    from fractions import Fraction
    from .linalg import smith_normal_form
    c = wirt.n_generators
    if c <= 1 or not wirt.relations:
        return AlexanderData(0, (), {g: () for g in range(1, c + 1)}, ())
    rows = []
    for r in wirt.relations:
        row = []
        for g in range(2, c + 1):
            fox = fox_derivative(r, g)
            dd = {}
            for w, coeff in fox.terms:
                e = w.exponent_sum()
                dd[e] = dd.get(e, 0) + coeff
            row.append(LaurentPoly.from_dict(
                {e: Fraction(v) for e, v in dd.items()}))
        rows.append(row)
    P = Mat.from_rows(LAURENT_Q, rows)
    sf = smith_normal_form(P)
    n_cols = c - 1
    factors = []  # (column index, monic factor with nonzero constant term)
    for j in range(n_cols):
        dj = sf.diagonal[j] if j < len(sf.diagonal) else LaurentPoly()
        if dj.is_zero():
            raise DiagramError("Alexander presentation has a free part; "
                               "not a knot pipeline input")
        if dj.degree() - dj.valuation() > 0:
            factors.append((j, dj))
    dim = sum(f.degree() - f.valuation() for _, f in factors)
    # basis: per factor f of degree m, the images of 1, t, .., t^{m-1}
    offsets, basis_pos = {}, 0
    for j, f in factors:
        offsets[j] = basis_pos
        basis_pos += f.degree() - f.valuation()

    from .rings import laurent_mod_coords

    def reduce_coord(j, poly: LaurentPoly):
        """Coordinates of poly mod factor j in the power basis."""
        return laurent_mod_coords(poly, dict(factors)[j])

    t_rows = []
    for j, f in factors:
        v, dn = f.dense()
        deg = len(dn) - 1
        for i in range(deg):
            ti = LaurentPoly.monomial(i + 1, Fraction(1))
            coords = reduce_coord(j, ti)
            row = [Fraction(0)] * dim
            row[offsets[j]:offsets[j] + deg] = coords
            t_rows.append(tuple(row))
    T = tuple(t_rows) if dim else ()

    meridians = {1: tuple(Fraction(0) for _ in range(dim))}
    for g in range(2, c + 1):
        vrow = sf.V.rows[g - 2]
        vec = [Fraction(0)] * dim
        for j, f in factors:
            vj, dnj = f.dense()
            deg = len(dnj) - 1
            coords = reduce_coord(j, vrow[j])
            vec[offsets[j]:offsets[j] + deg] = coords
        meridians[g] = tuple(vec)
    orders = tuple(f for _, f in factors)
    return AlexanderData(dim, T, meridians, orders)
