"""Randomized desk-scale audits of algebraic surgery and the union
construction over Q: outputs validate, the Q-group equations hold exactly,
and surgery preserves the boundary's homology (brute-force oracle)."""

import os
import random
import sys

sys.path.insert(0, os.path.dirname(__file__))

from helpers import random_surgery_data, random_symmetric_complex
from knotchain.chains import (ChainComplex, ChainMap, Cobordism,
                              SymStructure, algebraic_surgery,
                              boundary_complex, symmetric_complex_residuals,
                              symmetric_pair_residuals, union)
from knotchain.linalg import Mat, betti_numbers
from knotchain.rings import QQ


def collect_surgery_instances(seed, want):
    rng = random.Random(seed)
    out = []
    trials = 0
    while len(out) < want and trials < 40 * want:
        trials += 1
        try:
            cx, phi = random_symmetric_complex(rng, n_dim=3, max_rank=2)
        except RuntimeError:
            continue
        f, dphi = random_surgery_data(rng, cx, phi, 3)
        if f is None:
            continue
        out.append((cx, phi, f, dphi))
    return out


def test_fifty_random_surgeries():
    instances = collect_surgery_instances(20260810, 50)
    assert len(instances) == 50
    for i, (cx, phi, f, dphi) in enumerate(instances):
        out_c, out_phi = algebraic_surgery(cx, phi, f, dphi)
        assert out_c.validate(), i
        res = symmetric_complex_residuals(out_c, out_phi)
        assert all(m.is_zero() for m in res.values()), i
        b1, _ = boundary_complex(cx, phi)
        b2, _ = boundary_complex(out_c, out_phi)
        bb1 = {r: b for r, b in betti_numbers(b1).items() if b}
        bb2 = {r: b for r, b in betti_numbers(b2).items() if b}
        assert bb1 == bb2, (i, bb1, bb2)


def test_union_of_pair_with_itself_is_closed():
    # union of a null-cobordism (f: C -> D, (dphi, phi)) with its flipped
    # twin along the full boundary: the output is a closed symmetric
    # complex whose structure equations hold exactly
    rng = random.Random(77)
    done = 0
    while done < 8:
        try:
            cx, phi = random_symmetric_complex(rng, n_dim=2, max_rank=2)
        except RuntimeError:
            continue
        f, dphi = random_surgery_data(rng, cx, phi, 2)
        if f is None:
            continue
        D = f.target
        c1 = Cobordism(left=None, right=cx, target=D, f_left=None,
                       f_right=f, dphi=dphi.scale_sign(-1),
                       phi_left=None, phi_right=phi)
        c2 = Cobordism(left=cx, right=None, target=D,
                       f_left=f, f_right=None, dphi=dphi,
                       phi_left=phi, phi_right=None)
        glued, gphi, inc1, inc2 = union(c1, c2)
        assert glued.validate()
        res = symmetric_complex_residuals(glued, gphi)
        assert all(m.is_zero() for m in res.values())
        # ranks additive: D + C_{r-1} + D'
        for r in glued.degrees():
            assert glued.rank(r) == 2 * D.rank(r) + cx.rank(r - 1)
        assert inc1.is_chain_map() and inc2.is_chain_map()
        done += 1


def test_surgery_on_knot_torus_gives_sphere():
    # killing a 1-handle class of the torus yields S^2 homology
    from knotchain.triads import boundary_models, torus_union
    from knotchain.chains import rationalize
    from knotchain.rings import LAURENT_Q
    from fractions import Fraction
    R = LAURENT_Q
    m = boundary_models(R, R.t(), R.t(), R.t(0), R.t(0))
    E, phiE, _, _ = torus_union(m)
    phiE.levels = [0, 1, 2, 3]
    EQ = rationalize(E)
    phiQ = phiE.map_entries(lambda p: Fraction(p.augmentation()), QQ)
    import itertools
    found = None
    for v in itertools.product([-1, 0, 1], repeat=4):
        col = Mat.from_rows(QQ, [[Fraction(x)] for x in v])
        if col.is_zero() or not EQ.d[2].mul(col).is_zero():
            continue
        f = ChainMap(EQ, ChainComplex(QQ, {1: 1}, {}), {1: col})
        dphi = SymStructure(3, {}, levels=[0, 1, 2, 3])
        if all(mm.is_zero() for mm in
               symmetric_pair_residuals(f, dphi, phiQ).values()):
            found = (f, dphi)
            break
    assert found
    out_c, out_phi = algebraic_surgery(EQ, phiQ, *found)
    betti = {r: b for r, b in betti_numbers(out_c).items() if b}
    assert betti == {0: 1, 2: 1}
