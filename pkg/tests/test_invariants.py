import random
from fractions import Fraction

import pytest

from knotchain.corpus import (CORPUS_NAMES, EXPECTED_ALEXANDER, SEIFERT,
                              corpus_diagram, twist_seifert)
from knotchain.invariants import (alexander_equal_up_to_units,
                                  alexander_from_seifert,
                                  alexander_polynomial,
                                  blanchfield_chain_level,
                                  blanchfield_from_seifert,
                                  blanchfield_metaboliser_search,
                                  blanchfield_route_match, fox_milnor_test,
                                  gamma_mul, gamma_representation,
                                  levine_tristram, normalize_alexander,
                                  omega_is_alexander_root,
                                  seifert_metabolic_screen,
                                  signature_symmetric_int)
from knotchain.rings import LaurentPoly, QtModElem
from knotchain.triads import zero_surgery_laurent


def L(d):
    return LaurentPoly.from_dict({e: Fraction(c) for e, c in d.items()})


def test_alexander_corpus_both_routes():
    for name in CORPUS_NAMES:
        expect = L(EXPECTED_ALEXANDER[name])
        d = corpus_diagram(name)
        if not d.is_unknot:
            assert alexander_equal_up_to_units(alexander_polynomial(d),
                                               expect), name
        if name in SEIFERT and SEIFERT[name]:
            assert alexander_equal_up_to_units(
                alexander_from_seifert(SEIFERT[name]), expect), name


def test_alexander_symmetry_and_value_at_one():
    for name in CORPUS_NAMES:
        if name == "unknot":
            continue
        a = alexander_polynomial(corpus_diagram(name))
        assert alexander_equal_up_to_units(a, a.conj()), name
        assert abs(a.evaluate(Fraction(1))) == 1, name


def test_twist_family_polynomial():
    for k in range(-5, 6):
        a = alexander_from_seifert(twist_seifert(k))
        want = L({0: k, 1: -(2 * k + 1), 2: k}) if k else L({0: 1})
        assert alexander_equal_up_to_units(a, want), k


def test_blanchfield_seifert_route_invariants():
    for name in ("3_1", "4_1", "5_2", "6_1", "granny", "reef"):
        b = blanchfield_from_seifert(SEIFERT[name])
        assert b.is_hermitian(), name
        assert b.is_sesquilinear(), name
        assert b.is_nonsingular(), name


def test_blanchfield_block_sum():
    b1 = blanchfield_from_seifert(twist_seifert(-1))
    bsum = blanchfield_from_seifert(SEIFERT["granny"])
    assert bsum.dim == 2 * b1.dim
    assert sorted(repr(o) for o in bsum.orders) == \
        sorted(repr(o) for o in b1.orders * 2)


def test_blanchfield_empty():
    b = blanchfield_from_seifert([])
    assert b.dim == 0 and b.is_hermitian() and b.is_nonsingular()


def test_blanchfield_rejects_non_unimodular():
    with pytest.raises(ValueError):
        blanchfield_from_seifert([[1, 0], [0, 1]])


def test_blanchfield_chain_route_and_match(triads):
    for name in ("3_1", "4_1"):
        NL, thetaL = zero_surgery_laurent(triads[name])
        bc = blanchfield_chain_level(NL, thetaL)
        assert bc.is_hermitian() and bc.is_sesquilinear() and \
            bc.is_nonsingular(), name
        bs = blanchfield_from_seifert(SEIFERT[name])
        m = blanchfield_route_match(bs, bc)
        assert m["orders_match"] and m["identified"], (name, m)


def test_fox_milnor_examples():
    assert fox_milnor_test(LaurentPoly.const(1))["passes"]
    assert not fox_milnor_test(L({0: 1, 1: -1, 2: 1}))["passes"]
    res = fox_milnor_test(L({0: 2, 1: -5, 2: 2}))
    assert res["passes"]
    f = res["factor"]
    prod = normalize_alexander(f * f.conj())
    assert alexander_equal_up_to_units(prod, L({0: 2, 1: -5, 2: 2}))


def test_fox_milnor_rejects_bad_input():
    with pytest.raises(ValueError):
        fox_milnor_test(L({0: 2, 1: 1}))  # value at 1 is 3


def test_levine_tristram_examples():
    Vt = twist_seifert(-1)
    assert levine_tristram(Vt, 1, 2) == -2
    assert abs(levine_tristram(SEIFERT["granny"], 1, 2)) == 4
    assert levine_tristram(SEIFERT["reef"], 1, 2) == 0


def test_levine_tristram_even_and_conj_symmetric():
    V = SEIFERT["5_2"]
    for (k, m) in [(1, 3), (1, 4), (2, 5), (1, 7)]:
        s = levine_tristram(V, k, m)
        assert s % 2 == 0
        assert s == levine_tristram(V, m - k, m)  # omega-bar


def test_levine_tristram_jump_point_rejected():
    # trefoil: Delta = t^2 - t + 1 has the primitive 6th roots of unity
    assert omega_is_alexander_root(alexander_from_seifert(twist_seifert(-1)),
                                   1, 6)
    with pytest.raises(ValueError):
        levine_tristram(twist_seifert(-1), 1, 6)
    with pytest.raises(ValueError):
        levine_tristram(twist_seifert(-1), 0, 5)  # omega = 1


def test_signature_of_symmetric_matrices():
    assert signature_symmetric_int([[2]]) == 1
    assert signature_symmetric_int([[-4, 2], [2, -4]]) == -2
    assert signature_symmetric_int([[0, 1], [1, 0]]) == 0
    assert signature_symmetric_int([]) == 0


def test_screen_verdicts():
    assert seifert_metabolic_screen([])["verdict"] == "passes screen"
    assert seifert_metabolic_screen(twist_seifert(-1))["verdict"] == \
        "obstructed"
    assert seifert_metabolic_screen(twist_seifert(2))["verdict"] == \
        "passes screen"
    granny = seifert_metabolic_screen(SEIFERT["granny"])
    assert granny["verdict"] == "obstructed"
    assert abs(granny["signature"]) == 4
    assert seifert_metabolic_screen(SEIFERT["reef"])["verdict"] == \
        "passes screen"


def test_twist_metaboliser_iff_square():
    import math
    for k in range(0, 11):
        b = blanchfield_from_seifert(twist_seifert(k))
        res = blanchfield_metaboliser_search(b)
        has = bool(res["metabolisers"])
        root = math.isqrt(4 * k + 1)
        square = root * root == 4 * k + 1
        assert has == square, (k, res)
        if b.dim:
            assert res["exhaustive"]


def test_diagonal_metaboliser_in_sum():
    from knotchain.invariants import BlanchfieldForm
    from knotchain.linalg import Mat
    b = blanchfield_from_seifert(twist_seifert(-1))
    dim = 2 * b.dim
    vals = [[QtModElem.zero()] * dim for _ in range(dim)]
    for i in range(b.dim):
        for j in range(b.dim):
            vals[i][j] = b.values[i][j]
            vals[b.dim + i][b.dim + j] = -b.values[i][j]
    trows = []
    for i in range(b.dim):
        trows.append(tuple(b.t_action[i, j] for j in range(b.dim))
                     + tuple(Fraction(0) for _ in range(b.dim)))
    for i in range(b.dim):
        trows.append(tuple(Fraction(0) for _ in range(b.dim))
                     + tuple(b.t_action[i, j] for j in range(b.dim)))
    bsum = BlanchfieldForm(dim, b.orders + b.orders,
                           Mat.from_rows(None, trows), vals)
    res = blanchfield_metaboliser_search(bsum)
    assert res["metabolisers"], "diagonal metaboliser not found"


def test_gamma_representation(triads):
    t = triads["3_1"]
    b = blanchfield_from_seifert(SEIFERT["3_1"])
    rho = gamma_representation(b, (1, 0))
    grp = t.ring.group
    rng = random.Random(8)
    one = rho(grp.one())
    assert one[0] == 0 and one[1].is_zero()
    nonzero_seen = False
    for _ in range(25):
        a = grp.elem(rng.randint(-2, 2),
                     [Fraction(rng.randint(-2, 2)) for _ in range(2)])
        bb = grp.elem(rng.randint(-2, 2),
                      [Fraction(rng.randint(-2, 2)) for _ in range(2)])
        lhs = rho(grp.mul(a, bb))
        rhs = gamma_mul(rho(a), rho(bb))
        assert lhs[0] == rhs[0]
        assert (lhs[1] - rhs[1]).is_zero()
        nonzero_seen = nonzero_seen or not lhs[1].is_zero()
    assert nonzero_seen
    # p = 0 kills everything
    rho0 = gamma_representation(b, (0, 0))
    g = grp.elem(1, [Fraction(1), Fraction(0)])
    assert rho0(g)[1].is_zero()


def test_fox_milnor_consistency_with_signatures():
    # FM pass implies all sampled regular signatures vanish (reef)
    V = SEIFERT["reef"]
    fm = fox_milnor_test(alexander_from_seifert(V))
    assert fm["passes"]
    delta = alexander_from_seifert(V)
    for (k, m) in [(1, 2), (1, 3), (1, 4), (1, 5), (1, 7)]:
        if omega_is_alexander_root(delta, k, m):
            continue
        assert levine_tristram(V, k, m) == 0


def test_blanchfield_route_match_all_twist_corpus(triads):
    for name in ("5_2", "6_1"):
        NL, thetaL = zero_surgery_laurent(triads[name])
        bc = blanchfield_chain_level(NL, thetaL)
        bs = blanchfield_from_seifert(SEIFERT[name])
        m = blanchfield_route_match(bs, bc)
        assert m["orders_match"] and m["identified"], (name, m)


def test_metaboliser_search_noncyclic_and_genus_two():
    bg = blanchfield_from_seifert(SEIFERT["granny"])
    res = blanchfield_metaboliser_search(bg)
    assert res["metabolisers"] == [] and not res["exhaustive"]
    b51 = blanchfield_from_seifert(SEIFERT["5_1"])
    assert b51.dim == 4 and b51.is_hermitian() and b51.is_nonsingular()
    res51 = blanchfield_metaboliser_search(b51)
    assert res51["metabolisers"] == [] and res51["exhaustive"]
