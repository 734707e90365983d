import pytest

from knotchain.corpus import PD_CODES, corpus_diagram
from knotchain.diagram import (Diagram, DiagramError, connecting_paths,
                               is_reduced, mirror_pd, parse_pd_text,
                               pd_connected_sum, pretzel_pd,
                               quad_decomposition)
from knotchain.knotcx import wirtinger_presentation
from knotchain.words import IdentityFactor


def test_parse_pd_text():
    pd = parse_pd_text("X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]")
    assert pd == [(1, 4, 2, 5), (3, 6, 4, 1), (5, 2, 6, 3)]


def test_trefoil_labels_and_signs():
    d = corpus_diagram("3_1")
    assert [x.sign for x in d.crossings] == [-1, -1, -1]
    assert [x.labels for x in d.crossings] == [(1, 2, 3), (3, 1, 2), (2, 3, 1)]
    assert d.writhe() == -3


def test_figure_eight_signs():
    d = corpus_diagram("4_1")
    assert sorted(x.sign for x in d.crossings) == [-1, -1, 1, 1]
    assert d.writhe() == 0


def test_unknot_sentinel():
    d = Diagram.unknot()
    assert d.is_unknot and d.n == 0 and d.writhe() == 0


def test_rejects_too_few_crossings():
    with pytest.raises(DiagramError):
        Diagram.from_pd([(1, 2, 2, 1), (2, 1, 1, 2)])


def test_rejects_link():
    # two split trefoil components share no arcs: label reuse breaks
    with pytest.raises(DiagramError):
        Diagram.from_pd([(1, 4, 2, 5), (3, 6, 4, 1), (5, 2, 6, 3),
                         (7, 10, 8, 11), (9, 12, 10, 7), (11, 8, 12, 9)])


def test_rejects_malformed():
    with pytest.raises(DiagramError):
        Diagram.from_pd([(1, 2, 3), (4, 5, 6, 1), (2, 3, 4, 5)])


def test_kink_is_unreduced():
    # trefoil with a Reidemeister-I kink appended: crossing 4 is passed
    # over and then immediately under
    from knotchain.diagram import parse_gauss_text, gauss_to_pd
    toks, signs = parse_gauss_text("O1- U2- O3- U1- O2- U3- O4+ U4+")
    d = Diagram.from_pd(gauss_to_pd(toks, signs))
    assert not is_reduced(d)
    with pytest.raises(DiagramError):
        quad_decomposition(d)


def test_reducedness_of_corpus():
    for name, pd in PD_CODES.items():
        assert is_reduced(Diagram.from_pd(pd, name=name)), name


def test_quad_decomposition_counts():
    d = corpus_diagram("4_1")
    q = quad_decomposition(d)
    assert (q.n_vertices, q.n_edges, q.n_faces) == (6, 8, 4)
    assert q.euler_characteristic() == 2
    d = corpus_diagram("3_1")
    q = quad_decomposition(d)
    assert (q.n_vertices, q.n_edges, q.n_faces) == (5, 6, 3)
    for name in PD_CODES:
        q = quad_decomposition(corpus_diagram(name))
        assert q.euler_characteristic() == 2
        for path in q.face_paths.values():
            assert len(path) == 4


def test_each_generator_is_i2_once():
    for name in PD_CODES:
        d = corpus_diagram(name)
        i2s = sorted(x.labels[1] for x in d.crossings)
        assert i2s == list(range(1, d.n + 1))


def test_trefoil_golden_connecting_words():
    d = corpus_diagram("3_1")
    order, words, factors = connecting_paths(d)
    assert [str(words[i]) for i in (1, 2, 3)] == ["g2", "g1", "g3"]


def test_connecting_paths_identity_everywhere():
    for name in PD_CODES:
        d = corpus_diagram(name)
        p = wirtinger_presentation(d)
        order, words, factors = connecting_paths(d)
        ident = [IdentityFactor(w, i - 1, 1) for w, i in factors]
        assert p.identity_check(ident), name


def test_writhe_flips_under_mirror():
    for name in ("3_1", "4_1", "5_2"):
        d = corpus_diagram(name)
        m = Diagram.from_pd(mirror_pd(PD_CODES[name]))
        assert m.writhe() == -d.writhe()


def test_pretzel_generator():
    d = Diagram.from_pd(pretzel_pd(1, 1, 1))
    assert d.n == 3 and abs(d.writhe()) == 3
    d = Diagram.from_pd(pretzel_pd(5, 1, 1))
    assert d.n == 7


def test_connected_sum_pd():
    pd = pd_connected_sum(PD_CODES["3_1"], PD_CODES["4_1"])
    d = Diagram.from_pd(pd)
    assert d.n == 7
    assert d.writhe() == -3


def test_gauss_roundtrip():
    from knotchain.diagram import parse_gauss_text, gauss_to_pd
    toks, signs = parse_gauss_text("O1- U2- O3- U1- O2- U3-")
    pd = gauss_to_pd(toks, signs)
    d = Diagram.from_pd(pd)
    assert d.n == 3
    assert d.writhe() == -3


def test_twist_knot_generator_full_family():
    from knotchain.corpus import twist_knot_pd
    from knotchain.invariants import (alexander_polynomial,
                                      alexander_equal_up_to_units)
    from knotchain.rings import LaurentPoly
    from fractions import Fraction
    for k in [x for x in range(-5, 6) if x]:
        d = Diagram.from_pd(twist_knot_pd(k))
        want = LaurentPoly.from_dict({0: Fraction(k),
                                      1: Fraction(-(2 * k + 1)),
                                      2: Fraction(k)})
        assert alexander_equal_up_to_units(alexander_polynomial(d), want), k


def test_even_pretzel_link_rejected():
    # two even bands close into a link, not a knot
    with pytest.raises(DiagramError):
        pretzel_pd(2, 2, 1)
