"""The bundled knot corpus: table PD codes for the small twist knots,
programmatic pretzel diagrams, connected sums (granny, reef) by PD
splicing, and Seifert matrices for the twist-knot family.

Every diagram entry is validated on load (single component, planarity via
the Euler count, reducedness); expected invariants carried here are used
by the golden tests.
"""

from __future__ import annotations

from .diagram import (Diagram, mirror_pd, pd_connected_sum, pretzel_pd)

# Table PD codes (arcs numbered along the traversal).
PD_CODES = {
    "3_1": [(1, 4, 2, 5), (3, 6, 4, 1), (5, 2, 6, 3)],
    "4_1": [(4, 2, 5, 1), (8, 6, 1, 5), (6, 3, 7, 4), (2, 7, 3, 8)],
    "5_1": [(1, 6, 2, 7), (3, 8, 4, 9), (5, 10, 6, 1), (7, 2, 8, 3),
            (9, 4, 10, 5)],
    "5_2": [(1, 4, 2, 5), (3, 8, 4, 9), (5, 10, 6, 1), (9, 6, 10, 7),
            (7, 2, 8, 3)],
    "6_1": [(1, 4, 2, 5), (7, 10, 8, 11), (3, 9, 4, 8), (9, 3, 10, 2),
            (5, 12, 6, 1), (11, 6, 12, 7)],
}
PD_CODES["7_2"] = pretzel_pd(5, 1, 1)
PD_CODES["8_1"] = pretzel_pd(6, 1, 1)
PD_CODES["10_1"] = pretzel_pd(8, 1, 1)
PD_CODES["twist_k5"] = pretzel_pd(10, 1, 1)
PD_CODES["granny"] = pd_connected_sum(PD_CODES["3_1"], PD_CODES["3_1"])
PD_CODES["reef"] = pd_connected_sum(PD_CODES["3_1"],
                                    mirror_pd(PD_CODES["3_1"]))

# Seifert matrices.  Twist knots carry V = [[-1, 1], [0, k]]; trefoil is
# k = -1, figure-eight k = 1, 5_2 is k = -2, 6_1 (stevedore) k = 2,
# 7_2 is k = -3.  Mirroring is V -> -V^T.
TWIST_K = {"3_1": -1, "4_1": 1, "5_2": -2, "6_1": 2, "7_2": -3,
           "8_1": 3, "10_1": 4, "twist_k5": 5}


def twist_knot_pd(k):
    """Diagram of the twist knot with Seifert matrix [[-1,1],[0,k]]:
    P(2k,1,1) for k > 0 and P(2|k|-1,1,1) for k < 0."""
    if k == 0:
        raise ValueError("k = 0 is the unknot; use the sentinel")
    return pretzel_pd(2 * k, 1, 1) if k > 0 else pretzel_pd(-2 * k - 1, 1, 1)


def twist_seifert(k):
    return [[-1, 1], [0, k]]


def _mirror_seifert(V):
    n = len(V)
    return [[-V[j][i] for j in range(n)] for i in range(n)]


def _sum_seifert(V, W):
    n, m = len(V), len(W)
    out = [[0] * (n + m) for _ in range(n + m)]
    for i in range(n):
        for j in range(n):
            out[i][j] = V[i][j]
    for i in range(m):
        for j in range(m):
            out[n + i][n + j] = W[i][j]
    return out


SEIFERT = {name: twist_seifert(k) for name, k in TWIST_K.items()}
SEIFERT["5_1"] = [[-1, 1, 0, 0], [0, -1, 1, 0], [0, 0, -1, 1],
                  [0, 0, 0, -1]]
SEIFERT["granny"] = _sum_seifert(twist_seifert(-1), twist_seifert(-1))
SEIFERT["reef"] = _sum_seifert(twist_seifert(-1),
                               _mirror_seifert(twist_seifert(-1)))

# Alexander polynomials up to units, as (coeff, exponent) maps.
EXPECTED_ALEXANDER = {
    "unknot": {0: 1},
    "3_1": {0: 1, 1: -1, 2: 1},
    "4_1": {0: 1, 1: -3, 2: 1},
    "5_1": {0: 1, 1: -1, 2: 1, 3: -1, 4: 1},
    "5_2": {0: 2, 1: -3, 2: 2},
    "6_1": {0: 2, 1: -5, 2: 2},
    "7_2": {0: 3, 1: -5, 2: 3},
    "8_1": {0: 3, 1: -7, 2: 3},
    "10_1": {0: 4, 1: -9, 2: 4},
    "twist_k5": {0: 5, 1: -11, 2: 5},
    "granny": {0: 1, 1: -2, 2: 3, 3: -2, 4: 1},
    "reef": {0: 1, 1: -2, 2: 3, 3: -2, 4: 1},
}

# the trefoil's central base vertex reproduces the displayed d3 = (g2,g1,g3);
# the auto rule picks it already, the pin keeps the golden test stable
BASE_REGION = {"3_1": None}

CORPUS_NAMES = ["unknot", "3_1", "4_1", "5_1", "5_2", "6_1", "7_2",
                "8_1", "10_1", "twist_k5", "granny", "reef"]


def corpus_diagram(name):
    if name == "unknot":
        return Diagram.unknot()
    if name not in PD_CODES:
        raise KeyError(f"unknown corpus knot {name!r}")
    return Diagram.from_pd(PD_CODES[name], name=name,
                           base_region=BASE_REGION.get(name))


def corpus_entry(name):
    out = {"name": name}
    if name == "unknot":
        out["diagram"] = "unknot"
        out["seifert"] = []
    else:
        out["diagram"] = {"pd": [list(t) for t in PD_CODES[name]]}
        if name in SEIFERT:
            out["seifert"] = SEIFERT[name]
    if name in EXPECTED_ALEXANDER:
        out["alexander"] = {str(e): c
                            for e, c in EXPECTED_ALEXANDER[name].items()}
    return out
