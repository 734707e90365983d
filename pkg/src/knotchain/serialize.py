"""JSON forms for the algebraic objects: words as signed index arrays,
presentations, chain complexes with string matrix entries, verification
reports.  Round-trips are exact (entries are parsed back with the same
grammar the reprs use)."""

from __future__ import annotations

from fractions import Fraction

from .rings import LaurentPoly
from .words import Word


def word_to_json(w: Word):
    out = []
    for g, e in w.letters:
        out.append([g, e])
    return out


def word_from_json(data):
    return Word.from_letters((g, e) for g, e in data)


def presentation_to_json(p):
    return {
        "generators": p.n_generators,
        "names": {str(k): v for k, v in p.names.items()},
        "relations": [word_to_json(r) for r in p.relations],
        "relation_strings": [repr(r) for r in p.relations],
        "identities": [
            [{"conjugator": word_to_json(f.conjugator),
              "relation": f.relation, "eps": f.eps} for f in ident]
            for ident in p.identities],
    }


def complex_to_json(cx, name=""):
    return {
        "name": name,
        "ring": cx.ring.name,
        "ranks": {str(r): n for r, n in sorted(cx.ranks.items()) if n},
        "boundaries": {
            str(r): [[cx.ring.to_str(x) for x in row] for row in m.rows]
            for r, m in sorted(cx.d.items())},
    }


def laurent_to_json(p: LaurentPoly):
    return {str(e): str(c) for e, c in p.coeffs}


def laurent_from_json(d):
    return LaurentPoly.from_dict({int(e): Fraction(c) for e, c in d.items()})


def structure_to_json(phi, cx):
    return {
        "dimension": phi.n,
        "levels": phi.stored_levels(),
        "components": {
            f"{s},{r}": [[cx.ring.to_str(x) for x in row] for row in m.rows]
            for s, comps in sorted(phi.comps.items())
            for r, m in sorted(comps.items())},
    }


def qtmod_to_json(v):
    return {"num": [str(c) for c in v.num], "den": [str(c) for c in v.den]}


def blanchfield_to_json(b):
    return {
        "dim": b.dim,
        "orders": [repr(o) for o in b.orders],
        "basis": b.basis,
        "values": [[qtmod_to_json(v) for v in row] for row in b.values],
        "hermitian": b.is_hermitian(),
        "sesquilinear": b.is_sesquilinear(),
        "nonsingular": b.is_nonsingular(),
    }
