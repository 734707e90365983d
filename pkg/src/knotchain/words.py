"""Free-group words, the integral group ring Z[F], Fox derivatives and
presentations with identities.

Generators are positive integers.  A word is stored freely reduced as a
tuple of (generator, exponent) pairs with exponents +-1 merged into runs;
equality of words is syntactic equality of reduced forms, which solves the
word problem in a free group.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction


def _reduce(letters):
    out = []
    for g, e in letters:
        if e == 0:
            continue
        if out and out[-1][0] == g:
            s = out[-1][1] + e
            if s == 0:
                out.pop()
            else:
                out[-1] = (g, s)
        else:
            out.append((g, e))
    return tuple(out)


@dataclass(frozen=True)
class Word:
    """A freely reduced word in a free group on integer-named generators."""

    letters: tuple = ()

    @staticmethod
    def identity():
        return Word(())

    @staticmethod
    def gen(g, e=1):
        if g <= 0:
            raise ValueError(f"generator index must be positive, got {g}")
        return Word(_reduce([(g, e)]))

    @staticmethod
    def from_letters(pairs):
        return Word(_reduce(list(pairs)))

    def __mul__(self, other):
        if not isinstance(other, Word):
            return NotImplemented
        return Word(_reduce(list(self.letters) + list(other.letters)))

    def inverse(self):
        return Word(tuple((g, -e) for g, e in reversed(self.letters)))

    def __pow__(self, n):
        if n == 0:
            return Word()
        base = self if n > 0 else self.inverse()
        out = Word()
        for _ in range(abs(n)):
            out = out * base
        return out

    def is_identity(self):
        return not self.letters

    def length(self):
        return sum(abs(e) for _, e in self.letters)

    def syllables(self):
        """Expand to single-exponent letters (g, +-1)."""
        out = []
        for g, e in self.letters:
            step = 1 if e > 0 else -1
            out.extend([(g, step)] * abs(e))
        return out

    def exponent_sum(self, g=None):
        if g is None:
            return sum(e for _, e in self.letters)
        return sum(e for h, e in self.letters if h == g)

    def generators(self):
        return sorted({g for g, _ in self.letters})

    def apply(self, images, one, mul, inv):
        """Evaluate the word in another group.

        images maps generator index -> group element; one/mul/inv are the
        target group operations.
        """
        out = one
        for g, e in self.syllables():
            x = images[g]
            out = mul(out, x if e > 0 else inv(x))
        return out

    def __repr__(self):
        if not self.letters:
            return "1"
        return ".".join(f"g{g}" + (f"^{e}" if e != 1 else "") for g, e in self.letters)


@dataclass(frozen=True)
class FreeRingElem:
    """An element of the group ring Z[F]: finite map word -> coefficient.

    Coefficients are ints (or Fractions when a rational group algebra is
    wanted); zero coefficients are never stored.
    """

    terms: tuple = ()  # sorted tuple of (Word, coeff)

    @staticmethod
    def from_dict(d):
        items = tuple(sorted(((w, c) for w, c in d.items() if c != 0),
                             key=lambda t: (t[0].letters,)))
        return FreeRingElem(items)

    @staticmethod
    def zero():
        return FreeRingElem(())

    @staticmethod
    def one():
        return FreeRingElem(((Word(), 1),))

    @staticmethod
    def from_word(w, c=1):
        return FreeRingElem.from_dict({w: c})

    def as_dict(self):
        return dict(self.terms)

    def __add__(self, other):
        d = self.as_dict()
        for w, c in other.terms:
            d[w] = d.get(w, 0) + c
        return FreeRingElem.from_dict(d)

    def __neg__(self):
        return FreeRingElem(tuple((w, -c) for w, c in self.terms))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return FreeRingElem.from_dict({w: c * other for w, c in self.terms})
        d = {}
        for w1, c1 in self.terms:
            for w2, c2 in other.terms:
                w = w1 * w2
                d[w] = d.get(w, 0) + c1 * c2
        return FreeRingElem.from_dict(d)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self * other
        if isinstance(other, Word):
            return FreeRingElem.from_dict({other * w: c for w, c in self.terms})
        raise TypeError(f"cannot left-multiply FreeRingElem by {type(other)}")

    def conj(self):
        """Involution g -> g^-1 extended linearly."""
        return FreeRingElem.from_dict({w.inverse(): c for w, c in self.terms})

    def is_zero(self):
        return not self.terms

    def augmentation(self):
        return sum(c for _, c in self.terms)

    def specialize(self, group_hom, ring):
        """Push through a group homomorphism Word -> ring group element.

        group_hom maps a Word to a group element of the target group
        algebra; ring must be a GroupAlgebra-like ring exposing
        monomial(g, c).
        """
        out = ring.zero()
        for w, c in self.terms:
            out = ring.add(out, ring.monomial(group_hom(w), c))
        return out

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for w, c in self.terms:
            bits.append(f"{'+' if c >= 0 else '-'}{abs(c) if abs(c) != 1 or w.is_identity() else ''}{w if not w.is_identity() else (abs(c) if abs(c) == 1 else '')}")
        return "".join(bits)


def fox_derivative(w, j):
    """Fox free derivative of a word with respect to generator j.

    Satisfies d(1) = 0, d(g_i)/d(g_j) = delta_ij and the product rule
    d(uv) = d(u) + u d(v); consequently d(g^-1) = -g^-1 d(g).
    """
    if j <= 0:
        raise ValueError(f"generator index must be positive, got {j}")
    out = {}
    prefix = Word()
    for g, e in w.syllables():
        if g == j:
            if e > 0:
                key = prefix
                out[key] = out.get(key, 0) + 1
            else:
                key = prefix * Word.gen(g, -1)
                out[key] = out.get(key, 0) - 1
        prefix = prefix * Word.gen(g, e)
    return FreeRingElem.from_dict(out)


def fox_matrix(relations, generators):
    """Jacobian of Fox derivatives: rows = relations, cols = generators."""
    return [[fox_derivative(r, g) for g in generators] for r in relations]


def ring_fundamental_formula_residual(w, generators):
    """w - 1 - sum_i (dw/dg_i)(g_i - 1); identically zero by Fox's formula."""
    total = FreeRingElem.from_word(w) - FreeRingElem.one()
    for g in generators:
        d = fox_derivative(w, g)
        total = total - d * (FreeRingElem.from_word(Word.gen(g)) - FreeRingElem.one())
    return total


@dataclass(frozen=True)
class IdentityFactor:
    """One factor w * rho^eps * w^-1 of an identity of a presentation."""

    conjugator: Word
    relation: int  # index into Presentation.relations
    eps: int  # +1 or -1


@dataclass
class Presentation:
    """A finite presentation with an optional list of identities.

    generators: number of generators (named 1..n); names gives printable
    labels.  Each identity is an ordered product of conjugated relators
    which freely reduces to 1 once the relator letters are substituted.
    """

    n_generators: int
    relations: list
    names: dict = field(default_factory=dict)
    identities: list = field(default_factory=list)  # lists of IdentityFactor

    def name(self, g):
        return self.names.get(g, f"g{g}")

    def substitute(self, identity):
        """psi-image of an identity: substitute each rho_j by r_j."""
        out = Word()
        for f in identity:
            r = self.relations[f.relation]
            if f.eps < 0:
                r = r.inverse()
            out = out * f.conjugator * r * f.conjugator.inverse()
        return out

    def identity_check(self, identity):
        """True iff the substituted identity freely reduces to 1."""
        return self.substitute(identity).is_identity()

    def check_all_identities(self):
        return all(self.identity_check(i) for i in self.identities)

    def identity_boundary(self, identity):
        """Z[F]-coefficients of the 3-handle boundary along each 2-handle.

        The component along relation j is sum of eps * conjugator over the
        factors involving relation j.
        """
        out = [FreeRingElem.zero() for _ in self.relations]
        for f in identity:
            out[f.relation] = out[f.relation] + FreeRingElem.from_word(f.conjugator, f.eps)
        return out


def amalgamated_presentation(p, q, meridian_p=1, meridian_q=1):
    """Free product of two presentations with designated meridians identified.

    Generators of q are shifted by p.n_generators; one extra relation
    g_mp * g_mq^-1 is appended.
    """
    if not (1 <= meridian_p <= p.n_generators):
        raise ValueError("first presentation lacks the designated meridian")
    if not (1 <= meridian_q <= q.n_generators):
        raise ValueError("second presentation lacks the designated meridian")
    shift = p.n_generators

    def sh(w):
        return Word(tuple((g + shift, e) for g, e in w.letters))

    rels = list(p.relations) + [sh(r) for r in q.relations]
    rels.append(Word.gen(meridian_p) * Word.gen(shift + meridian_q, -1))
    names = dict(p.names)
    for g, nm in q.names.items():
        names[g + shift] = nm + "'"
    return Presentation(p.n_generators + q.n_generators, rels, names)


def abelianization_matrix(p):
    """Exponent-sum matrix of the relations (rows) in the generators (cols)."""
    return [[r.exponent_sum(g) for g in range(1, p.n_generators + 1)]
            for r in p.relations]
