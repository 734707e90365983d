"""Exact coefficient rings for the chain complexes: Z, Q, Laurent
polynomials Z[t,t^-1] and Q[t,t^-1], the free group ring Z[F], the
rationalized metabelian group ring Q[Z x| H], and the value group
Q(t)/Q[t,t^-1].

Every ring object exposes the same small interface (zero/one/add/neg/mul/
conj/from_int/is_zero) so matrices and chain complexes stay ring-agnostic.
All arithmetic is exact; there is no floating point anywhere here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .words import Word, FreeRingElem


class Ring:
    name = "ring"
    commutative = True

    def zero(self):
        raise NotImplementedError

    def one(self):
        return self.from_int(1)

    def from_int(self, n):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        raise NotImplementedError

    def conj(self, a):
        """Involution; identity on Z and Q, t -> t^-1 on Laurent rings,
        g -> g^-1 extended linearly on group rings."""
        raise NotImplementedError

    def is_zero(self, a):
        return a == self.zero()

    def eq(self, a, b):
        return self.is_zero(self.sub(a, b))

    def to_str(self, a):
        return repr(a)


class IntRing(Ring):
    name = "Z"

    def zero(self):
        return 0

    def from_int(self, n):
        return int(n)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def conj(self, a):
        return a


class RatRing(Ring):
    name = "Q"

    def zero(self):
        return Fraction(0)

    def from_int(self, n):
        return Fraction(n)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def conj(self, a):
        return a


ZZ = IntRing()
QQ = RatRing()


# ---------------------------------------------------------------------------
# Laurent polynomials.


@dataclass(frozen=True)
class LaurentPoly:
    """Finite map exponent -> coefficient, zero coefficients dropped."""

    coeffs: tuple = ()  # sorted tuple of (exp, coeff)

    @staticmethod
    def from_dict(d):
        return LaurentPoly(tuple(sorted((e, c) for e, c in d.items() if c != 0)))

    @staticmethod
    def monomial(e, c=1):
        return LaurentPoly.from_dict({e: c})

    @staticmethod
    def const(c):
        return LaurentPoly.from_dict({0: c})

    def as_dict(self):
        return dict(self.coeffs)

    def __add__(self, o):
        d = self.as_dict()
        for e, c in o.coeffs:
            d[e] = d.get(e, 0) + c
        return LaurentPoly.from_dict(d)

    def __neg__(self):
        return LaurentPoly(tuple((e, -c) for e, c in self.coeffs))

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, o):
        d = {}
        for e1, c1 in self.coeffs:
            for e2, c2 in o.coeffs:
                d[e1 + e2] = d.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly.from_dict(d)

    def conj(self):
        return LaurentPoly(tuple(sorted((-e, c) for e, c in self.coeffs)))

    def is_zero(self):
        return not self.coeffs

    def degree(self):
        return self.coeffs[-1][0] if self.coeffs else None

    def valuation(self):
        return self.coeffs[0][0] if self.coeffs else None

    def evaluate(self, x):
        out = 0 * x if not isinstance(x, Fraction) else Fraction(0)
        for e, c in self.coeffs:
            out = out + c * x ** e
        return out

    def augmentation(self):
        return sum(c for _, c in self.coeffs)

    def dense(self):
        """(valuation, [c_0..c_deg]) with Fraction coefficients."""
        if not self.coeffs:
            return 0, []
        v = self.valuation()
        n = self.degree() - v + 1
        out = [Fraction(0)] * n
        for e, c in self.coeffs:
            out[e - v] = Fraction(c)
        return v, out

    @staticmethod
    def from_dense(val, coeffs):
        return LaurentPoly.from_dict({val + i: c for i, c in enumerate(coeffs)})

    def __repr__(self):
        if not self.coeffs:
            return "0"
        bits = []
        for e, c in self.coeffs:
            mono = "1" if e == 0 else ("t" if e == 1 else f"t^{e}")
            if e == 0:
                bits.append(f"{c}")
            elif c == 1:
                bits.append(mono)
            elif c == -1:
                bits.append(f"-{mono}")
            else:
                bits.append(f"{c}*{mono}")
        return " + ".join(bits).replace("+ -", "- ")


class LaurentRing(Ring):
    """Z[t,t^-1] or Q[t,t^-1] depending on the coefficient ring."""

    def __init__(self, rational=True):
        self.rational = rational
        self.name = "Q[t,t^-1]" if rational else "Z[t,t^-1]"

    def _c(self, c):
        return Fraction(c) if self.rational else int(c)

    def zero(self):
        return LaurentPoly()

    def from_int(self, n):
        return LaurentPoly.const(self._c(n))

    def monomial(self, g, c=1):
        # group element of Z is its exponent
        return LaurentPoly.monomial(g, self._c(c))

    def t(self, e=1):
        return LaurentPoly.monomial(e, self._c(1))

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def conj(self, a):
        return a.conj()

    def is_zero(self, a):
        return a.is_zero()

    def to_str(self, a):
        return repr(a)


LAURENT_Z = LaurentRing(rational=False)
LAURENT_Q = LaurentRing(rational=True)


class FreeGroupRing(Ring):
    """Z[F]; elements are FreeRingElem.  Noncommutative."""

    name = "Z[F]"
    commutative = False

    def zero(self):
        return FreeRingElem.zero()

    def from_int(self, n):
        return FreeRingElem.from_dict({Word(): n})

    def monomial(self, g, c=1):
        return FreeRingElem.from_word(g, c)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def conj(self, a):
        return a.conj()

    def is_zero(self, a):
        return a.is_zero()


FREE = FreeGroupRing()


# ---------------------------------------------------------------------------
# The metabelian quotient Z x| H_Q and its rational group algebra.


def _vec(v):
    return tuple(Fraction(x) for x in v)


def _vec_add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def _vec_neg(u):
    return tuple(-a for a in u)


def _vec_mat(v, m):
    # row vector times matrix
    return tuple(sum(v[i] * m[i][j] for i in range(len(v)))
                 for j in range(len(m[0]))) if m else ()


@dataclass
class AlexanderData:
    """The rational Alexander module as concrete linear algebra.

    dim: Q-dimension d; t_action: d x d invertible matrix T acting on row
    vectors (the class of t.x is vec(x) @ T); meridian_classes[i] is the
    vector of [g_i g_1^-1] for generator i (so h_1 = 0); orders: the monic
    invariant factors.
    """

    dim: int
    t_action: tuple
    meridian_classes: dict
    orders: tuple = ()

    def __post_init__(self):
        self._powers = {0: tuple(tuple(Fraction(1) if i == j else Fraction(0)
                                       for j in range(self.dim))
                                 for i in range(self.dim)),
                        1: tuple(_vec(r) for r in self.t_action)}

    def t_power(self, n):
        if n in self._powers:
            return self._powers[n]
        if n > 0:
            prev = self.t_power(n - 1)
            m = tuple(_vec_mat(row, self._powers[1]) for row in prev)
        else:
            if -1 not in self._powers:
                self._powers[-1] = _mat_inverse(self._powers[1])
            prev = self.t_power(n + 1)
            m = tuple(_vec_mat(row, self._powers[-1]) for row in prev)
        self._powers[n] = m
        return m

    def act(self, v, n=1):
        if self.dim == 0:
            return ()
        return _vec_mat(v, self.t_power(n))

    def zero_vec(self):
        return tuple(Fraction(0) for _ in range(self.dim))


def _mat_inverse(m):
    n = len(m)
    a = [list(row) + [Fraction(1) if i == j else Fraction(0) for j in range(n)]
         for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ValueError("matrix not invertible")
        a[col], a[piv] = a[piv], a[col]
        inv = Fraction(1) / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return tuple(tuple(row[n:]) for row in a)


@dataclass(frozen=True)
class MetabelianElem:
    """(n, v) in Z x| H_Q with law (n,v).(m,w) = (n+m, v + t^n w)."""

    n: int
    v: tuple


class MetabelianGroup:
    def __init__(self, alex: AlexanderData):
        self.alex = alex

    def one(self):
        return MetabelianElem(0, self.alex.zero_vec())

    def mul(self, a, b):
        return MetabelianElem(a.n + b.n, _vec_add(a.v, self.alex.act(b.v, a.n)))

    def inv(self, a):
        return MetabelianElem(-a.n, _vec_neg(self.alex.act(a.v, -a.n)))

    def elem(self, n, v):
        return MetabelianElem(n, _vec(v))


class MetabelianRing(Ring):
    """Q[Z x| H_Q]: finite maps MetabelianElem -> Fraction."""

    commutative = False

    def __init__(self, alex: AlexanderData):
        self.alex = alex
        self.group = MetabelianGroup(alex)
        self.name = f"Q[Z x| H_Q] (dim {alex.dim})"

    def zero(self):
        return ()

    def _pack(self, d):
        return tuple(sorted(((g, c) for g, c in d.items() if c != 0),
                            key=lambda t: (t[0].n, t[0].v)))

    def from_int(self, n):
        return self._pack({self.group.one(): Fraction(n)})

    def monomial(self, g, c=1):
        return self._pack({g: Fraction(c)})

    def add(self, a, b):
        d = dict(a)
        for g, c in b:
            d[g] = d.get(g, Fraction(0)) + c
        return self._pack(d)

    def neg(self, a):
        return tuple((g, -c) for g, c in a)

    def mul(self, a, b):
        d = {}
        for g1, c1 in a:
            for g2, c2 in b:
                g = self.group.mul(g1, g2)
                d[g] = d.get(g, Fraction(0)) + c1 * c2
        return self._pack(d)

    def conj(self, a):
        d = {}
        for g, c in a:
            gi = self.group.inv(g)
            d[gi] = d.get(gi, Fraction(0)) + c
        return self._pack(d)

    def is_zero(self, a):
        return not a

    def augmentation(self, a):
        return sum(c for _, c in a)

    def abelianize(self, a):
        """Project to Q[t,t^-1] via (n, v) -> t^n."""
        d = {}
        for g, c in a:
            d[g.n] = d.get(g.n, Fraction(0)) + c
        return LaurentPoly.from_dict(d)

    def to_str(self, a):
        if not a:
            return "0"
        return " + ".join(f"{c}*({g.n},{list(g.v)})" for g, c in a)


# ---------------------------------------------------------------------------
# Specialization homomorphisms from words / Z[F].


class WordHom:
    """Group homomorphism F -> G given by generator images.

    kind in {'augmentation', 'abelian', 'metabelian', 'free'}: abelian and
    augmentation only need the meridian exponents.
    """

    def __init__(self, ring, images):
        self.ring = ring
        self.images = images  # generator index -> group element

    def group_image(self, w: Word):
        r = self.ring
        if isinstance(r, LaurentRing):
            return sum(e * self.images[g] for g, e in w.letters) if w.letters else 0
        if isinstance(r, MetabelianRing):
            grp = r.group
            return w.apply(self.images, grp.one(), grp.mul, grp.inv)
        if isinstance(r, (IntRing, RatRing)):
            return 0
        if isinstance(r, FreeGroupRing):
            return w.apply(self.images, Word(), lambda a, b: a * b,
                           lambda a: a.inverse())
        raise TypeError(f"no group image for ring {r.name}")

    def ring_image(self, x: FreeRingElem):
        r = self.ring
        if isinstance(r, (IntRing, RatRing)):
            return r.from_int(0) + r.from_int(x.augmentation()) \
                if isinstance(r, IntRing) else Fraction(x.augmentation())
        out = r.zero()
        for w, c in x.terms:
            out = r.add(out, r.monomial(self.group_image(w), c))
        return out

    def __call__(self, x):
        if isinstance(x, Word):
            return self.group_image(x)
        return self.ring_image(x)


def abelian_hom(n_generators, extra=None):
    """All meridional generators -> t; extra maps e.g. lambda -> t^0."""
    images = {g: 1 for g in range(1, n_generators + 1)}
    if extra:
        images.update(extra)
    return WordHom(LAURENT_Q, images)


def augmentation_hom(n_generators):
    return WordHom(QQ, {g: 0 for g in range(1, n_generators + 1)})


def metabelian_hom(ring: MetabelianRing, meridian_exponents, h_classes):
    """g_i -> (e_i, h_i); usually e_i = 1 and h_i the meridian class."""
    images = {g: MetabelianElem(meridian_exponents[g], _vec(h_classes[g]))
              for g in meridian_exponents}
    return WordHom(ring, images)


def metabelian_specialize(w: Word, alex: "AlexanderData",
                          meridian_classes=None):
    """Image of a word under F -> Z x| H_Q with g_i -> (1, h_i)."""
    grp = MetabelianGroup(alex)
    classes = meridian_classes or alex.meridian_classes
    images = {g: MetabelianElem(1, _vec(h)) for g, h in classes.items()}
    return w.apply(images, grp.one(), grp.mul, grp.inv)


def qt_mod_reduce(num: LaurentPoly, den: LaurentPoly = None):
    """Canonical representative of num/den in Q(t)/Q[t,t^-1]."""
    if den is None:
        return QtModElem.from_laurent(num)
    return QtModElem.from_fraction(num, den)


def abelianize_word(w: Word, meridian_exponents=None):
    """Exponent-sum monomial t^k of a word; lambda-type letters weight 0."""
    if meridian_exponents is None:
        k = w.exponent_sum()
    else:
        k = sum(e * meridian_exponents.get(g, 0) for g, e in w.letters)
    return LaurentPoly.monomial(k, 1)


# ---------------------------------------------------------------------------
# Q(t)/Q[t,t^-1]: canonical proper-fraction representatives.


def _poly_trim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def poly_divmod(a, b):
    """Dense polynomial division over Q: returns (quot, rem)."""
    a = [Fraction(x) for x in a]
    b = [Fraction(x) for x in b]
    _poly_trim(a)
    _poly_trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    r = a[:]
    while len(r) >= len(b) and r:
        f = r[-1] / b[-1]
        s = len(r) - len(b)
        q[s] = f
        for i, bc in enumerate(b):
            r[s + i] -= f * bc
        _poly_trim(r)
    return q, r


def poly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _poly_trim(out)


def poly_add(a, b):
    out = [Fraction(0)] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] += x
    for i, x in enumerate(b):
        out[i] += x
    return _poly_trim(out)


def poly_gcd(a, b):
    a, b = [Fraction(x) for x in a], [Fraction(x) for x in b]
    _poly_trim(a)
    _poly_trim(b)
    while b:
        _, r = poly_divmod(a, b)
        a, b = b, r
    if a:
        lead = a[-1]
        a = [x / lead for x in a]
    return a


def poly_xgcd(a, b):
    """Extended gcd over Q[t]: g, u, v with u a + v b = g (g monic)."""
    r0, r1 = [Fraction(x) for x in a], [Fraction(x) for x in b]
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]
    _poly_trim(r0)
    _poly_trim(r1)
    while r1:
        q, r = poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, poly_add(s0, [-x for x in poly_mul(q, s1)])
        t0, t1 = t1, poly_add(t0, [-x for x in poly_mul(q, t1)])
    if r0:
        lead = r0[-1]
        r0 = [x / lead for x in r0]
        s0 = [x / lead for x in s0]
        t0 = [x / lead for x in t0]
    return r0, s0, t0


@dataclass(frozen=True)
class QtModElem:
    """Element of Q(t)/Q[t,t^-1] in canonical form: num/den with den a
    monic polynomial with nonzero constant term, deg num < deg den, and
    gcd(num, den) = 1.  Zero is ((), (1,))."""

    num: tuple
    den: tuple

    @staticmethod
    def zero():
        return QtModElem((), (Fraction(1),))

    @staticmethod
    def from_fraction(num_laurent: LaurentPoly, den_laurent: LaurentPoly):
        """Reduce p/q mod Q[t,t^-1] to canonical form."""
        if den_laurent.is_zero():
            raise ZeroDivisionError("zero denominator polynomial")
        vd, d = den_laurent.dense()
        vn, n = num_laurent.dense()
        if not n:
            return QtModElem.zero()
        # strip t-powers (units): denominator becomes q(0) != 0
        vq = 0
        while d and d[0] == 0:
            d = d[1:]
            vq += 1
        # element = t^(vn - vd - vq) * n / d ; fold t-power into the
        # numerator modulo d using t^-1 = inverse of t mod d
        shift = vn - vd - vq
        g, u, _ = poly_xgcd([Fraction(0), Fraction(1)], d)
        if len(g) != 1:
            raise ArithmeticError("t not invertible mod denominator")
        tinv = [x / g[0] for x in u]
        n = [Fraction(x) for x in n]
        if shift >= 0:
            n = poly_mul(n, poly_pow([Fraction(0), Fraction(1)], shift))
        else:
            n = poly_mul(n, poly_pow(tinv, -shift))
        _, n = poly_divmod(n, d)
        if not n:
            return QtModElem.zero()
        g = poly_gcd(n, d)
        if len(g) > 1:
            n, _ = poly_divmod(n, g)
            d, _ = poly_divmod(d, g)
            _, n = poly_divmod(n, d)
            if not n:
                return QtModElem.zero()
        lead = d[-1]
        d = [x / lead for x in d]
        n = [x / lead for x in n]
        if len(d) == 1:
            return QtModElem.zero()
        return QtModElem(tuple(n), tuple(d))

    @staticmethod
    def from_laurent(p: LaurentPoly):
        return QtModElem.from_fraction(p, LaurentPoly.const(1))

    def is_zero(self):
        return not self.num

    def __add__(self, o):
        n = poly_add(poly_mul(list(self.num), list(o.den)),
                     poly_mul(list(o.num), list(self.den)))
        d = poly_mul(list(self.den), list(o.den))
        return QtModElem.from_fraction(LaurentPoly.from_dense(0, n),
                                       LaurentPoly.from_dense(0, d))

    def __neg__(self):
        return QtModElem(tuple(-x for x in self.num), self.den)

    def __sub__(self, o):
        return self + (-o)

    def scale(self, p: LaurentPoly):
        """Module action of Q[t,t^-1]."""
        v, dn = p.dense()
        n = poly_mul(list(self.num), dn)
        return QtModElem.from_fraction(LaurentPoly.from_dense(v, n),
                                       LaurentPoly.from_dense(0, list(self.den)))

    def conj(self):
        """t -> t^-1."""
        n = LaurentPoly.from_dense(0, list(self.num)).conj()
        d = LaurentPoly.from_dense(0, list(self.den)).conj()
        return QtModElem.from_fraction(n, d)

    def __repr__(self):
        if self.is_zero():
            return "0"
        n = LaurentPoly.from_dense(0, list(self.num))
        d = LaurentPoly.from_dense(0, list(self.den))
        return f"({n})/({d})"


def poly_pow(p, k):
    out = [Fraction(1)]
    for _ in range(k):
        out = poly_mul(out, p)
    return out


def laurent_mod_coords(p: LaurentPoly, order: LaurentPoly):
    """Coordinates of p modulo the polynomial `order` (nonzero constant
    term) in the power basis 1, t, ..., t^{deg-1}; t^-1 is folded in via
    the inverse of t mod order."""
    ov, od = order.dense()
    if ov != 0 or not od or od[0] == 0:
        raise ValueError("order must be a polynomial with nonzero constant term")
    deg = len(od) - 1
    pv, pd = p.dense()
    if not pd:
        return [Fraction(0)] * deg
    g, u, _ = poly_xgcd([Fraction(0), Fraction(1)], od)
    tinv = [x / g[0] for x in u]
    cur = [Fraction(x) for x in pd]
    if pv > 0:
        cur = poly_mul(cur, poly_pow([Fraction(0), Fraction(1)], pv))
    elif pv < 0:
        cur = poly_mul(cur, poly_pow(tinv, -pv))
    _, rem = poly_divmod(cur, od)
    rem = list(rem) + [Fraction(0)] * deg
    return rem[:deg]
