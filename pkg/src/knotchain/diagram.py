"""Oriented knot diagrams from PD codes, and the combinatorial data the
chain-complex builders need: crossing numbering along over-strands, signs,
writhe, the quadrilateral (dual) decomposition, and connecting paths in its
1-skeleton chosen so that the product of conjugated relators is an identity
of the Wirtinger presentation.

Conventions.  A PD crossing is a tuple (a, b, c, d) listing the four
incident arcs counterclockwise from the incoming under-arc; the under
strand runs a -> c and the over strand occupies b, d.  With 2c arcs
numbered consecutively along the knot, the crossing sign is +1 when the
over strand runs d -> b and -1 when it runs b -> d.  Generators correspond
to the c amalgamated 1-handles, i.e. to the stretches of the knot between
consecutive over-passes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .words import Word


class DiagramError(ValueError):
    pass


UNKNOT_TOKENS = {"unknot", "0_1", "u"}

# slot layout: 0 = incoming under (south), then counterclockwise 1, 2, 3.
# corner k sits between slot k and slot k+1 (mod 4).


@dataclass(frozen=True)
class CrossingData:
    index: int  # 1..c, numbered along over-strand traversal
    sign: int  # +1 or -1
    labels: tuple  # (i1, i2, i3): under handle, downstream over, upstream over
    arcs: tuple  # (a, b, c, d) in normalized arc numbers


@dataclass
class QuadDecomposition:
    """Dual graph of the diagram: one vertex per region, one edge per arc,
    one quadrilateral face per crossing."""

    n_vertices: int
    # per arc e (1..2c): (tail region, head region), oriented across the knot
    edges: dict
    edge_label: dict  # arc -> generator index
    # per crossing 1..c: list of (arc, dir) reading the relator r_i from v_i
    face_paths: dict
    base_vertices: dict  # crossing -> v_i (head of the g_{i2} dual edge)
    region_corners: dict  # region -> list of (crossing, corner) witnesses

    @property
    def n_edges(self):
        return len(self.edges)

    @property
    def n_faces(self):
        return len(self.face_paths)

    def euler_characteristic(self):
        return self.n_vertices - self.n_edges + self.n_faces


@dataclass
class Diagram:
    n: int  # number of crossings; 0 for the unknot sentinel
    crossings: list = field(default_factory=list)  # CrossingData, index order
    name: str = ""
    base_region: int | None = None  # optional override for v_1
    base_region_used: int | None = None  # recorded by connecting_paths
    # traversal bookkeeping (normalized arcs 1..2n)
    events: list = field(default_factory=list)  # events[i] at end of arc i+1
    seg_of_arc: dict = field(default_factory=dict)  # arc -> generator
    _regions: dict | None = None

    @property
    def is_unknot(self):
        return self.n == 0

    def sign(self, i):
        return self.crossings[i - 1].sign

    def labels(self, i):
        return self.crossings[i - 1].labels

    def writhe(self):
        return sum(x.sign for x in self.crossings)

    def mirror(self):
        return Diagram.from_pd(mirror_pd(self.pd_tuples()), name=self.name + "!")

    def pd_tuples(self):
        return [x.arcs for x in self.crossings]

    @staticmethod
    def unknot(name="unknot"):
        return Diagram(0, [], name=name)

    @staticmethod
    def from_pd(pd, name="", base_region=None):
        return _build_diagram(pd, name=name, base_region=base_region)

    @staticmethod
    def from_gauss(tokens, signs, name="", base_region=None):
        pd = gauss_to_pd(tokens, signs)
        return _build_diagram(pd, name=name, base_region=base_region)


def _wrap(x, m):
    return ((x - 1) % m) + 1


def parse_pd_text(text):
    """Parse 'X[1,4,2,5] X[3,6,4,1] ...' or bare tuple lists."""
    cleaned = text.replace("X[", "[").replace("PD[", "[").strip()
    cleaned = cleaned.replace("(", "[").replace(")", "]")
    tuples, depth, cur = [], 0, ""
    for ch in cleaned:
        if ch == "[":
            depth += 1
            if depth == 1:
                cur = ""
                continue
        if ch == "]":
            depth -= 1
            if depth == 0:
                parts = [p for p in cur.replace(";", ",").split(",") if p.strip()]
                tuples.append(tuple(int(p) for p in parts))
                continue
        if depth >= 1:
            cur += ch
    if not tuples:
        raise DiagramError(f"no PD crossings found in {text!r}")
    return tuples


def _crossing_sign(tup, m):
    a, b, c, d = tup
    if c != _wrap(a + 1, m):
        raise DiagramError(f"under strand of {tup} is not consecutive mod {m}")
    if b == _wrap(d + 1, m):
        return 1
    if d == _wrap(b + 1, m):
        return -1
    raise DiagramError(f"over strand of {tup} is not consecutive mod {m}")


def _build_diagram(pd, name="", base_region=None):
    pd = [tuple(t) for t in pd]
    c = len(pd)
    if c < 3:
        raise DiagramError(
            f"{c} crossings: need >= 3 (use the unknot sentinel for the unknot)")
    m = 2 * c
    for t in pd:
        if len(t) != 4:
            raise DiagramError(f"crossing {t} is not a 4-tuple")
    counts = {}
    for t in pd:
        for x in t:
            if not 1 <= x <= m:
                raise DiagramError(f"arc label {x} outside 1..{m}")
            counts[x] = counts.get(x, 0) + 1
    bad = {x for x in range(1, m + 1) if counts.get(x, 0) != 2}
    if bad:
        raise DiagramError(f"arcs {sorted(bad)} do not appear exactly twice")

    signs = {}
    for idx, t in enumerate(pd):
        signs[idx] = _crossing_sign(t, m)

    # incoming slots: under-in at slot 0; over-in at slot 3 (sign +) / 1 (sign -)
    incoming = {}  # arc -> (pd index, slot)
    for idx, t in enumerate(pd):
        a, b, _, d = t
        over_in = d if signs[idx] == 1 else b
        for arc, slot in ((a, 0), (over_in, 3 if signs[idx] == 1 else 1)):
            if arc in incoming:
                raise DiagramError(
                    f"arc {arc} enters two crossings; not a single knot traversal")
            incoming[arc] = (idx, slot)

    if set(incoming) != set(range(1, m + 1)):
        raise DiagramError("arc labels do not chain into a single knot component")

    # events[i]: the passage at the end of arc i+1
    events = []
    for arc in range(1, m + 1):
        idx, slot = incoming[arc]
        events.append(("U" if slot == 0 else "O", idx))

    if sum(1 for k, _ in events if k == "O") != c:
        raise DiagramError("over/under passes unbalanced; not a knot diagram")

    # crossing numbering: in order of over-pass, starting from arc 1
    number = {}
    for kind, idx in events:
        if kind == "O" and idx not in number:
            number[idx] = len(number) + 1
    if len(number) != c:
        raise DiagramError("some crossing is never passed over; invalid diagram")

    pos_over = {}  # crossing number -> arc ending at its over-pass
    pos_under = {}
    for arc0, (kind, idx) in enumerate(events):
        if kind == "O":
            pos_over[number[idx]] = arc0 + 1
        else:
            pos_under[number[idx]] = arc0 + 1

    # segment j starts just after the over-pass of crossing j
    seg_of_arc = {}
    for j in range(1, c + 1):
        nxt = j % c + 1
        arc = _wrap(pos_over[j] + 1, m)
        stop = pos_over[nxt]
        while True:
            seg_of_arc[arc] = j
            if arc == stop:
                break
            arc = _wrap(arc + 1, m)
    if len(seg_of_arc) != m:
        raise DiagramError("segments do not cover all arcs")

    seg_under = {j: seg_of_arc[pos_under[j]] for j in range(1, c + 1)}

    # generator naming: g1 over the under-strand of crossing 1, g2 and g3
    # over the over-strand of crossing 1 (downstream resp. upstream)
    gname = {}

    def _assign(seg, nm):
        if seg not in gname:
            gname[seg] = nm
            return True
        return False

    next_free = 1
    for seg, want in ((seg_under[1], 1), (1, 2), (c, 3)):
        _assign(seg, want)
    used = set(gname.values())
    next_free = 1
    for j in range(1, c + 1):
        if j in gname:
            continue
        while next_free in used:
            next_free += 1
        gname[j] = next_free
        used.add(next_free)

    crossings = []
    for idx, t in enumerate(pd):
        i = number[idx]
        i1 = gname[seg_under[i]]
        i2 = gname[i]
        i3 = gname[i - 1 if i > 1 else c]
        crossings.append(CrossingData(i, signs[idx], (i1, i2, i3), t))
    crossings.sort(key=lambda x: x.index)

    d = Diagram(c, crossings, name=name, base_region=base_region,
                events=events,
                seg_of_arc={a: gname[s] for a, s in seg_of_arc.items()})
    regions(d)  # force planarity validation
    return d


def parse_pd(text, name="", base_region=None):
    """Parse a PD code string into a validated diagram."""
    return parse_diagram(text, name=name, base_region=base_region)


def parse_diagram(spec, name="", base_region=None):
    """Accept an unknot token, PD text, PD tuple list, or dict."""
    if isinstance(spec, str):
        if spec.strip().lower() in UNKNOT_TOKENS:
            return Diagram.unknot(name=name or spec.strip())
        return Diagram.from_pd(parse_pd_text(spec), name=name,
                               base_region=base_region)
    if isinstance(spec, dict):
        nm = spec.get("name", name)
        br = spec.get("base_region", base_region)
        if "pd" in spec:
            return Diagram.from_pd(spec["pd"], name=nm, base_region=br)
        if "gauss" in spec:
            toks, sgns = parse_gauss_text(spec["gauss"])
            return Diagram.from_gauss(toks, sgns, name=nm, base_region=br)
        raise DiagramError("diagram dict needs a 'pd' or 'gauss' key")
    return Diagram.from_pd(spec, name=name, base_region=base_region)


# ---------------------------------------------------------------------------
# Gauss codes.  Format: tokens like "O1+ U2+ O3- U1+ ..." giving the passage
# sequence with crossing signs; over/under letter, crossing number, sign.


def parse_gauss_text(text):
    tokens, signs = [], {}
    for tok in text.replace(",", " ").split():
        tok = tok.strip()
        kind = tok[0].upper()
        if kind not in "OU":
            raise DiagramError(f"bad gauss token {tok!r}")
        body = tok[1:]
        sign = 1
        if body.endswith("+"):
            body = body[:-1]
        elif body.endswith("-"):
            sign = -1
            body = body[:-1]
        k = int(body)
        tokens.append((kind, k))
        if k in signs and signs[k] != sign:
            raise DiagramError(f"inconsistent signs for crossing {k}")
        signs[k] = sign
    return tokens, signs


def gauss_to_pd(tokens, signs):
    """Rebuild PD tuples from a passage sequence plus crossing signs.

    Planarity is *not* guaranteed by the code itself; the diagram builder
    validates it via the region count.
    """
    m = len(tokens)
    if m % 2:
        raise DiagramError("odd number of passages")
    under_in, under_out, over_in, over_out = {}, {}, {}, {}
    for i, (kind, k) in enumerate(tokens):
        arc_in, arc_out = i + 1, _wrap(i + 2, m)
        if kind == "U":
            if k in under_in:
                raise DiagramError(f"crossing {k} passed under twice")
            under_in[k], under_out[k] = arc_in, arc_out
        else:
            if k in over_in:
                raise DiagramError(f"crossing {k} passed over twice")
            over_in[k], over_out[k] = arc_in, arc_out
    ks = sorted(under_in)
    if ks != sorted(over_in):
        raise DiagramError("over/under passes do not match up")
    pd = []
    for k in ks:
        a, c = under_in[k], under_out[k]
        if signs.get(k, 1) == 1:
            b, d = over_out[k], over_in[k]
        else:
            b, d = over_in[k], over_out[k]
        pd.append((a, b, c, d))
    return pd


# ---------------------------------------------------------------------------
# Families and composites.


def pretzel_pd(p, q, r):
    """PD code of the (p,q,r)-pretzel with positive twist counts.

    P(1,1,1) is a trefoil, P(2j+1,1,1) the odd twist knots (k = -(j+1) in
    the Seifert family) and P(2j,1,1) the even ones (k = j).  Generated by
    walking the standard three-band picture; the walk must close into a
    single component, and validity is re-checked downstream (planarity,
    reducedness).
    """
    bands = [p, q, r]
    if any(x <= 0 for x in bands):
        raise DiagramError("pretzel generator wants positive entries")
    # ports: ('T'|'B', band) band ends, or (band, row, 'NW'|'NE'|'SW'|'SE')
    # each crossing swaps NW<->SE and NE<->SW; the NW->SE strand goes over.
    nxt = {}

    def link(x, y):
        nxt[x] = y
        nxt[y] = x

    for i, n in enumerate(bands):
        for j in range(n - 1):
            link((i, j, "SW"), (i, j + 1, "NW"))
            link((i, j, "SE"), (i, j + 1, "NE"))
    # closures: top: L1~outer~R3, R1~L2, R2~L3; same below
    tops = [((i, 0, "NW"), (i, 0, "NE")) for i in range(3)]
    bots = [((i, bands[i] - 1, "SW"), (i, bands[i] - 1, "SE")) for i in range(3)]
    link(tops[0][1], tops[1][0])
    link(tops[1][1], tops[2][0])
    link(tops[2][1], tops[0][0])
    link(bots[0][1], bots[1][0])
    link(bots[1][1], bots[2][0])
    link(bots[2][1], bots[0][0])

    through = {"NW": "SE", "SE": "NW", "NE": "SW", "SW": "NE"}
    # walk the knot: start heading into band 0 row 0 at NW
    start = (0, 0, "NW")
    events = []  # (crossing id, entry port)
    port, seen = start, 0
    total = sum(bands)
    while True:
        band, row, corner = port
        events.append(((band, row), corner))
        out = (band, row, through[corner])
        port = nxt[out]
        seen += 1
        if port == start:
            break
        if seen > 4 * total:
            raise DiagramError("pretzel walk did not close up")
    if len(events) != 2 * total:
        raise DiagramError(f"pretzel P({p},{q},{r}) is not a knot "
                           "(walk closed early)")

    # arcs: arc i ends at events[i]; slots per *entry* corner:
    # under passes enter at NE or SW (the NE<->SW strand goes under)
    arc_at = {}
    for i, (cr, corner) in enumerate(events):
        arc_at[(cr, corner)] = i + 1
    m = 2 * total
    pd = []
    for i, n in enumerate(bands):
        for j in range(n):
            cr = (i, j)
            # entry arcs; exit arc = entry arc + 1 at the swapped corner
            a_in = arc_at[(cr, "NE")] if (cr, "NE") in arc_at else arc_at[(cr, "SW")]
            u_in = "NE" if (cr, "NE") in arc_at else "SW"
            o_in = "NW" if (cr, "NW") in arc_at else "SE"
            b_in = arc_at[(cr, o_in)]
            a, c = a_in, _wrap(a_in + 1, m)
            bb, dd = b_in, _wrap(b_in + 1, m)
            # ccw slot order around a crossing: NW, SW, SE, NE
            ccw = ["NW", "SW", "SE", "NE"]
            u_out = through[u_in]
            o_out = through[o_in]
            arcs = {u_in: a, u_out: c, o_in: bb, o_out: dd}
            k = ccw.index(u_in)
            order = [arcs[ccw[(k + t) % 4]] for t in range(4)]
            pd.append(tuple(order))
    return pd


def pd_connected_sum(pd1, pd2):
    """PD code of the connected sum, by splicing the traversals."""
    d1 = _build_diagram(pd1)
    d2 = _build_diagram(pd2)
    ev = [(k, ("A", i)) for k, i in d1.events] + [(k, ("B", i)) for k, i in d2.events]
    signs = {("A", i): _crossing_sign(t, 2 * d1.n) for i, t in enumerate(pd1)}
    signs.update({("B", i): _crossing_sign(t, 2 * d2.n) for i, t in enumerate(pd2)})
    keys = []
    for k, c in ev:
        if c not in keys:
            keys.append(c)
    renum = {c: i + 1 for i, c in enumerate(keys)}
    tokens = [("O" if k == "O" else "U", renum[c]) for k, c in ev]
    return gauss_to_pd(tokens, {renum[c]: s for c, s in signs.items()})


def mirror_pd(pd):
    """Swap over and under strands everywhere (mirror image)."""
    m = 2 * len(pd)
    out = []
    for t in pd:
        sign = _crossing_sign(t, m)
        a, b, c, d = t
        out.append((d, a, b, c) if sign == 1 else (b, c, d, a))
    return out


# ---------------------------------------------------------------------------
# Regions and the quadrilateral decomposition.


def regions(d):
    """Trace the complementary regions; returns {(pd_index, corner): region}.

    Face walk: entering a crossing through slot s, the region on the left
    is corner (s-1) mod 4 and the walk exits through slot (s-1) mod 4.
    """
    if d._regions is not None:
        return d._regions
    pd = d.pd_tuples()
    c = d.n
    m = 2 * c
    # slot arcs per crossing and whether the arc at a slot points in or out
    slot_arc, slot_dir = {}, {}
    for i, x in enumerate(d.crossings):
        a, b, cc, dd = x.arcs
        over_in = dd if x.sign == 1 else b
        over_out = b if x.sign == 1 else dd
        for s, arc in enumerate((a, b, cc, dd)):
            slot_arc[(i, s)] = arc
            if arc == a and s == 0:
                slot_dir[(i, s)] = "in"
            elif arc == cc and s == 2:
                slot_dir[(i, s)] = "out"
            else:
                slot_dir[(i, s)] = "in" if arc == over_in else "out"
    # the other end of the arc incident at (i, s)
    ends = {}
    for key, arc in slot_arc.items():
        ends.setdefault(arc, []).append(key)
    for arc, ks in ends.items():
        if len(ks) != 2:
            raise DiagramError(f"arc {arc} has {len(ks)} ends")

    def other(key):
        a, b = ends[slot_arc[key]]
        return b if key == a else a

    region_of = {}
    rid = 0
    for i in range(c):
        for s in range(4):
            if (i, (s - 1) % 4) in region_of:
                continue
            # walk a face: state = entering slot s at crossing i
            cur = (i, s)
            # ensure 'cur' really is an entering end; if not, walk anyway --
            # the dart structure is symmetric, we just trace corners
            start = cur
            while True:
                ci, si = cur
                corner = (si - 1) % 4
                if (ci, corner) in region_of:
                    if region_of[(ci, corner)] != rid:
                        raise DiagramError("inconsistent region trace")
                    break
                region_of[(ci, corner)] = rid
                cur = other((ci, (si - 1) % 4))
                if cur == start:
                    break
            rid += 1
    # every corner assigned
    if len(region_of) != 4 * c:
        raise DiagramError("region trace missed corners; diagram not planar?")
    n_regions = len(set(region_of.values()))
    if n_regions - m + c != 2:
        raise DiagramError(
            f"Euler check failed: V-E+F = {n_regions}-{m}+{c} != 2; "
            "code is not realizable as a planar knot diagram")
    d._regions = region_of
    return region_of


def is_reduced(d):
    """No region abuts itself at a crossing: all four corner regions differ."""
    if d.is_unknot:
        return True
    reg = regions(d)
    for i in range(d.n):
        rs = {reg[(i, k)] for k in range(4)}
        if len(rs) != 4:
            return False
    return True


def quad_decomposition(d):
    """Dual decomposition with oriented, generator-labelled edges.

    Edge for arc e runs from the region left of e to the region right of e;
    the base vertex v_i of the quadrilateral at crossing i is the head of
    the edge dual to the downstream over-arc, and the face boundary read
    from v_i spells the Wirtinger relator r_i.
    """
    if d.is_unknot:
        raise DiagramError("the unknot sentinel has no quadrilateral decomposition")
    if not is_reduced(d):
        raise DiagramError("diagram is not reduced")
    reg = regions(d)
    pdidx = {x.index: i for i, x in enumerate(d.crossings)}
    edges, labels = {}, {}
    face_paths, base_vertices = {}, {}

    def put_edge(arc, tail, head):
        if arc in edges and edges[arc] != (tail, head):
            raise DiagramError(f"dual edge of arc {arc} oriented inconsistently")
        edges[arc] = (tail, head)
        labels[arc] = d.seg_of_arc[arc]

    for x in d.crossings:
        i = pdidx[x.index]
        a, b, cc, dd = x.arcs
        # corners: 0=SE (slots 0-1), 1=NE, 2=NW, 3=SW
        SE, NE, NW, SW = (reg[(i, 0)], reg[(i, 1)], reg[(i, 2)], reg[(i, 3)])
        # duals of the four incident arcs, oriented left -> right
        put_edge(a, SW, SE)
        put_edge(cc, NW, NE)
        if x.sign == 1:
            put_edge(dd, NW, SW)   # incoming over
            put_edge(b, NE, SE)    # outgoing over
            base_vertices[x.index] = SE
            face_paths[x.index] = [(b, -1), (cc, -1), (dd, 1), (a, 1)]
        else:
            put_edge(b, SE, NE)    # incoming over
            put_edge(dd, SW, NW)   # outgoing over
            base_vertices[x.index] = NW
            face_paths[x.index] = [(dd, -1), (a, 1), (b, 1), (cc, -1)]
    n_regions = len(set(reg.values()))
    corners = {}
    for (i, k), r in reg.items():
        corners.setdefault(r, []).append((d.crossings[i].index, k))
    q = QuadDecomposition(n_regions, edges, labels, face_paths, base_vertices,
                          corners)
    # sanity: each face path closes up through matching vertices
    for i, path in q.face_paths.items():
        v = q.base_vertices[i]
        cur = v
        for e, dr in path:
            t, h = q.edges[e]
            if dr == 1:
                if cur != t:
                    raise DiagramError(f"face {i} path broken at edge {e}")
                cur = h
            else:
                if cur != h:
                    raise DiagramError(f"face {i} path broken at edge {e}")
                cur = t
        if cur != v:
            raise DiagramError(f"face {i} path does not close")
    return q


# ---------------------------------------------------------------------------
# Connecting paths: build the identity s_o by splicing the quadrilaterals of
# the dual sphere one at a time, so the ordered product of conjugated
# relators freely reduces to 1.


def _path_word(q, path):
    w = Word()
    for e, dr in path:
        w = w * Word.gen(q.edge_label[e], dr)
    return w


def _reduce_path(path):
    out = []
    for step in path:
        if out and out[-1][0] == step[0] and out[-1][1] == -step[1]:
            out.pop()
        else:
            out.append(step)
    return out


def _bfs_path(q, src, dst):
    if src == dst:
        return []
    from collections import deque
    prev = {src: None}
    dq = deque([src])
    adj = {}
    for e, (t, h) in q.edges.items():
        adj.setdefault(t, []).append((e, 1, h))
        adj.setdefault(h, []).append((e, -1, t))
    for v in adj:
        adj[v].sort()
    while dq:
        v = dq.popleft()
        if v == dst:
            break
        for e, dr, w in adj.get(v, []):
            if w not in prev:
                prev[w] = (v, e, dr)
                dq.append(w)
    if dst not in prev:
        raise DiagramError("dual 1-skeleton is disconnected")
    path = []
    v = dst
    while prev[v] is not None:
        u, e, dr = prev[v]
        path.append((e, dr))
        v = u
    return list(reversed(path))


def _relator_word(q, i):
    return _path_word(q, q.face_paths[i])


def _product_reduces(q, factors):
    w = Word()
    for conj, i in factors:
        w = w * conj * _relator_word(q, i) * conj.inverse()
    return w.is_identity()


def _shortest_path_words(q, src, targets, cap=8):
    """All minimal-length dual-skeleton path words src -> t, per target."""
    adj = {}
    for e, (t, h) in sorted(q.edges.items()):
        adj.setdefault(t, []).append((q.edge_label[e], 1, h))
        adj.setdefault(h, []).append((q.edge_label[e], -1, t))
    for v in adj:
        adj[v].sort(key=lambda x: (x[0], -x[1]))
    from collections import deque
    dist = {src: 0}
    dq = deque([src])
    while dq:
        v = dq.popleft()
        for _, _, wv in adj.get(v, []):
            if wv not in dist:
                dist[wv] = dist[v] + 1
                dq.append(wv)
    out = {}
    for t in targets:
        if t not in dist:
            return None
        paths = []

        def back2(v, acc):
            if len(paths) >= cap:
                return
            if v == src:
                paths.append(Word.from_letters(reversed(acc)))
                return
            for lab, dr, u in adj.get(v, []):
                # edge between v and u read v -> u with (lab, dr); reading
                # u -> v is (lab, -dr)
                if dist.get(u, -2) == dist[v] - 1:
                    back2(u, acc + [(lab, -dr)])

        back2(t, [])
        seen, uniq = set(), []
        for p in paths:
            if p.letters not in seen:
                seen.add(p.letters)
                uniq.append(p)
        out[t] = uniq
    return out


def _canonical_identity(d, q, v1, node_cap=20000):
    """Search for an identity built from minimal-length connecting words."""
    targets = [q.base_vertices[i] for i in sorted(q.face_paths)]
    cands = _shortest_path_words(q, v1, set(targets))
    if cands is None:
        return None
    per_face = {i: cands[q.base_vertices[i]] for i in sorted(q.face_paths)}
    rel = {i: _relator_word(q, i) for i in q.face_paths}
    budget = 4 * d.n + 4
    counter = [0]

    def dfs(used, prod, chosen):
        if counter[0] > node_cap:
            return None
        if len(used) == d.n:
            return chosen if prod.is_identity() else None
        options = []
        for i in sorted(per_face):
            if i in used:
                continue
            for w in per_face[i]:
                nxt = prod * w * rel[i] * w.inverse()
                if nxt.length() <= budget:
                    options.append((nxt.length(), i, w.letters, nxt, w))
        options.sort(key=lambda o: (o[0], o[1], o[2]))
        for _, i, _, nxt, w in options:
            counter[0] += 1
            res = dfs(used | {i}, nxt, chosen + [(w, i)])
            if res is not None:
                return res
        return None

    return dfs(frozenset(), Word(), [])


def choose_base_region(d, q, canonical=True):
    """The base vertex minimizing the total length of the connecting
    words (ties by region id); the paper allows any choice here and uses a
    central vertex for its symmetric example."""
    best = None
    if canonical:
        for cand in range(q.n_vertices):
            res = _canonical_identity(d, q, cand, node_cap=4000)
            if res is not None:
                total = sum(w.length() for w, _ in res)
                if best is None or total < best[0]:
                    best = (total, cand)
    return best[1] if best is not None else q.base_vertices[1]


def connecting_paths(d, q=None, base_region=None, canonical=True):
    """Connecting words w_i and the ordered identity data for s_o.

    Returns (order, words, factors) where order is the attachment order of
    the crossings, words[i] is w_i for crossing i, and factors is the
    ordered list of (conjugator word, crossing) whose product of conjugated
    relators freely reduces to 1.  With base_region None a base vertex
    minimizing the total length of the w_i is chosen (ties by region id);
    the paper allows any vertex here.
    """
    if q is None:
        q = quad_decomposition(d)
    v1 = base_region if base_region is not None else d.base_region
    if v1 is None:
        v1 = choose_base_region(d, q, canonical=canonical)
        return connecting_paths(d, q, base_region=v1, canonical=canonical)
    d.base_region_used = v1

    if canonical:
        res = _canonical_identity(d, q, v1)
        if res is not None:
            factors = res
            words = {i: w for w, i in factors}
            order = [i for _, i in factors]
            return order, words, factors

    faces = {i: list(q.face_paths[i]) for i in q.face_paths}

    def attempt(first):
        used = [first]
        w0 = _bfs_path(q, v1, q.base_vertices[first])
        factors = [(w0, first)]
        boundary = _reduce_path(w0 + faces[first] + [(e, -dr) for e, dr in reversed(w0)])
        words = {first: w0}
        while len(used) < len(faces):
            progressed = False
            for i in sorted(faces):
                if i in used:
                    continue
                cyc = faces[i]
                hit = None
                for pos, (e, dr) in enumerate(boundary):
                    for fpos, (fe, fdr) in enumerate(cyc):
                        if fe == e and fdr == -dr:
                            hit = (pos, fpos)
                            break
                    if hit:
                        break
                if hit is None:
                    continue
                pos, fpos = hit
                x, step, y = boundary[:pos], boundary[pos], boundary[pos + 1:]
                rot = cyc[fpos:] + cyc[:fpos]  # starts with the reversed edge
                z = rot[1:]
                alpha = cyc[:fpos]  # path v_i -> splice vertex
                conj = [(e2, -d2) for e2, d2 in reversed(y)] + \
                       [(e2, -d2) for e2, d2 in reversed(alpha)]
                factors.append((_reduce_path(conj), i))
                words[i] = _reduce_path(conj)
                boundary = _reduce_path(x + z + y)
                used.append(i)
                progressed = True
                break
            if not progressed:
                return None
        if boundary:
            return None
        return used, words, factors

    for first in sorted(faces):
        res = attempt(first)
        if res is not None:
            used, words, factors = res
            word_map = {i: _path_word(q, words[i]) for i in words}
            factor_words = [(_path_word(q, p), i) for p, i in factors]
            return used, word_map, factor_words
    raise DiagramError(
        "no splice order closed the dual sphere; conventions bug")
