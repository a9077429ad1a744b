"""Oriented decorated graphs as signed monomial words.

A DecoratedGraph stores one generator word: decorations in list order, then
edges in list order, then one marker of degree -d per internal vertex in
label order.  All sign bookkeeping reduces to Koszul signs on that degree
sequence plus the edge reversal relation (u,v) -> (v,u) costing (-1)^d.

Internal vertices are labeled 1..n; external vertices carry negative int
labels (or tokens at the gra layer, mapped to negatives before kernel calls).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from gcx import kernels
from gcx.pairing import format_fraction


class GraphError(ValueError):
    pass


def koszul_sign(perm, degrees):
    """Sign of rearranging graded letters; see kernels.koszul_sign."""
    return kernels.koszul_sign(tuple(perm), tuple(degrees))


@dataclass(frozen=True)
class DecoratedGraph:
    """One oriented decorated-graph generator (not necessarily canonical).

    Construction is unchecked (hot loops build millions); use
    validate_graph() at input boundaries.
    """

    d: int
    n: int  # internal vertices labeled 1..n
    ext: tuple  # sorted tuple of external labels (negative ints)
    edges: tuple  # ((u, v), ...) in orientation order
    decs: tuple  # ((vertex, label_index), ...) in orientation order

    def key(self):
        return (self.n, self.ext, self.edges, self.decs)

    def is_vacuum(self):
        return not self.ext

    def __str__(self):
        bits = ["n=%d" % self.n]
        if self.ext:
            bits.append("ext=%s" % (list(self.ext),))
        bits.append("edges=%s" % (list(self.edges),))
        bits.append("dec=%s" % (list(self.decs),))
        return "G(" + " ".join(bits) + ")"


def validate_graph(space, g):
    """Check label ranges and decoration legality; raises GraphError."""
    for (u, v) in g.edges:
        for x in (u, v):
            if x == 0 or (x > 0 and x > g.n) or (x < 0 and x not in g.ext):
                raise GraphError("edge endpoint %r out of range" % (x,))
    for (v, lab) in g.decs:
        if v == 0 or (v > 0 and v > g.n) or (v < 0 and v not in g.ext):
            raise GraphError("decoration vertex %r out of range" % (v,))
        if not (0 <= lab < space.dim) or lab == space.unit_index:
            raise GraphError("decoration label %d not in the reduced part" % lab)
    return g


def vertex(d, labs=()):
    """Single internal vertex with the given decoration label indices."""
    return DecoratedGraph(d, 1, (), (), tuple((1, lab) for lab in labs))


def graph_degree(space, g):
    """sum of decoration degrees + (d-1)#edges - d#internal vertices."""
    s = sum(space.degrees[lab] for (_v, lab) in g.decs)
    return s + (g.d - 1) * len(g.edges) - g.d * g.n


def filtration_weight(space, g):
    """d * #edges + homological decoration count + #vertices."""
    s = sum(space.decoration_weight_of(lab) for (_v, lab) in g.decs)
    return g.d * len(g.edges) + s + g.n + len(g.ext)


def _dec_degrees(space, g):
    return tuple(space.degrees[lab] for (_v, lab) in g.decs)


CANON_CACHE_CAP = 1500000  # entries; bounded so long sweeps stay in memory


def is_connected(g):
    """Connectivity over internal vertices (vacuum graphs)."""
    if g.n == 0:
        return False
    parent = list(range(g.n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (u, v) in g.edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
    return len({find(v) for v in range(1, g.n + 1)}) == 1


def canonicalize(space, g):
    """Canonical labeled representative with the relating sign, or None.

    Returns (graph, sign) with element(g) == sign * element(graph); None when
    the isomorphism class is zero (orientation-reversing automorphism, which
    covers tadpoles for odd d and repeated edges for even d).
    """
    try:
        cache = space._cache["canon"]
    except KeyError:
        cache = space._cache["canon"] = {}
    ck = g.key()
    hit = cache.get(ck)
    if hit is not None:
        return hit or None
    if len(cache) >= CANON_CACHE_CAP:
        cache.clear()
    for (_v, lab) in g.decs:
        if lab == space.unit_index or not (0 <= lab < space.dim):
            raise GraphError("decoration label %d not in the reduced part" % lab)
    res = kernels.canonical_search(g.d, g.n, g.edges, g.decs, _dec_degrees(space, g))
    if res is None:
        cache[ck] = 0
        return None
    edges_c, decs_c, sign = res
    cg = DecoratedGraph(g.d, g.n, g.ext, edges_c, decs_c)
    hit = (cg, sign)
    cache[ck] = hit
    cache.setdefault(cg.key(), (cg, 1))
    return hit


def connected_components(space, g):
    """Factor a vacuum graph into connected canonical components.

    Returns (components, sign): components are canonical graphs sorted by
    key, and element(g) == sign * product of components in that order (the
    sign is the Koszul unshuffle of the orientation word into blocks composed
    with each component's canonicalization sign).  The empty graph gives
    ([], +1).
    """
    if g.ext:
        raise GraphError("component factorization is defined for vacuum graphs")
    if g.n == 0:
        return [], 1
    parent = list(range(g.n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (u, v) in g.edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
    comp_of = {v: find(v) for v in range(1, g.n + 1)}
    roots = sorted(set(comp_of.values()))
    if len(roots) == 1:
        res = canonicalize(space, g)
        if res is None:
            return None
        return [res[0]], res[1]

    # assign each orientation-word letter to its component block
    dec_degs = _dec_degrees(space, g)
    letters = []  # (component_root, degree, payload)
    for idx, (v, lab) in enumerate(g.decs):
        letters.append((comp_of[v], dec_degs[idx], ("dec", v, lab)))
    for (u, v) in g.edges:
        letters.append((comp_of[u], g.d - 1, ("edge", u, v)))
    for v in range(1, g.n + 1):
        letters.append((comp_of[v], -g.d, ("vert", v)))

    # raw per-component subgraphs with order-preserving relabeling 1..n_i
    pieces = {}
    for r in roots:
        verts = sorted(v for v in range(1, g.n + 1) if comp_of[v] == r)
        ren = {v: i + 1 for i, v in enumerate(verts)}
        edges = tuple((ren[u], ren[v]) for (u, v) in g.edges if comp_of[u] == r)
        decs = tuple((ren[v], lab) for (v, lab) in g.decs if comp_of[v] == r)
        pieces[r] = DecoratedGraph(g.d, len(verts), (), edges, decs)

    canon = {}
    total_sign = 1
    for r in roots:
        res = canonicalize(space, pieces[r])
        if res is None:
            return None
        canon[r] = res[0]
        total_sign *= res[1]

    block_order = sorted(roots, key=lambda r: canon[r].key())
    # two equal components of odd degree square to zero
    for i in range(1, len(block_order)):
        a, b = canon[block_order[i - 1]], canon[block_order[i]]
        if a == b and (graph_degree(space, a) & 1):
            return None
    rank = {r: i for i, r in enumerate(block_order)}
    # Koszul sign of unshuffling the word into component blocks, stably
    order = kernels.stable_argsort(tuple(rank[c] for (c, _dg, _p) in letters))
    total_sign *= koszul_sign(order, tuple(dg for (_c, dg, _p) in letters))
    return [canon[r] for r in block_order], total_sign


WEIGHT_INF = 10 ** 8  # truncations at or above this skip the weight check


class GraphSum:
    """Finite rational combination of canonical graphs modulo F^{truncation+1}."""

    __slots__ = ("space", "truncation", "terms")

    def __init__(self, space, truncation, terms=None):
        self.space = space
        self.truncation = truncation
        self.terms = {}
        if terms:
            for g, c in terms.items():
                self.add_canonical(g, c)

    @classmethod
    def zero(cls, space, truncation):
        return cls(space, truncation)

    def copy(self):
        out = GraphSum(self.space, self.truncation)
        out.terms = dict(self.terms)
        return out

    def add_canonical(self, g, coeff):
        """Accumulate a term already known to be canonical."""
        if not coeff:
            return
        if self.truncation < WEIGHT_INF and filtration_weight(self.space, g) > self.truncation:
            return
        k = g.key()
        c = self.terms.get(k)
        if c is None:
            self.terms[k] = (g, Fraction(coeff))
        else:
            s = c[1] + coeff
            if s:
                self.terms[k] = (g, s)
            else:
                del self.terms[k]

    def add_raw(self, g, coeff):
        """Canonicalize a raw graph and accumulate (dropping zero classes)."""
        if not coeff:
            return
        res = canonicalize(self.space, g)
        if res is None:
            return
        cg, sign = res
        self.add_canonical(cg, sign * coeff)

    def add_sum(self, other, scale=1):
        if other.space is not self.space:
            raise GraphError("space mismatch")
        self.truncation = min(self.truncation, other.truncation)
        for (g, c) in other.terms.values():
            self.add_canonical(g, scale * c)

    def scaled(self, scale):
        out = GraphSum(self.space, self.truncation)
        if scale:
            for (g, c) in self.terms.values():
                out.add_canonical(g, c * scale)
        return out

    def items(self):
        """(graph, coeff) pairs in deterministic canonical order."""
        return [self.terms[k] for k in sorted(self.terms)]

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return (
            isinstance(other, GraphSum)
            and self.space is other.space
            and {k: v[1] for k, v in self.terms.items()}
            == {k: v[1] for k, v in other.terms.items()}
        )

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join("%s*%s" % (format_fraction(c), g) for (g, c) in self.items())


# -- graph term files ------------------------------------------------------


def format_term_line(space, g, coeff):
    edges = ",".join("(%d,%d)" % e for e in g.edges)
    decs = ",".join("(%d,%s)" % (v, space.labels[lab]) for (v, lab) in g.decs)
    return "coeff=%s d=%d n=%d edges=[%s] dec=[%s]" % (
        format_fraction(coeff),
        g.d,
        g.n,
        edges,
        decs,
    )


def write_terms(space, items, fh, truncation=None, osp_terms=None):
    """Write a graph term file; line order of edges/decs is the orientation."""
    if truncation is not None:
        fh.write("truncation=%d\n" % truncation)
    if osp_terms:
        parts = ",".join("(%s,%d)" % (format_fraction(c), idx) for (c, idx) in osp_terms)
        fh.write("osp=[%s]\n" % parts)
    for (g, c) in items:
        fh.write(format_term_line(space, g, c) + "\n")


def _parse_pairs(body):
    """Parse '(a,b),(c,d)' into a list of (str, str)."""
    out = []
    depth = 0
    cur = ""
    for ch in body:
        if ch == "(":
            depth += 1
            cur = ""
        elif ch == ")":
            depth -= 1
            a, b = cur.split(",")
            out.append((a.strip(), b.strip()))
        elif depth:
            cur += ch
    return out


def parse_term_line(space, line):
    fields = {}
    for part in line.split(" "):
        if "=" in part:
            k, v = part.split("=", 1)
            fields[k] = v
    try:
        coeff = Fraction(fields["coeff"])
        d = int(fields["d"])
        n = int(fields["n"])
    except (KeyError, ValueError) as e:
        raise GraphError("bad term line %r: %s" % (line, e)) from None
    if d != space.d:
        raise GraphError("term has d=%d but space has d=%d" % (d, space.d))
    edges = tuple((int(a), int(b)) for (a, b) in _parse_pairs(fields.get("edges", "[]")))
    decs = tuple((int(a), space.label_index(b)) for (a, b) in _parse_pairs(fields.get("dec", "[]")))
    ext = tuple(sorted({x for e in edges for x in e if x < 0} | {v for (v, _l) in decs if v < 0}))
    return DecoratedGraph(d, n, ext, edges, decs), coeff


def read_terms(space, fh, default_truncation=None):
    """Read a graph term file -> (GraphSum, osp_terms or None)."""
    truncation = default_truncation
    osp_terms = None
    raw = []
    for line in fh:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("truncation="):
            truncation = int(line.split("=", 1)[1])
            continue
        if line.startswith("osp="):
            osp_terms = [
                (Fraction(a), int(b)) for (a, b) in _parse_pairs(line.split("=", 1)[1])
            ]
            continue
        raw.append(parse_term_line(space, line))
    if truncation is None:
        raise GraphError("term file lacks a truncation= header")
    s = GraphSum(space, truncation)
    for (g, c) in raw:
        s.add_raw(g, c)
    return s, osp_terms
