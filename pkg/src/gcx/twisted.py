"""The twisted full graph complex and its extension by osp^{<0} duals.

Basis words are pairs (osp dual word | vacuum graph word).  The differential
has three pieces: edge splitting into the diagonal class, edge contraction
with the boundary-orientation signs, and the ortho-symplectic action on
decorations paired against dual generators.  The contraction signs implement

  (-1)^{sum|a_k| + (d-1)E1} * (-1)^{d(m+n+1)} * (-1)^{(d-1)l}

summed over the block of contractible edges l = 1..E2, where E1 holds the
tadpoles for even d and the members of repeated parallel classes for odd d.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from gcx import basis as basismod
from gcx import kernels
from gcx.graphs import (
    WEIGHT_INF,
    DecoratedGraph,
    GraphError,
    GraphSum,
    canonicalize,
    filtration_weight,
    graph_degree,
    koszul_sign,
)
from gcx.linalg import SparseMatQ

# Global sign of the quadratic Chevalley-Eilenberg piece on the osp block.
# Fixed (together with the Koszul factor (-1)^{|f_i|}) by the exact d^2 = 0
# suite over spaces with non-abelian osp^{<0}; see docs/signs.md.
QUAD_SIGN = -1


# -- osp dual words ---------------------------------------------------------


def osp_gen_degree(space, b):
    """Chevalley-Eilenberg degree of the dual generator of osp basis element b."""
    try:
        return space._cache["osp_gdeg"][b]
    except KeyError:
        degs = tuple(1 - f.degree for f in space.osp_neg_basis())
        space._cache["osp_gdeg"] = degs
        return degs[b]


def sort_osp_word(space, word):
    """Canonical (sorted) osp-dual word with Koszul sign; None if zero."""
    k = len(word)
    if k == 0:
        return word, 1
    if k == 1:
        return word, 1
    sorted_already = True
    for i in range(1, k):
        if word[i] < word[i - 1]:
            sorted_already = False
            break
    if sorted_already:
        for i in range(1, k):
            if word[i] == word[i - 1] and (osp_gen_degree(space, word[i]) & 1):
                return None
        return word, 1
    degs = tuple(osp_gen_degree(space, b) for b in word)
    order = kernels.stable_argsort(word)
    sign = koszul_sign(order, degs)
    w = tuple(word[i] for i in order)
    for i in range(1, len(w)):
        if w[i] == w[i - 1] and (osp_gen_degree(space, w[i]) & 1):
            return None
    return w, sign


def osp_structure_constants(space):
    """K[c][(a, b)] with [f_a, f_b] = sum_c K f_c, for ordered pairs (a, b)."""
    cache = space._cache
    if "osp_K" in cache:
        return cache["osp_K"]
    fs = space.osp_neg_basis()
    K = {}
    for a in range(len(fs)):
        for b in range(len(fs)):
            br = space.osp_bracket(fs[a], fs[b])
            if br.is_zero():
                continue
            for c, coeff in space.osp_expand(br).items():
                K.setdefault(c, {})[(a, b)] = coeff
    cache["osp_K"] = K
    return K


# -- CE word sums -----------------------------------------------------------


class CEWordSum:
    """Rational combination of (osp word, canonical vacuum graph) pairs."""

    __slots__ = ("space", "truncation", "terms")

    def __init__(self, space, truncation):
        self.space = space
        self.truncation = truncation
        self.terms = {}

    def add(self, word, graph, coeff, raw=True):
        if not coeff:
            return
        ws = sort_osp_word(self.space, word)
        if ws is None:
            return
        word_c, s1 = ws
        if raw:
            res = canonicalize(self.space, graph)
            if res is None:
                return
            g, s2 = res
        else:
            g, s2 = graph, 1
        if self.truncation < WEIGHT_INF and filtration_weight(self.space, g) > self.truncation:
            return
        key = (word_c, g.key())
        cur = self.terms.get(key)
        val = s1 * s2 * coeff
        if cur is None:
            self.terms[key] = (word_c, g, Fraction(val))
        else:
            tot = cur[2] + val
            if tot:
                self.terms[key] = (word_c, g, tot)
            else:
                del self.terms[key]

    def add_sum(self, other, scale=1):
        self.truncation = min(self.truncation, other.truncation)
        for (w, g, c) in other.terms.values():
            self.add(w, g, scale * c, raw=False)

    def items(self):
        return [self.terms[k] for k in sorted(self.terms)]

    def is_zero(self):
        return not self.terms

    @classmethod
    def from_graph_sum(cls, gs):
        out = cls(gs.space, gs.truncation)
        for (g, c) in gs.terms.values():
            out.add((), g, c, raw=False)
        return out

    def graph_part(self):
        """Drop osp letters; valid when no term carries any (asserts)."""
        out = GraphSum(self.space, self.truncation)
        for (w, g, c) in self.terms.values():
            assert not w, "CE word has osp letters; not a plain graph sum"
            out.add_canonical(g, c)
        return out


def ce_degree(space, word, graph):
    return sum(osp_gen_degree(space, b) for b in word) + graph_degree(space, graph)


# -- multiplication ---------------------------------------------------------


def multiply_graphs(space, g1, g2):
    """Disjoint union with the twist sign (-1)^{|m2| n1 d}; returns (raw, sign).

    |m2| is the degree of the second factor inside Gra (decorations plus
    edges, no vertex markers).  Concatenating the two block words also moves
    the second factor's decorations across the first factor's edges.
    """
    d = space.d
    gra_deg2 = sum(space.degrees[lab] for (_v, lab) in g2.decs) + (d - 1) * len(g2.edges)
    sign = 1
    if (gra_deg2 * g1.n * d) & 1:
        sign = -sign
    dec2_total = sum(space.degrees[lab] for (_v, lab) in g2.decs)
    if (dec2_total * (d - 1) * len(g1.edges)) & 1:
        sign = -sign
    shift = g1.n
    edges = g1.edges + tuple((u + shift, v + shift) for (u, v) in g2.edges)
    decs = g1.decs + tuple((v + shift, lab) for (v, lab) in g2.decs)
    return DecoratedGraph(d, g1.n + g2.n, (), edges, decs), sign


def multiply(a, b):
    """Product in the twisted complex; bilinear, canonicalized, truncated."""
    if a.space is not b.space:
        raise GraphError("space mismatch in multiplication")
    out = GraphSum(a.space, min(a.truncation, b.truncation))
    for (g1, c1) in a.terms.values():
        for (g2, c2) in b.terms.values():
            raw, sign = multiply_graphs(a.space, g1, g2)
            out.add_raw(raw, sign * c1 * c2)
    return out


def empty_graph(space):
    return DecoratedGraph(space.d, 0, (), (), ())


def unit_sum(space, truncation):
    s = GraphSum(space, truncation)
    s.add_canonical(empty_graph(space), 1)
    return s


# -- the three differential pieces (term level) -----------------------------


def split_edge_terms(space, g):
    """Leibniz expansion of each non-tadpole edge into the diagonal class.

    Yields raw (graph, coeff).  Works for graphs with or without external
    vertices (the gra layer reuses it).  Unit legs of the diagonal are
    dropped at degree 0, contributing no Koszul sign.

    Tadpole edges (even d) do not split: the tadpole count gives a bigrading
    in which the tadpole-splitting piece squares to zero separately, and
    dropping it is what makes the one-vertex diagonal element Maurer-Cartan
    on every pairing space (its splitting would insert the Euler
    characteristic as an obstruction).
    """
    d = space.d
    diag = space.diagonal_class()
    dec_total = sum(space.degrees[lab] for (_v, lab) in g.decs)
    for l, (u, v) in enumerate(g.edges):
        if u == v:
            continue
        # (-1)^{sum |a_k| + (d-1) * (edges before l)}
        s = -1 if ((dec_total + (d - 1) * l) & 1) else 1
        rest = g.edges[:l] + g.edges[l + 1 :]
        for (i, j, c) in diag:
            newdecs = g.decs
            if i != space.unit_index:
                newdecs = newdecs + ((u, i),)
            if j != space.unit_index:
                newdecs = newdecs + ((v, j),)
            yield DecoratedGraph(d, g.n, g.ext, rest, newdecs), s * c


def edge_partition(g):
    """Positions of E1 (tadpoles if d even, repeated parallel edges if d odd)."""
    if g.d & 1:
        counts = {}
        for (u, v) in g.edges:
            key = (u, v) if u <= v else (v, u)
            counts[key] = counts.get(key, 0) + 1
        e1 = []
        for l, (u, v) in enumerate(g.edges):
            key = (u, v) if u <= v else (v, u)
            if counts[key] >= 2:
                e1.append(l)
        return e1
    return [l for l, (u, v) in enumerate(g.edges) if u == v]


def contract_edge_terms(space, g):
    """Edge contractions with the twist signs; input must be canonical.

    The edge block is first reordered into (E1 | E2) with its Koszul cost;
    the contracted vertex pair maps to label 1 and the remaining vertices
    keep their relative order.
    """
    d = space.d
    if not g.edges or g.n < 2:
        return
    e1 = edge_partition(g)
    e1set = set(e1)
    e2 = [l for l in range(len(g.edges)) if l not in e1set]
    if not e2:
        return
    # block move sign: edges all have degree d-1
    order = e1 + e2
    inv = kernels.count_inversions(tuple(order))
    base = 1
    if (d - 1) & 1 and (inv & 1):
        base = -base
    dec_total = sum(space.degrees[lab] for (_v, lab) in g.decs)
    if ((dec_total + (d - 1) * len(e1)) & 1):
        base = -base
    edges_blocked = [g.edges[l] for l in order]
    ne1 = len(e1)
    for pos in range(len(e2)):
        l2 = pos + 1  # 1-based within the E2 block
        (m, v) = edges_blocked[ne1 + pos]
        if m > v:
            m, v = v, m
        s = base
        if (d * (m + v + 1)) & 1:
            s = -s
        if ((d - 1) * l2) & 1:
            s = -s
        ren = {}
        nxt = 2
        for w in range(1, g.n + 1):
            if w == m or w == v:
                ren[w] = 1
            else:
                ren[w] = nxt
                nxt += 1
        new_edges = tuple(
            (ren[a], ren[b])
            for k, (a, b) in enumerate(edges_blocked)
            if k != ne1 + pos
        )
        new_decs = tuple((ren[a], lab) for (a, lab) in g.decs)
        yield DecoratedGraph(d, g.n - 1, (), new_edges, new_decs), s


def act_on_decorations(space, f, g):
    """Left derivation action of an osp element on the decoration block.

    Yields raw (graph, coeff) for sum_p +-(replace a_p by f(a_p)); unit
    outputs drop the letter.
    """
    degs = [space.degrees[lab] for (_v, lab) in g.decs]
    prefix = 0
    for p, (v, lab) in enumerate(g.decs):
        s = -1 if ((f.degree * prefix) & 1) else 1
        for (j, c) in f.apply(lab):
            if j == space.unit_index:
                newdecs = g.decs[:p] + g.decs[p + 1 :]
            else:
                newdecs = g.decs[:p] + ((v, j),) + g.decs[p + 1 :]
            yield DecoratedGraph(g.d, g.n, g.ext, g.edges, newdecs), s * c
        prefix += degs[p]


# -- full differential on CE words ------------------------------------------


DGRAPH_CACHE_CAP = 250000


def graph_differential_terms(space, g):
    """Memoized canonical expansion of (d_split + d_contr) on one generator."""
    cache = space._cache.setdefault("dgraph", {})
    key = g.key()
    hit = cache.get(key)
    if hit is not None:
        return hit
    if len(cache) >= DGRAPH_CACHE_CAP:
        cache.clear()
    acc = {}
    for (raw, s) in itertools.chain(
        split_edge_terms(space, g), contract_edge_terms(space, g)
    ):
        res = canonicalize(space, raw)
        if res is None:
            continue
        cg, sign = res
        k2 = cg.key()
        cur = acc.get(k2)
        if cur is None:
            acc[k2] = (cg, Fraction(sign * s))
        else:
            tot = cur[1] + sign * s
            if tot:
                acc[k2] = (cg, tot)
            else:
                del acc[k2]
    out = tuple(acc.values())
    cache[key] = out
    return out


ACTION_CACHE_CAP = 250000


def action_terms(space, g):
    """Memoized canonical expansion of the decoration action on a generator.

    Returns a tuple of (osp index b, canonical graph, coeff) for the sum
    over basis actions f_b with the word-level derivation signs (before any
    osp-word crossing sign).
    """
    cache = space._cache.setdefault("daction", {})
    key = g.key()
    hit = cache.get(key)
    if hit is not None:
        return hit
    if len(cache) >= ACTION_CACHE_CAP:
        cache.clear()
    fs = space.osp_neg_basis()
    acc = {}
    for b, f in enumerate(fs):
        for (raw, s) in act_on_decorations(space, f, g):
            res = canonicalize(space, raw)
            if res is None:
                continue
            cg, sign = res
            k2 = (b, cg.key())
            cur = acc.get(k2)
            if cur is None:
                acc[k2] = (b, cg, Fraction(sign * s))
            else:
                tot = cur[2] + sign * s
                if tot:
                    acc[k2] = (b, cg, tot)
                else:
                    del acc[k2]
    out = tuple(acc.values())
    cache[key] = out
    return out


def full_differential(x):
    """The differential: d_split + d_contr on graph sums (the full graph
    complex is a complex on its own), plus d_action on CE words."""
    if isinstance(x, GraphSum):
        out = GraphSum(x.space, x.truncation)
        for (g, coeff) in x.terms.values():
            for (cg, c) in graph_differential_terms(x.space, g):
                out.add_canonical(cg, c * coeff)
        return out
    space = x.space
    out = CEWordSum(space, x.truncation)
    fs = space.osp_neg_basis()
    K = osp_structure_constants(space)
    for (word, g, coeff) in x.terms.values():
        wdeg = sum(osp_gen_degree(space, b) for b in word)
        wsign = -1 if (wdeg & 1) else 1
        # graph piece crosses the osp block
        for (cg, c) in graph_differential_terms(space, g):
            out.add(word, cg, wsign * c * coeff, raw=False)
        # action piece: operator f_b crosses the osp block, g_b lands in front
        for (b, cg, c) in action_terms(space, g):
            if (fs[b].degree * wdeg) & 1:
                c = -c
            out.add((b,) + word, cg, c * coeff, raw=False)
        # classical CE piece on the osp block
        prefix = 0
        for q, k in enumerate(word):
            if k in K:
                dq = -1 if (prefix & 1) else 1
                rest = word[:q] + word[q + 1 :]
                for (a, b), kc in K[k].items():
                    half = Fraction(kc) / 2
                    s = -1 if (fs[a].degree & 1) else 1
                    out.add(
                        (a, b) + rest,
                        g,
                        QUAD_SIGN * dq * s * half * coeff,
                    )
            prefix += osp_gen_degree(space, word[q])
    return out


def d_split(space, g, truncation=None):
    """Edge-splitting part alone, canonicalized (vacuum graphs)."""
    N = truncation if truncation is not None else 10 ** 9
    out = GraphSum(space, N)
    for raw, s in split_edge_terms(space, g):
        out.add_raw(raw, s)
    return out


def d_contract(space, g, truncation=None):
    """Edge-contraction part alone, canonicalized; g need not be canonical."""
    res = canonicalize(space, g)
    N = truncation if truncation is not None else 10 ** 9
    out = GraphSum(space, N)
    if res is None:
        return out
    cg, sign = res
    for raw, s in contract_edge_terms(space, cg):
        out.add_raw(raw, sign * s)
    return out


def d_action(x):
    """Action piece alone on a CEWordSum (dual generator + decoration map)."""
    space = x.space
    out = CEWordSum(space, x.truncation)
    fs = space.osp_neg_basis()
    K = osp_structure_constants(space)
    for (word, g, coeff) in x.terms.values():
        wdeg = sum(osp_gen_degree(space, b) for b in word)
        for (b, cg, c) in action_terms(space, g):
            if (fs[b].degree * wdeg) & 1:
                c = -c
            out.add((b,) + word, cg, c * coeff, raw=False)
        prefix = 0
        for q, k in enumerate(word):
            if k in K:
                dq = -1 if (prefix & 1) else 1
                rest = word[:q] + word[q + 1 :]
                for (a, b), kc in K[k].items():
                    half = Fraction(kc) / 2
                    s = -1 if (fs[a].degree & 1) else 1
                    out.add((a, b) + rest, g, QUAD_SIGN * dq * s * half * coeff)
            prefix += osp_gen_degree(space, word[q])
    return out


# -- bases and matrices ------------------------------------------------------


def osp_words_up_to_degree(space, max_degree):
    """All canonical osp-dual words of CE degree <= max_degree."""
    fs = space.osp_neg_basis()
    gens = [(b, osp_gen_degree(space, b)) for b in range(len(fs))]
    words = [((), 0)]
    for (b, q) in gens:
        new = []
        for (w, dw) in words:
            k = 1
            while dw + k * q <= max_degree:
                if (q & 1) and k > 1:
                    break
                new.append((w + (b,) * k, dw + k * q))
                k += 1
        words.extend(new)
    return sorted(words, key=lambda t: (t[1], t[0]))


def enumerate_ce_words(space, degree, weight_max, connected=False, min_valence=0, cap=None):
    """Canonical CE word basis (osp word, graph) of the given total degree."""
    d = space.d
    # graph degree is bounded below by -d * n >= -d * weight_max
    out = []
    for (w, qw) in osp_words_up_to_degree(space, degree + d * weight_max):
        if w and qw == degree:
            out.append((w, empty_graph(space)))
        gs = basismod.enumerate_basis(
            space,
            degree - qw,
            weight_max,
            connected=connected,
            min_valence=min_valence,
            cap=cap,
        )
        out.extend((w, g) for g in gs)
    return sorted(out, key=lambda t: (t[0], t[1].key()))


def differential_matrix(
    space,
    degree,
    weight_max,
    connected=False,
    min_valence=0,
    with_osp=False,
    cap=None,
):
    """Sparse matrix of the full differential between enumerated windows.

    Rows are indexed by the source basis (given degree), columns by the
    target (degree + 1); both at filtration weight <= weight_max.  Returns
    (matrix, source_basis, target_basis).
    """
    if with_osp:
        src = enumerate_ce_words(space, degree, weight_max, connected, min_valence, cap)
        dst = enumerate_ce_words(space, degree + 1, weight_max, connected, min_valence, cap)
        index = {(w, g.key()): i for i, (w, g) in enumerate(dst)}
        mat = SparseMatQ(len(src), len(dst))
        for r, (w, g) in enumerate(src):
            x = CEWordSum(space, weight_max)
            x.add(w, g, 1, raw=False)
            for (w2, g2, c) in full_differential(x).terms.values():
                key = (w2, g2.key())
                if key in index:
                    mat.data[(r, index[key])] = c
                else:
                    raise GraphError(
                        "differential image %s outside enumerated window" % (key,)
                    )
        return mat, src, dst
    src = basismod.enumerate_basis(space, degree, weight_max, connected, min_valence, cap=cap)
    dst = basismod.enumerate_basis(space, degree + 1, weight_max, connected, min_valence, cap=cap)
    index = {g.key(): i for i, g in enumerate(dst)}
    mat = SparseMatQ(len(src), len(dst))
    from gcx.graphs import is_connected

    for r, g in enumerate(src):
        gs = GraphSum(space, weight_max)
        gs.add_canonical(g, 1)
        img = full_differential(gs)
        for (g2, c) in img.terms.values():
            j = index.get(g2.key())
            if j is None:
                if connected and not is_connected(g2):
                    # the component-doubling part of the differential falls
                    # outside the connected window (it is the bracket's dual)
                    continue
                raise GraphError("differential image %s outside enumerated window" % (g2,))
            mat.data[(r, j)] = c
    return mat, src, dst
