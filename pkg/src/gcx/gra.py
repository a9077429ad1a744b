"""The untwisted layer: Gra monomials on external vertices and cocomposition.

Vertices here are fixed distinguishable labels (ints, tokens, or collapsed
sets represented as sorted tuples), so there is no relabeling search; a
monomial is canonical once its word is sorted.  Collapsing a subset V keeps
the ambient labels and replaces V by the single tuple label tuple(sorted(V)),
which makes iterated quotients associate on the nose.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from gcx.graphs import koszul_sign
from gcx import kernels


def lkey(x):
    """Total order on vertex labels (ints, strings, collapsed tuples)."""
    if isinstance(x, bool):
        raise TypeError("bad label")
    if isinstance(x, int):
        return (0, x, ())
    if isinstance(x, str):
        return (1, x, ())
    if isinstance(x, tuple):
        return (2, "", tuple(lkey(y) for y in x))
    raise TypeError("bad vertex label %r" % (x,))


def collapse_label(V):
    flat = []
    for x in V:
        if isinstance(x, tuple):
            flat.extend(x)
        else:
            flat.append(x)
    return tuple(sorted(flat, key=lkey))


@dataclass(frozen=True)
class GraMonomial:
    """Monomial of edge symbols and decorations on a fixed vertex set."""

    d: int
    verts: tuple  # sorted by lkey
    edges: tuple  # ((u, v), ...) in word order
    decs: tuple  # ((vertex, label_index), ...) in word order

    def degree(self, space):
        s = sum(space.degrees[lab] for (_v, lab) in self.decs)
        return s + (self.d - 1) * len(self.edges)

    def __str__(self):
        return "M(verts=%s edges=%s dec=%s)" % (
            list(self.verts),
            list(self.edges),
            list(self.decs),
        )


def monomial(d, verts, edges=(), decs=()):
    return GraMonomial(d, tuple(sorted(verts, key=lkey)), tuple(edges), tuple(decs))


def normalize(space, m):
    """Sorted-word representative with sign, or None when the word is zero."""
    d = m.d
    sign = 1
    flipped = []
    for (u, v) in m.edges:
        if lkey(u) == lkey(v):
            if d & 1:
                return None
            flipped.append((u, v))
        elif lkey(u) <= lkey(v):
            flipped.append((u, v))
        else:
            flipped.append((v, u))
            if d & 1:
                sign = -sign
    keys = [(lkey(u), lkey(v)) for (u, v) in flipped]
    order = kernels.stable_argsort(tuple(keys))
    if not (d & 1):
        inv = kernels.count_inversions(tuple(order))
        if inv & 1:
            sign = -sign
    edges_s = tuple(flipped[i] for i in order)
    if not (d & 1):
        for i in range(1, len(edges_s)):
            if edges_s[i] == edges_s[i - 1]:
                return None
    degs = tuple(space.degrees[lab] for (_v, lab) in m.decs) if m.decs else ()
    dkeys = tuple((lkey(v), lab) for (v, lab) in m.decs)
    dorder = kernels.stable_argsort(dkeys)
    if m.decs:
        sign *= koszul_sign(dorder, degs)
    decs_s = tuple(m.decs[i] for i in dorder)
    for i in range(1, len(decs_s)):
        if decs_s[i] == decs_s[i - 1] and (space.degrees[decs_s[i][1]] & 1):
            return None
    return GraMonomial(d, m.verts, edges_s, decs_s), sign


class MonomialSum:
    """Rational combination of normalized monomials over one vertex set."""

    def __init__(self, space, d):
        self.space = space
        self.d = d
        self.terms = {}

    def add(self, m, coeff):
        if not coeff:
            return
        res = normalize(self.space, m)
        if res is None:
            return
        mn, s = res
        key = (mn.verts, mn.edges, mn.decs)
        cur = self.terms.get(key)
        val = s * coeff
        if cur is None:
            self.terms[key] = (mn, Fraction(val))
        else:
            tot = cur[1] + val
            if tot:
                self.terms[key] = (mn, tot)
            else:
                del self.terms[key]

    def items(self):
        def keyfn(k):
            (verts, edges, decs) = k
            return (
                tuple(lkey(v) for v in verts),
                tuple((lkey(a), lkey(b)) for (a, b) in edges),
                tuple((lkey(v), lab) for (v, lab) in decs),
            )

        return [self.terms[k] for k in sorted(self.terms, key=keyfn)]

    def is_zero(self):
        return not self.terms


def gra_differential(space, m):
    """Leibniz splitting of every edge into the diagonal class.

    Tadpole symbols split too (both diagonal legs at the same vertex): this
    is the comodule differential of the untwisted layer, for which the
    cocomposition is a map of differential objects.  The twisted vacuum
    complex instead treats tadpoles as inert; see docs/signs.md.
    """
    out = MonomialSum(space, m.d)
    diag = space.diagonal_class()
    dec_total = sum(space.degrees[lab] for (_v, lab) in m.decs)
    d = m.d
    for l, (u, v) in enumerate(m.edges):
        s = -1 if ((dec_total + (d - 1) * l) & 1) else 1
        rest = m.edges[:l] + m.edges[l + 1 :]
        for (i, j, c) in diag:
            decs = m.decs
            if i != space.unit_index:
                decs = decs + ((u, i),)
            if j != space.unit_index:
                decs = decs + ((v, j),)
            out.add(GraMonomial(d, m.verts, rest, decs), s * c)
    return out


def cocompose(space, m, V, pure=False):
    """Right comodule cocomposition for V inside the vertex set of m.

    Returns a list of (left monomial over U/V, right monomial over V, coeff)
    with both factors normalized.  Decorations always land on the left (at
    the collapsed vertex when their vertex lies in V); an edge inside V goes
    either to the collapsed tadpole on the left or to the right factor.

    With pure=True the input is treated as an element of the edge-only
    cooperad, whose left factor has no tadpole symbols: edges inside V then
    go to the right factor only.
    """
    V = set(V)
    U = set(m.verts)
    if not V <= U:
        raise ValueError("V must be a subset of the vertex labels")
    if pure and m.decs:
        raise ValueError("pure cooperad elements carry no decorations")
    tV = collapse_label(V)
    left_verts = tuple(sorted((U - V) | {tV}, key=lkey))
    right_verts = tuple(sorted(V, key=lkey))

    def proj(u):
        return tV if u in V else u

    # letters in word order: decorations then edges; each branch assigns
    # every letter to the left or right factor, keeping original order
    letters = []
    for (v, lab) in m.decs:
        letters.append(("dec", (proj(v), lab), space.degrees[lab]))
    for (u, v) in m.edges:
        letters.append(("edge", (u, v), m.d - 1))

    branches = [()]  # tuples of ("L"/"R", kind, payload, deg) per letter
    for (kind, payload, deg) in letters:
        new = []
        for br in branches:
            if kind == "dec":
                new.append(br + (("L", kind, payload, deg),))
                continue
            (u, v) = payload
            inside = u in V and v in V
            if not (pure and inside):
                new.append(br + (("L", kind, (proj(u), proj(v)), deg),))
            # the edge-only right factor has no tadpole symbols
            if inside and u != v:
                new.append(br + (("R", kind, (u, v), deg),))
        branches = new

    out = []
    for br in branches:
        # Koszul unshuffle into (L | R) blocks: each pair (R letter before an
        # L letter in the original order) contributes (-1)^(deg_r * deg_l)
        acc = 0
        for i in range(len(br)):
            if br[i][0] != "R":
                continue
            for j in range(i + 1, len(br)):
                if br[j][0] == "L":
                    acc += br[i][3] * br[j][3]
        sign = -1 if (acc & 1) else 1
        lm = GraMonomial(
            m.d,
            left_verts,
            tuple(p for (side, k, p, _dg) in br if side == "L" and k == "edge"),
            tuple(p for (side, k, p, _dg) in br if side == "L" and k == "dec"),
        )
        rm = GraMonomial(
            m.d,
            right_verts,
            tuple(p for (side, k, p, _dg) in br if side == "R"),
            (),
        )
        nl = normalize(space, lm)
        nr = normalize(space, rm)
        if nl is None or nr is None:
            continue
        out.append((nl[0], nr[0], Fraction(sign) * nl[1] * nr[1]))
    # merge equal (left, right) pairs
    merged = {}
    for (lm, rm, c) in out:
        key = ((lm.verts, lm.edges, lm.decs), (rm.verts, rm.edges, rm.decs))
        if key in merged:
            lm0, rm0, c0 = merged[key]
            c0 += c
            if c0:
                merged[key] = (lm0, rm0, c0)
            else:
                del merged[key]
        else:
            merged[key] = (lm, rm, c)
    return [merged[k] for k in sorted(merged)]
