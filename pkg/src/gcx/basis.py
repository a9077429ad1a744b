"""Enumeration of canonical graph bases in degree/filtration windows."""

from __future__ import annotations

import itertools
import os

from gcx.graphs import DecoratedGraph, canonicalize, filtration_weight, graph_degree

DEFAULT_MAX_BASIS = 200000


class CapExceeded(RuntimeError):
    """A window produced more raw candidates than the configured cap."""


def max_basis_cap():
    v = os.environ.get("GCX_MAX_BASIS")
    return int(v) if v else DEFAULT_MAX_BASIS


def _valences(g):
    val = {v: 0 for v in range(1, g.n + 1)}
    for x in g.ext:
        val[x] = 0
    for (u, v) in g.edges:
        val[u] += 1
        val[v] += 1  # a tadpole counts twice at its vertex
    for (v, _lab) in g.decs:
        val[v] += 1
    return val


def min_valence_ok(g, min_valence):
    if not min_valence:
        return True
    return all(v >= min_valence for v in _valences(g).values())


def has_trivalent_vertex(g):
    """At least one vertex of valence >= 3 (the GC'' membership reading)."""
    return any(v >= 3 for v in _valences(g).values())


def _edge_slots(d, verts):
    """Candidate normalized edges; tadpoles only for even d."""
    out = []
    for i, u in enumerate(verts):
        for v in verts[i:]:
            if u == v and (d & 1):
                continue
            out.append((u, v))
    return out


def _connected(n, ext, edges):
    verts = list(range(1, n + 1)) + list(ext)
    if len(verts) <= 1:
        return True
    adj = {v: set() for v in verts}
    for (u, v) in edges:
        adj[u].add(v)
        adj[v].add(u)
    seen = {verts[0]}
    stack = [verts[0]]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(verts)


def _dec_assignments(space, verts, budget):
    """All decoration words with total label degree == budget.

    Yields tuples of (vertex, label) sorted by (vertex-key, label); the
    canonicalizer resorts anyway, and generating sorted words avoids dupes.
    """
    labels = [(i, space.degrees[i]) for i in space.reduced_indices()]
    slots = [(v, i, dg) for v in verts for (i, dg) in labels]

    def rec(start, remaining, acc):
        if remaining == 0:
            yield tuple(acc)
            return
        for k in range(start, len(slots)):
            (v, i, dg) = slots[k]
            if dg > remaining:
                continue
            acc.append((v, i))
            yield from rec(k, remaining - dg, acc)  # multisets: labels may repeat
            acc.pop()

    yield from rec(0, budget, [])


def bare_classes(space, n, n_edges, ext=(), connected=False):
    """Undecorated edge multisets up to isomorphism (orientation ignored).

    Memoized per space.  Every decorated canonical class sits over one of
    these representatives: edges dominate the canonical encoding.  Classes
    that vanish only by an orientation-reversing automorphism are kept,
    since decorations may break the symmetry.
    """
    from gcx import kernels

    cache = space._cache.setdefault("bare", {})
    key = (n, n_edges, ext, connected)
    if key in cache:
        return cache[key]
    d = space.d
    verts = list(range(1, n + 1)) + list(ext)
    slots = _edge_slots(d, verts)
    seen = {}
    for edges in itertools.combinations_with_replacement(slots, n_edges):
        if not (d & 1) and len(set(edges)) != len(edges):
            continue  # even d: repeated edges are zero classes
        if connected and not _connected(n, ext, edges):
            continue
        form = kernels.canonical_form_unsigned(d, n, edges, (), ())
        if form is None:
            continue
        seen[form[0]] = DecoratedGraph(d, n, ext, form[0], ())
    out = [seen[k] for k in sorted(seen)]
    cache[key] = out
    return out


def raw_candidates(space, degree, weight_max, connected=False, min_valence=0, ext=()):
    """Yield decorated candidates covering every canonical class in the window."""
    d = space.d
    ext = tuple(sorted(ext))
    n_ext = len(ext)
    for n in range(0 if n_ext else 1, weight_max + 1):
        verts = list(range(1, n + 1)) + list(ext)
        if not verts:
            continue
        max_e = (weight_max - n - n_ext) // d
        for n_edges in range(0, max_e + 1):
            dec_budget = degree - (d - 1) * n_edges + d * n
            if dec_budget < 0:
                continue
            if d * n_edges + dec_budget + n + n_ext > weight_max:
                continue
            for bare in bare_classes(space, n, n_edges, ext, connected):
                for decs in _dec_assignments(space, verts, dec_budget):
                    g = DecoratedGraph(d, n, ext, bare.edges, tuple(decs))
                    if min_valence and not min_valence_ok(g, min_valence):
                        continue
                    yield g


def enumerate_basis(
    space,
    degree,
    weight_max,
    connected=False,
    min_valence=0,
    ext=(),
    cap=None,
):
    """All canonical nonzero graphs in the window, in deterministic order.

    Output is sorted lexicographically on the canonical encoding; duplicates
    and zero classes are removed.
    """
    if weight_max < 1:
        return []
    cap = cap or max_basis_cap()
    seen = {}
    count = 0
    for g in raw_candidates(space, degree, weight_max, connected, min_valence, ext):
        count += 1
        if count > cap:
            raise CapExceeded(
                "window (degree=%d, weight_max=%d) exceeded cap of %d raw candidates"
                % (degree, weight_max, cap)
            )
        res = canonicalize(space, g)
        if res is None:
            continue
        cg, _sign = res
        assert graph_degree(space, cg) == degree
        assert filtration_weight(space, cg) <= weight_max
        seen[cg.key()] = cg
    return [seen[k] for k in sorted(seen)]


def enumerate_structural(space, max_vertices, max_edges, max_decorations, connected=False):
    """All canonical nonzero vacuum graphs within structural bounds.

    Used by the d^2 acceptance sweep, which is stated in terms of vertex,
    edge and decoration counts rather than a degree window.
    """
    out = {}
    for n in range(1, max_vertices + 1):
        verts = list(range(1, n + 1))
        dec_slots = [(v, i) for v in verts for i in space.reduced_indices()]
        for n_edges in range(0, max_edges + 1):
            for bare in bare_classes(space, n, n_edges, (), connected):
                for n_dec in range(0, max_decorations + 1):
                    for decs in itertools.combinations_with_replacement(dec_slots, n_dec):
                        g = DecoratedGraph(space.d, n, (), bare.edges, tuple(decs))
                        res = canonicalize(space, g)
                        if res is None:
                            continue
                        cg, _s = res
                        out[cg.key()] = cg
    return [out[k] for k in sorted(out)]
