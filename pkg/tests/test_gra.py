"""The untwisted layer: cocomposition, comodule compatibility, edge splitting."""

import itertools

from fractions import Fraction

from gcx import gra
from gcx.gra import GraMonomial, MonomialSum, cocompose, gra_differential, monomial, normalize


def as_dict(triples):
    return {
        ((l.verts, l.edges, l.decs), (r.verts, r.edges, r.decs)): c
        for (l, r, c) in triples
    }


def test_full_subset_odd_d(s3):
    # s^{12}, V = U: the collapsed tadpole dies for odd d
    m = monomial(3, [1, 2], edges=[(1, 2)])
    out = cocompose(s3, m, {1, 2})
    assert len(out) == 1
    (l, r, c) = out[0]
    assert l.edges == () and r.edges == ((1, 2),) and c == 1


def test_full_subset_even_d(t2):
    m = monomial(2, [1, 2], edges=[(1, 2)])
    out = as_dict(cocompose(t2, m, {1, 2}))
    tv = (1, 2)
    assert out[(((tv,), ((tv, tv),), ()), ((1, 2), (), ()))] == 1  # tadpole x 1
    assert out[(((tv,), (), ()), ((1, 2), ((1, 2),), ()))] == 1  # 1 x s^{12}


def test_partial_subset(s3):
    # s^{13} over U={1,2,3}, V={1,2}: s^{[V]3} (x) 1 as an element
    m = monomial(3, [1, 2, 3], edges=[(1, 3)])
    out = cocompose(s3, m, {1, 2})
    assert len(out) == 1
    (l, r, c) = out[0]
    assert r.edges == ()
    # the element equals +1 * s^{[V],3}; the normalized word may store the
    # reversed letter with the compensating sign
    tv = (1, 2)
    assert set(l.edges[0]) == {3, tv}
    if l.edges[0] == (3, tv):
        assert c == -1  # one reversal at (-1)^3
    else:
        assert c == 1


def test_empty_monomial(s3):
    m = monomial(3, [1, 2])
    out = cocompose(s3, m, {1, 2})
    assert len(out) == 1 and out[0][2] == 1
    assert out[0][0].edges == () and out[0][1].edges == ()


def test_gra_differential_single_edge(s3):
    w = s3.label_index("w")
    m = monomial(3, [1, 2], edges=[(1, 2)])
    out = {k: (mm, c) for k, (mm, c) in gra_differential(s3, m).terms.items()}
    vals = {(mm.decs, c) for (mm, c) in out.values()}
    assert ((tuple([(2, w)]), Fraction(1)) in vals)
    assert ((tuple([(1, w)]), Fraction(-1)) in vals)


def test_gra_differential_no_edges(s3):
    w = s3.label_index("w")
    m = monomial(3, [1], decs=[(1, w)])
    assert gra_differential(s3, m).is_zero()


def enumerate_monomials(space, nverts, max_edges, max_decs):
    verts = list(range(1, nverts + 1))
    slots = [
        (u, v)
        for i, u in enumerate(verts)
        for v in verts[i:]
        if not (u == v and space.d % 2 == 1)
    ]
    red = space.reduced_indices()
    for ne in range(0, max_edges + 1):
        for edges in itertools.combinations_with_replacement(slots, ne):
            for nd in range(0, max_decs + 1):
                for decs in itertools.combinations_with_replacement(
                    [(v, i) for v in verts for i in red], nd
                ):
                    m = monomial(space.d, verts, edges, decs)
                    if normalize(space, m) is not None:
                        yield m


def test_gra_d_squared_zero(s3, t2):
    for sp, nv in ((s3, 3), (t2, 3)):
        count = 0
        for m in enumerate_monomials(sp, nv, 3, 1):
            acc = MonomialSum(sp, sp.d)
            for (mm, c) in gra_differential(sp, m).items():
                for (mmm, cc) in gra_differential(sp, mm).items():
                    acc.add(mmm, c * cc)
            assert acc.is_zero(), str(m)
            count += 1
        assert count > 50


def iterate_cocompose(space, terms, V):
    """Apply cocompose to the left factors of (left (x) rest) sums."""
    out = {}
    for (l, rest, c) in terms:
        for (l2, r2, c2) in cocompose(space, l, V):
            key = (
                (l2.verts, l2.edges, l2.decs),
                (r2.verts, r2.edges, r2.decs),
                (rest.verts, rest.edges, rest.decs),
            )
            out[key] = out.get(key, Fraction(0)) + c * c2
    return {k: v for k, v in out.items() if v}


def test_coassociativity(s3, t2):
    # (cocompose_{W/V} x id) o cocompose_... two routes for V inside W inside U
    for sp in (s3, t2):
        U = [1, 2, 3, 4]
        W = {1, 2, 3}
        V = {1, 2}
        for m in enumerate_monomials(sp, 4, 3, 0):
            # route 1: split off W, then split V inside the pure O(W) factor
            route1 = {}
            for (l, r, c) in cocompose(sp, m, W):
                for (r1, r2, c2) in cocompose(sp, r, V, pure=True):
                    key = (
                        (l.verts, l.edges, l.decs),
                        (r1.verts, r1.edges, r1.decs),
                        (r2.verts, r2.edges, r2.decs),
                    )
                    route1[key] = route1.get(key, Fraction(0)) + c * c2
            route1 = {k: v for k, v in route1.items() if v}
            # route 2: split off V, then split W/V in the quotient; the
            # middle factor ends up in position 1 after the identification
            route2 = {}
            WV = (W - V) | {gra.collapse_label(V)}
            for (l, r, c) in cocompose(sp, m, V):
                # cocompositions are degree-0 maps acting in non-crossing
                # tensor slots, so no Koszul factor relates the two routes
                for (l2, m2, c2) in cocompose(sp, l, WV):
                    key = (
                        (l2.verts, l2.edges, l2.decs),
                        (m2.verts, m2.edges, m2.decs),
                        (r.verts, r.edges, r.decs),
                    )
                    route2[key] = route2.get(key, Fraction(0)) + c * c2
            route2 = {k: v for k, v in route2.items() if v}
            # collapse_label flattens nested tokens, so [(W/V) with [V]]
            # and [W] coincide on the nose and the keys compare directly
            assert route1 == route2, str(m)


def test_comodule_differential_compatibility(s3, t2):
    # cocompose o d = (d (x) id) o cocompose (the right factor has zero
    # differential in the edge-only cooperad)
    for sp in (s3, t2):
        for m in enumerate_monomials(sp, 3, 3, 1):
            V = {1, 2}
            lhs = {}
            for (mm, c) in gra_differential(sp, m).items():
                for (l, r, c2) in cocompose(sp, mm, V):
                    key = ((l.verts, l.edges, l.decs), (r.verts, r.edges, r.decs))
                    lhs[key] = lhs.get(key, Fraction(0)) + c * c2
            lhs = {k: v for k, v in lhs.items() if v}
            rhs = {}
            for (l, r, c) in cocompose(sp, m, V):
                for (ll, c2) in gra_differential(sp, l).items():
                    key = ((ll.verts, ll.edges, ll.decs), (r.verts, r.edges, r.decs))
                    rhs[key] = rhs.get(key, Fraction(0)) + c * c2
            rhs = {k: v for k, v in rhs.items() if v}
            assert lhs == rhs, str(m)
