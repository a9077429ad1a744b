"""Canonical labeling with automorphism signs, against the exhaustive oracle."""

import itertools
import random

import pytest

from gcx.graphs import (
    DecoratedGraph,
    GraphError,
    canonicalize,
    connected_components,
    filtration_weight,
    graph_degree,
    koszul_sign,
    validate_graph,
)
from oracles import brute_canonicalize, bubble_koszul


def G(d, n, edges=(), decs=()):
    return DecoratedGraph(d, n, (), tuple(edges), tuple(decs))


# -- spec examples ------------------------------------------------------------


def test_double_edge_even_d_is_zero(s2):
    assert canonicalize(s2, G(2, 2, [(1, 2), (1, 2)])) is None


def test_tadpole_odd_d_is_zero(s3):
    assert canonicalize(s3, G(3, 1, [(1, 1)])) is None


def test_tadpole_even_d_survives(s2):
    res = canonicalize(s2, G(2, 1, [(1, 1)]))
    assert res is not None and res[1] == 1


def agrees_with_oracle(space, g):
    """Engine and oracle may pick different representatives; require the
    same zero verdict and a coherent sign chain through both forms."""
    res = canonicalize(space, g)
    ref = brute_canonicalize(space, g)
    if ref is None or res is None:
        return ref is None and res is None
    cg, s_e = res
    o_enc = (ref[0], ref[1])
    back = brute_canonicalize(space, cg)
    if back is None:
        return False
    # element(g) = s_o * element(O) and element(g) = s_e * element(E),
    # element(E) = s' * element(O) with the same minimal form O
    return (back[0], back[1]) == o_enc and s_e * back[2] == ref[2]


def test_reversed_edge_sign(s3):
    res = canonicalize(s3, G(3, 2, [(2, 1)]))
    assert res is not None
    assert res[1] == -1  # one reversal at (-1)^3
    assert agrees_with_oracle(s3, G(3, 2, [(2, 1)]))


def test_degree_and_weight_formulas(s3, s2):
    theta = G(3, 2, [(1, 2)] * 3)
    assert graph_degree(s3, theta) == 0
    assert filtration_weight(s3, theta) == 11
    v = G(2, 1)
    assert graph_degree(s2, v) == -2
    assert filtration_weight(s2, v) == 1
    w = s3.label_index("w")
    e = G(3, 2, [(1, 2)], [(1, w)])
    assert graph_degree(s3, e) == -1


def test_decoration_label_validation(s3):
    with pytest.raises(GraphError):
        canonicalize(s3, G(3, 1, (), [(1, s3.unit_index)]))
    with pytest.raises(GraphError):
        validate_graph(s3, G(3, 1, [(1, 2)]))  # endpoint out of range


# -- exhaustive comparison with the oracle -------------------------------------


def all_bare_graphs(d, max_n, max_e):
    for n in range(1, max_n + 1):
        slots = [
            (u, v)
            for u in range(1, n + 1)
            for v in range(u, n + 1)
            if not (u == v and d % 2 == 1)
        ]
        for ne in range(0, max_e + 1):
            for edges in itertools.combinations_with_replacement(slots, ne):
                yield G(d, n, edges)


def test_matches_brute_force_all_bare(s2, s3):
    for sp in (s2, s3):
        count = 0
        for g in all_bare_graphs(sp.d, 4, 4):
            assert agrees_with_oracle(sp, g), str(g)
            count += 1
        assert count > 200


def test_matches_brute_force_decorated_random(t2, s3):
    rng = random.Random(5)
    for sp in (t2, s3):
        red = sp.reduced_indices()
        for _ in range(250):
            n = rng.randint(1, 4)
            ne = rng.randint(0, 5)
            edges = []
            for _ in range(ne):
                u = rng.randint(1, n)
                v = rng.randint(1, n)
                edges.append((u, v))
            nd = rng.randint(0, 3)
            decs = [(rng.randint(1, n), rng.choice(red)) for _ in range(nd)]
            g = G(sp.d, n, edges, decs)
            assert agrees_with_oracle(sp, g), str(g)


def test_idempotent_on_canonical_forms(t2):
    rng = random.Random(9)
    red = t2.reduced_indices()
    for _ in range(200):
        n = rng.randint(1, 4)
        edges = [
            (rng.randint(1, n), rng.randint(1, n)) for _ in range(rng.randint(0, 4))
        ]
        decs = [(rng.randint(1, n), rng.choice(red)) for _ in range(rng.randint(0, 3))]
        res = canonicalize(t2, G(2, n, edges, decs))
        if res is None:
            continue
        again = canonicalize(t2, res[0])
        assert again is not None
        assert again[0] == res[0] and again[1] == 1


def test_relabeling_consistency(s3, t2):
    # canonicalize(rho(G)) = (C, s * koszul(rho)) where canonicalize(G) = (C, s)
    rng = random.Random(3)
    for sp in (s3, t2):
        red = sp.reduced_indices()
        for _ in range(150):
            n = rng.randint(2, 4)
            edges = [
                (rng.randint(1, n), rng.randint(1, n))
                for _ in range(rng.randint(1, 4))
            ]
            decs = [
                (rng.randint(1, n), rng.choice(red)) for _ in range(rng.randint(0, 2))
            ]
            g = G(sp.d, n, edges, decs)
            base = canonicalize(sp, g)
            perm = list(range(1, n + 1))
            rng.shuffle(perm)
            sigma = {old: perm[old - 1] for old in range(1, n + 1)}
            rg = G(
                sp.d,
                n,
                [(sigma[u], sigma[v]) for (u, v) in edges],
                [(sigma[v], lab) for (v, lab) in decs],
            )
            relabeled = canonicalize(sp, rg)
            if base is None:
                assert relabeled is None
                continue
            # marker block: element(g) = parity^d * element(relabeled word)
            marker_sign = 1
            if sp.d % 2 == 1:
                marker_sign = bubble_koszul(
                    [sigma[v] - 1 for v in range(1, n + 1)], [1] * n
                )
            assert relabeled is not None
            assert relabeled[0] == base[0]
            assert base[1] == marker_sign * relabeled[1]


def test_zero_detection_is_sound(s2, s3):
    # for every class reported Zero, the oracle finds a -1 automorphism too
    for sp in (s2, s3):
        zero_seen = 0
        for g in all_bare_graphs(sp.d, 4, 4):
            if canonicalize(sp, g) is None:
                assert brute_canonicalize(sp, g) is None, str(g)
                zero_seen += 1
        assert zero_seen > 10


# -- component factorization ---------------------------------------------------


def test_components_identity_for_connected(s3):
    g = G(3, 2, [(1, 2)])
    comps, sign = connected_components(s3, g)
    assert sign == 1 and len(comps) == 1 and comps[0] == g


def test_components_empty_graph(s3):
    comps, sign = connected_components(s3, G(3, 0))
    assert comps == [] and sign == 1


def test_components_unshuffle_sign(s2, t2):
    # two disjoint decorated vertices over d=2; swapping odd decorations
    # across blocks must show up in the sign
    a, b = t2.label_index("a"), t2.label_index("b")
    g = DecoratedGraph(2, 2, (), (), ((1, a), (2, b)))
    comps, sign = connected_components(t2, g)
    assert len(comps) == 2
    # reconstructing with factors swapped in the word flips the sign of the
    # odd-odd crossing: check against koszul directly
    g_swapped = DecoratedGraph(2, 2, (), (), ((2, b), (1, a)))
    comps2, sign2 = connected_components(t2, g_swapped)
    assert comps == comps2
    assert sign2 == sign * koszul_sign((1, 0), (1, 1))


def test_components_two_vertices_odd_d_zero_class(s3):
    # the disjoint union of two bare vertices is a zero class for odd d
    assert canonicalize(s3, G(3, 2)) is None
    assert connected_components(s3, G(3, 2)) is None
