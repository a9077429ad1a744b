"""Pairing spaces: loading, duals, diagonal class, the ortho-symplectic algebra."""

import random
from fractions import Fraction

import pytest

from gcx import pairing
from gcx.pairing import SpaceError, from_dict


def doc_sphere(d, w_pair="1"):
    return {
        "d": d,
        "basis": [{"label": "one", "degree": 0}, {"label": "w", "degree": d}],
        "pairing": [["one", "w", w_pair]],
    }


def test_s3_document_valid():
    sp = from_dict(doc_sphere(3))
    assert sp.d == 3 and sp.dim == 2


def test_degenerate_pairing_reports_kernel():
    with pytest.raises(SpaceError, match="degenerate pairing; kernel vector"):
        from_dict(doc_sphere(3, w_pair="0"))


def test_degree_mismatch_rejected():
    doc = doc_sphere(3)
    doc["pairing"].append(["one", "one", "1"])
    with pytest.raises(SpaceError, match="degree mismatch"):
        from_dict(doc)


def test_missing_unit_rejected():
    doc = {
        "d": 3,
        "basis": [{"label": "a", "degree": 1}, {"label": "b", "degree": 2}],
        "pairing": [["a", "b", "1"]],
    }
    with pytest.raises(SpaceError, match="unit"):
        from_dict(doc)


def test_duplicate_unit_rejected():
    doc = {
        "d": 2,
        "basis": [
            {"label": "one", "degree": 0},
            {"label": "e", "degree": 0},
            {"label": "w", "degree": 2},
        ],
        "pairing": [["one", "w", "1"]],
    }
    with pytest.raises(SpaceError, match="unit"):
        from_dict(doc)


def test_t2_graded_symmetry(t2):
    a, b = t2.label_index("a"), t2.label_index("b")
    assert t2.pair(a, b) == 1 and t2.pair(b, a) == -1


def test_d1_rejected():
    with pytest.raises(SpaceError):
        from_dict(doc_sphere(1))


def test_d2_warns():
    with pytest.warns(UserWarning):
        from_dict(doc_sphere(2))


# -- dual bases ---------------------------------------------------------------


def test_sphere_duals(s3):
    dual = s3.dual_basis()
    # 1^# = w, w^# = 1
    assert dual[0] == (Fraction(0), Fraction(1))
    assert dual[1] == (Fraction(1), Fraction(0))


def test_t2_duals(t2):
    dual = t2.dual_basis()
    a, b = t2.label_index("a"), t2.label_index("b")
    assert dual[a][b] == 1 and sum(1 for c in dual[a] if c) == 1
    assert dual[b][a] == -1


def test_dual_pairing_is_identity(all_spaces):
    for sp in all_spaces.values():
        dual = sp.dual_basis()
        for i in range(sp.dim):
            for j in range(sp.dim):
                val = sum(sp.pair(i, k) * dual[j][k] for k in range(sp.dim))
                assert val == (1 if i == j else 0)


def test_double_dual_sign_matrix(all_spaces, s1xs2):
    spaces = dict(all_spaces, s1xs2=s1xs2)
    for sp in spaces.values():
        dual = sp.dual_basis()
        n = sp.dim
        # C*C where C[j][i] = coefficient of v_j in v_i^#
        C = [[dual[i][j] for i in range(n)] for j in range(n)]
        CC = [
            [sum(C[r][k] * C[k][c] for k in range(n)) for c in range(n)]
            for r in range(n)
        ]
        for r in range(n):
            for c in range(n):
                want = 0
                if r == c:
                    e = sp.degrees[r] * (sp.d - sp.degrees[r])
                    want = -1 if (e % 2) else 1
                assert CC[r][c] == want, (sp.name, r, c)


# -- diagonal class -----------------------------------------------------------


def test_sphere_diagonal(s3, s2):
    # Delta = 1 (x) w + (-1)^d w (x) 1
    for sp, sgn in ((s3, -1), (s2, 1)):
        terms = dict(((i, j), c) for (i, j, c) in sp.diagonal_class())
        one, w = sp.label_index("one"), sp.label_index("w")
        assert terms[(one, w)] == 1
        assert terms[(w, one)] == sgn


def random_base_change(space, rng):
    """Random invertible degree-preserving rational matrix fixing the unit.

    The unit element is canonical (it is what the decorate-by-1 convention
    drops), so admissible base changes leave it alone.
    """
    n = space.dim
    by_deg = {}
    for i in range(n):
        by_deg.setdefault(space.degrees[i], []).append(i)
    M = [[Fraction(0)] * n for _ in range(n)]
    for deg, idxs in by_deg.items():
        if deg == 0:
            M[space.unit_index][space.unit_index] = Fraction(1)
            continue
        k = len(idxs)
        while True:
            blk = [[Fraction(rng.randint(-3, 3)) for _ in range(k)] for _ in range(k)]
            from oracles import dense_rank

            if dense_rank(blk) == k:
                break
        for r, i in enumerate(idxs):
            for c, j in enumerate(idxs):
                M[i][j] = blk[r][c]
    return M


def test_diagonal_base_change_invariance(t2):
    # transform the pairing by a random degree-preserving base change and
    # compare the diagonal tensors pulled back to the original basis
    rng = random.Random(42)
    for _ in range(5):
        M = random_base_change(t2, rng)
        n = t2.dim
        gram2 = [
            [
                sum(
                    M[i][r] * t2.pair(r, s) * M[j][s]
                    for r in range(n)
                    for s in range(n)
                )
                for j in range(n)
            ]
            for i in range(n)
        ]
        # new space with basis u_i = sum_r M[i][r] v_r
        sp2 = pairing.PairingSpace(
            d=t2.d,
            labels=t2.labels,
            degrees=t2.degrees,
            unit_index=t2.unit_index,
            gram=tuple(tuple(row) for row in gram2),
        )
        try:
            pairing.validate(sp2)
        except SpaceError:
            continue  # block was degenerate against the pairing; rare
        delta2 = sp2.diagonal_class()
        # push the new diagonal back along u_i = sum M[i][r] v_r
        pushed = {}
        for (i, j, c) in delta2:
            for r in range(n):
                for s in range(n):
                    v = c * M[i][r] * M[j][s]
                    if v:
                        pushed[(r, s)] = pushed.get((r, s), Fraction(0)) + v
        ref = {(i, j): c for (i, j, c) in t2.diagonal_class()}
        pushed = {k: v for k, v in pushed.items() if v}
        assert pushed == ref


# -- osp ----------------------------------------------------------------------


def test_osp_dimensions(s2, s3, s4, t2, s1xs2):
    assert len(s2.osp_neg_basis()) == 0
    assert len(s4.osp_neg_basis()) == 0
    assert len(s3.osp_neg_basis()) == 1  # f(w) = c 1 unconstrained for d odd
    assert len(t2.osp_neg_basis()) == 2
    assert len(s1xs2.osp_neg_basis()) == 3


def test_osp_invariants(all_spaces, s1xs2):
    spaces = dict(all_spaces, s1xs2=s1xs2)
    for sp in spaces.values():
        for f in sp.osp_neg_basis():
            fm = f.matrix()
            assert all(i != sp.unit_index for (_j, i) in fm), "f(1) = 0"
            for x in range(sp.dim):
                for y in range(sp.dim):
                    lhs = sum(
                        c * sp.pair(j, y) for ((j, i), c) in fm.items() if i == x
                    )
                    s = -1 if ((f.degree * sp.degrees[x]) % 2) else 1
                    rhs = sum(
                        c * sp.pair(x, j) for ((j, i), c) in fm.items() if i == y
                    )
                    assert lhs + s * rhs == 0


def test_osp_bracket_self_odd(s3):
    (f,) = s3.osp_neg_basis()
    br = s3.osp_bracket(f, f)
    # [f, f] = 2 f o f for odd-degree f; here f o f = 0
    assert br.is_zero()


def test_osp_bracket_zero_map(t2):
    f = t2.osp_neg_basis()[0]
    zero = pairing.OspElement(t2, -1, ())
    assert t2.osp_bracket(f, zero).is_zero()


def test_osp_bracket_skew_and_jacobi(s1xs2, t2):
    for sp in (s1xs2, t2):
        fs = sp.osp_neg_basis()
        for f in fs:
            for g in fs:
                br = sp.osp_bracket(f, g)
                rev = sp.osp_bracket(g, f)
                s = -1 if ((f.degree * g.degree) % 2) else 1
                assert dict(br.entries) == {
                    k: -s * v for k, v in rev.entries
                }
                # closure under the pairing-skew condition
                if not br.is_zero():
                    sp.osp_expand(br)
        for f in fs:
            for g in fs:
                for h in fs:
                    acc = {}

                    def add(el, scale):
                        for k, v in el.entries:
                            acc[k] = acc.get(k, 0) + scale * v

                    s1 = -1 if ((f.degree * h.degree) % 2) else 1
                    s2 = -1 if ((g.degree * f.degree) % 2) else 1
                    s3_ = -1 if ((h.degree * g.degree) % 2) else 1
                    add(sp.osp_bracket(f, sp.osp_bracket(g, h)), s1)
                    add(sp.osp_bracket(g, sp.osp_bracket(h, f)), s2)
                    add(sp.osp_bracket(h, sp.osp_bracket(f, g)), s3_)
                    assert all(v == 0 for v in acc.values())


def test_nonabelian_bracket_s1xs2(s1xs2):
    fs = s1xs2.osp_neg_basis()
    f1 = next(f for f in fs if f.degree == -1)
    f2 = next(f for f in fs if f.degree == -2)
    br = s1xs2.osp_bracket(f1, f2)
    assert not br.is_zero()
    coords = s1xs2.osp_expand(br)
    assert list(coords) == [2]  # lands on the degree -3 generator
