"""Koszul sign and permutation kernels against the bubble-sort oracle."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gcx import kernels
from oracles import bubble_koszul


def test_swap_two_odd_items():
    assert kernels.koszul_sign((1, 0), (1, 1)) == -1


def test_swap_even_odd():
    # degree-2 and degree-3 items commute up to (-1)^6
    assert kernels.koszul_sign((1, 0), (2, 3)) == 1


def test_all_even_is_plus_one():
    assert kernels.koszul_sign((3, 1, 0, 2), (2, 4, 0, 6)) == 1


def test_malformed_permutation_rejected():
    with pytest.raises(ValueError):
        kernels.koszul_sign((0, 0, 1), (1, 1, 1))
    with pytest.raises(ValueError):
        kernels.koszul_sign((0, 1), (1,))


def test_parity_matches_inversion_count():
    assert kernels.perm_parity((0, 1, 2)) == 1
    assert kernels.perm_parity((1, 0, 2)) == -1
    assert kernels.perm_parity((2, 0, 1)) == 1


@settings(max_examples=200, deadline=None)
@given(st.permutations(list(range(6))), st.lists(st.integers(-4, 5), min_size=6, max_size=6))
def test_koszul_matches_bubble_oracle(perm, degrees):
    assert kernels.koszul_sign(tuple(perm), tuple(degrees)) == bubble_koszul(
        perm, degrees
    )


@settings(max_examples=100, deadline=None)
@given(st.permutations(list(range(7))))
def test_parity_is_sign_of_all_odd_word(perm):
    # a permutation of letters all of odd degree realizes its parity
    assert kernels.perm_parity(tuple(perm)) == kernels.koszul_sign(
        tuple(perm), (1,) * 7
    )


def test_backends_agree_when_compiled():
    from gcx import _kernels

    try:
        from gcx import _kernels_c
    except ImportError:
        pytest.skip("compiled kernels not built")
    perm = (3, 0, 2, 1)
    degs = (1, 2, 3, 1)
    assert _kernels.koszul_sign(perm, degs) == _kernels_c.koszul_sign(perm, degs)
    edges = ((2, 1), (1, 1), (1, 3))
    assert _kernels.normalize_word(2, edges, (), ()) == _kernels_c.normalize_word(
        2, edges, (), ()
    )
