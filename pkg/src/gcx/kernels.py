"""Kernel backend selection: compiled extension when built, pure Python otherwise."""

try:
    from gcx import _kernels_c as _impl

    # the twin module is only a win when it actually compiled
    BACKEND = "c" if _impl.__file__.endswith((".so", ".pyd")) else "python"
except ImportError:  # extension not built; the pure module is the reference
    from gcx import _kernels as _impl

    BACKEND = "python"

perm_parity = _impl.perm_parity
koszul_sign = _impl.koszul_sign
stable_argsort = _impl.stable_argsort
sort_word = _impl.sort_word
normalize_word = _impl.normalize_word
canonical_search = _impl.canonical_search
canonical_form_unsigned = _impl.canonical_form_unsigned
count_inversions = _impl.count_inversions
