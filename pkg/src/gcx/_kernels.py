"""Hot combinatorial kernels: permutation parity, Koszul signs, canonical labeling.

Everything in this module works on plain ints and tuples so that the same
source compiles unchanged as a C extension (gcx._kernels_c, see setup.py).
The import-time selection between the two lives in gcx.kernels.
"""


def perm_parity(perm):
    """Sign (+1/-1) of a permutation given as a sequence of 0..k-1."""
    n = len(perm)
    seen = [False] * n
    odd = 0
    for i in range(n):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        odd ^= (length - 1) & 1
    return -1 if odd else 1


def koszul_sign(perm, degrees):
    """Koszul sign of rearranging a word of graded letters.

    `perm[i]` is the original index of the letter at position i of the new
    word; `degrees[j]` is the degree of original letter j.  The sign is the
    product of (-1)^(ab) over adjacent transpositions needed to sort the new
    word back to the original order.  Only pairs of odd letters contribute,
    so we count inversions of the odd-degree subsequence.
    """
    k = len(perm)
    if len(degrees) != k:
        raise ValueError("permutation/degree length mismatch")
    if sorted(perm) != list(range(k)):
        raise ValueError("not a permutation of 0..k-1")
    odd = [p for p in perm if degrees[p] & 1]
    inv = 0
    m = len(odd)
    for i in range(m):
        oi = odd[i]
        for j in range(i + 1, m):
            if oi > odd[j]:
                inv += 1
    return -1 if inv & 1 else 1


def stable_argsort(keys):
    """Indices sorting `keys` stably (ties keep input order)."""
    return tuple(sorted(range(len(keys)), key=lambda i: (keys[i], i)))


def sort_word(keys, degrees):
    """Stable-sort a block of graded letters, tracking the Koszul sign.

    Returns (order, sign) with order[i] = original index of the letter at
    sorted position i.
    """
    order = stable_argsort(keys)
    return order, koszul_sign(order, degrees)


def _edge_key(u, v):
    # internal labels are positive; externals are negative and sort after
    a = (0, u) if u > 0 else (1, -u)
    b = (0, v) if v > 0 else (1, -v)
    return (a, b)


def normalize_word(d, edges, decs, dec_degs):
    """Normalize the edge and decoration blocks of an orientation word.

    edges: tuple of (u, v) with int labels (internal 1..n, external < 0).
    decs: tuple of (vertex, label_index); dec_degs aligned with decs.

    Directions are flipped to (min, max) at cost (-1)^d each, the edge block
    is sorted at (-1)^(d-1) per crossing, the decoration block is sorted with
    the Koszul sign of its degree sequence.  Returns (edges, decs, sign) for
    the sorted word, or None when the word is identically zero (tadpole for
    odd d, repeated edge for even d, repeated odd decoration).

    The sign satisfies: element(input word) = sign * element(sorted word).
    """
    sign = 1
    flipped = []
    for (u, v) in edges:
        if u == v:
            if d & 1:
                return None  # tadpole, odd d
            flipped.append((u, v))
        elif _edge_key(u, v) <= _edge_key(v, u):
            flipped.append((u, v))
        else:
            flipped.append((v, u))
            if d & 1:
                sign = -sign
    keys = [_edge_key(u, v) for (u, v) in flipped]
    order = stable_argsort(keys)
    # edges all have degree d-1: sign = (-1)^((d-1) * inversions)
    if not (d & 1):
        inv = 0
        for i in range(len(order)):
            oi = order[i]
            for j in range(i + 1, len(order)):
                if oi > order[j]:
                    inv += 1
        if inv & 1:
            sign = -sign
    edges_s = tuple(flipped[i] for i in order)
    # repeated unordered edge kills the class for even d
    if not (d & 1):
        for i in range(1, len(edges_s)):
            if edges_s[i] == edges_s[i - 1]:
                return None
    dorder, dsign = sort_word(tuple(decs), tuple(dec_degs))
    sign *= dsign
    decs_s = tuple(decs[i] for i in dorder)
    for i in range(1, len(decs_s)):
        if decs_s[i] == decs_s[i - 1] and (dec_degs[dorder[i]] & 1):
            return None
    return edges_s, decs_s, sign


def _refine_colors(n, edges, decs):
    """Iterated neighborhood refinement; returns a color id per vertex 1..n."""
    nbrs = [[] for _ in range(n + 1)]
    for (u, v) in edges:
        if u > 0:
            nbrs[u].append(v)
        if v > 0:
            nbrs[v].append(u)
    deco = [[] for _ in range(n + 1)]
    for (v, lab) in decs:
        if v > 0:
            deco[v].append(lab)
    color = [0] * (n + 1)
    base = []
    for v in range(1, n + 1):
        ext = sorted(x for x in nbrs[v] if x < 0)
        base.append((len(nbrs[v]), tuple(sorted(deco[v])), tuple(ext)))
    ranks = {k: i for i, k in enumerate(sorted(set(base)))}
    for v in range(1, n + 1):
        color[v] = ranks[base[v - 1]]
    for _ in range(n):
        sig = []
        for v in range(1, n + 1):
            ncol = sorted(color[u] if u > 0 else -u - 1000000 for u in nbrs[v])
            sig.append((color[v], tuple(ncol)))
        ranks = {k: i for i, k in enumerate(sorted(set(sig)))}
        new = [0] * (n + 1)
        for v in range(1, n + 1):
            new[v] = ranks[sig[v - 1]]
        if new == color:
            break
        color = new
    return color


def _candidate_perms(n, color):
    """Yield label maps old->new (index 1..n) respecting the color classes.

    Vertices are grouped by color; class blocks receive consecutive new
    labels in color order, and all orderings within each class are tried.
    """
    import itertools

    classes = {}
    for v in range(1, n + 1):
        classes.setdefault(color[v], []).append(v)
    blocks = [classes[c] for c in sorted(classes)]
    starts = []
    s = 1
    for b in blocks:
        starts.append(s)
        s += len(b)
    pools = [list(itertools.permutations(b)) for b in blocks]
    for combo in itertools.product(*pools):
        sigma = [0] * (n + 1)
        for b_i, arr in enumerate(combo):
            st = starts[b_i]
            for off, old in enumerate(arr):
                sigma[old] = st + off
        yield tuple(sigma)


def canonical_search(d, n, edges, decs, dec_degs):
    """Canonical representative of an internal-vertex relabeling class.

    Input word must already be valid (labels 1..n internal, negatives
    external).  Returns (edges, decs, sign) for the canonical word with
    element(input) = sign * element(canonical), or None if the class is zero
    (orientation-reversing automorphism, tadpole/double-edge rules included).
    """
    color = _refine_colors(n, edges, decs)
    if len(set(color[1:])) == n:
        # discrete coloring: a single candidate relabeling, no automorphisms
        sigma = [0] * (n + 1)
        order = sorted(range(1, n + 1), key=lambda v: color[v])
        for new, old in enumerate(order):
            sigma[old] = new + 1
        redges = tuple(
            (sigma[u] if u > 0 else u, sigma[v] if v > 0 else v) for (u, v) in edges
        )
        rdecs = tuple((sigma[v] if v > 0 else v, lab) for (v, lab) in decs)
        norm = normalize_word(d, redges, rdecs, dec_degs)
        if norm is None:
            return None
        e_s, d_s, s_norm = norm
        if d & 1:
            s_norm *= perm_parity(tuple(sigma[v] - 1 for v in range(1, n + 1)))
        return e_s, d_s, s_norm
    best = None
    best_sign = 0
    for sigma in _candidate_perms(n, color):
        redges = tuple(
            (sigma[u] if u > 0 else u, sigma[v] if v > 0 else v) for (u, v) in edges
        )
        rdecs = tuple((sigma[v] if v > 0 else v, lab) for (v, lab) in decs)
        norm = normalize_word(d, redges, rdecs, dec_degs)
        if norm is None:
            return None
        e_s, d_s, s_norm = norm
        # vertex markers (degree -d each) are re-sorted into new label order
        if d & 1:
            s_norm *= perm_parity(tuple(sigma[v] - 1 for v in range(1, n + 1)))
        enc = (e_s, d_s)
        if best is None or enc < best:
            best = enc
            best_sign = s_norm
        elif enc == best and s_norm != best_sign:
            return None
    if best is None:  # n == 0: single empty candidate
        norm = normalize_word(d, edges, decs, dec_degs)
        if norm is None:
            return None
        return norm
    return best[0], best[1], best_sign


def canonical_form_unsigned(d, n, edges, decs, dec_degs):
    """Minimal-encoding representative ignoring orientation signs.

    Unlike canonical_search this keeps classes that vanish only through an
    orientation-reversing automorphism (decorations may later break the
    symmetry); letter-level zeros (odd-d tadpoles, even-d repeated edges,
    repeated odd decorations) still return None.
    """
    color = _refine_colors(n, edges, decs)
    best = None
    for sigma in _candidate_perms(n, color):
        redges = tuple(
            (sigma[u] if u > 0 else u, sigma[v] if v > 0 else v) for (u, v) in edges
        )
        rdecs = tuple((sigma[v] if v > 0 else v, lab) for (v, lab) in decs)
        norm = normalize_word(d, redges, rdecs, dec_degs)
        if norm is None:
            return None
        e_s, d_s, _sign = norm
        enc = (e_s, d_s)
        if best is None or enc < best:
            best = enc
    return best


def count_inversions(seq):
    """Number of inversions of an int sequence (quadratic; inputs are small)."""
    inv = 0
    m = len(seq)
    for i in range(m):
        si = seq[i]
        for j in range(i + 1, m):
            if si > seq[j]:
                inv += 1
    return inv
