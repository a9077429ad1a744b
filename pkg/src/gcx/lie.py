"""The complete filtered dg Lie algebra of connected decorated graphs.

Generators are connected vacuum graphs; the Lie degree of a graph is
1 - graph_degree, so that Maurer-Cartan elements sit in degree 1 and the
full graph complex is the Chevalley-Eilenberg complex of this algebra with
generator degrees 1 - lie_degree.  Brackets and the differential are not
hand-signed: they are read off the full graph complex by dualization.

  * bracket: the coefficient of the two-component monomial x.y in the
    splitting differential of a candidate join z;
  * differential: the transpose of the one-component part of the full
    differential over an enumerated window;
  * osp action: the transpose of the decoration action.

The read-off sign laws are fixed by the exact Jacobi/Leibniz/Maurer-Cartan
suite; see docs/signs.md.
"""

from __future__ import annotations

from fractions import Fraction

from gcx import basis as basismod
from gcx import twisted
from gcx.graphs import (
    DecoratedGraph,
    GraphError,
    GraphSum,
    canonicalize,
    connected_components,
    filtration_weight,
    graph_degree,
    is_connected as is_connected_graph,
)
from gcx.linalg import SparseMatQ
from gcx.pairing import format_fraction

# Sign laws relating the Lie structure to the full graph complex (pinned by
# the exact identity suite; see docs/signs.md).  With q = graph_degree:
#   differential read-off:  d(x) += EPS(x) * (coeff of x in D(z)) * z
#   bracket read-off:       [x,y] += BETA(x,y) * (coeff of x.y in D(z)) * z


def _eps(lam_x):
    return 1


def _beta(lam_x, lam_y):
    return 1


def lie_degree(space, g):
    """Lie-side degree of a connected generator: 1 - graph_degree."""
    return 1 - graph_degree(space, g)




class LieElement:
    """osp component plus a connected-graph sum, truncated at weight N."""

    __slots__ = ("space", "truncation", "graphs", "osp")

    def __init__(self, space, truncation, graphs=None, osp=None):
        self.space = space
        self.truncation = truncation
        self.graphs = graphs if graphs is not None else GraphSum(space, truncation)
        self.osp = dict(osp) if osp else {}
        for (g, _c) in self.graphs.terms.values():
            if not is_connected_graph(g):
                raise GraphError("Lie elements are sums of connected graphs: %s" % (g,))

    @classmethod
    def zero(cls, space, truncation):
        return cls(space, truncation)

    @classmethod
    def from_graph(cls, space, truncation, g, coeff=1):
        s = GraphSum(space, truncation)
        s.add_raw(g, coeff)
        return cls(space, truncation, s)

    def copy(self):
        return LieElement(self.space, self.truncation, self.graphs.copy(), dict(self.osp))

    def add(self, other, scale=1):
        if other.space is not self.space:
            raise GraphError("space mismatch")
        self.truncation = min(self.truncation, other.truncation)
        self.graphs.truncation = self.truncation
        self.graphs.add_sum(other.graphs, scale)
        for k, c in other.osp.items():
            v = self.osp.get(k, Fraction(0)) + scale * c
            if v:
                self.osp[k] = v
            else:
                self.osp.pop(k, None)
        return self

    def scaled(self, scale):
        out = LieElement(self.space, self.truncation, self.graphs.scaled(scale))
        if scale:
            out.osp = {k: c * scale for k, c in self.osp.items()}
        return out

    def is_zero(self):
        return self.graphs.is_zero() and not self.osp

    def degrees(self):
        degs = {lie_degree(self.space, g) for (g, _c) in self.graphs.terms.values()}
        degs |= {self.space.osp_neg_basis()[k].degree for k in self.osp}
        return sorted(degs)

    def homogeneous_degree(self):
        degs = self.degrees()
        if len(degs) > 1:
            raise GraphError("element is not homogeneous: degrees %s" % degs)
        return degs[0] if degs else None

    def __str__(self):
        bits = []
        if self.osp:
            bits.append(
                "osp[" + ", ".join("%s*f%d" % (format_fraction(c), k) for k, c in sorted(self.osp.items())) + "]"
            )
        if not self.graphs.is_zero():
            bits.append(str(self.graphs))
        return " + ".join(bits) if bits else "0"


# -- candidate windows and memoized differentials ----------------------------


def _diff_decomposition(space, z):
    """Split the full differential of a connected generator z.

    Returns (linear, quadratic) where linear maps canonical connected graph
    keys to coefficients and quadratic maps (x_key, y_key) sorted pairs of
    connected factors to coefficients of the canonical product monomial.
    """
    cache = space._cache.setdefault("lie_ddec", {})
    ck = z.key()
    if ck in cache:
        return cache[ck]
    gs = GraphSum(space, 10 ** 9)
    gs.add_canonical(z, 1)
    img = twisted.full_differential(gs)
    linear = {}
    quad = {}
    for (g, c) in img.terms.values():
        comps = connected_components(space, g)
        if comps is None:
            continue
        factors, sign = comps
        if len(factors) == 1:
            linear[factors[0].key()] = linear.get(factors[0].key(), Fraction(0)) + c
        elif len(factors) == 2:
            # express g against the twisted product x.y, not the bare word
            # concatenation: the product carries (-1)^{|m2| n1 d}
            fx, fy = factors
            gra_y = sum(space.degrees[lab] for (_v, lab) in fy.decs) + (
                space.d - 1
            ) * len(fy.edges)
            if (gra_y * fx.n * space.d) & 1:
                sign = -sign
            key = (fx.key(), fy.key())
            quad[key] = quad.get(key, Fraction(0)) + sign * c
        else:
            raise GraphError("differential produced %d components" % len(factors))
    linear = {k: v for k, v in linear.items() if v}
    quad = {k: v for k, v in quad.items() if v}
    cache[ck] = (linear, quad)
    return linear, quad


def _window(space, degree, weight_max):
    """Memoized connected canonical basis at a given fGC degree."""
    cache = space._cache.setdefault("lie_window", {})
    key = (degree, weight_max)
    if key not in cache:
        cache[key] = basismod.enumerate_basis(
            space, degree, weight_max, connected=True
        )
    return cache[key]


# -- bracket -----------------------------------------------------------------


def _join_candidates(space, gx, gy):
    """Canonical joins of gx and gy by one edge, including invisible-unit legs.

    A join removes one (possibly unit) decoration from each side and adds an
    edge between the two vertices; candidates with a pairing-incompatible
    label pair are skipped wholesale by the caller via the dual read-off.
    """
    out = set()
    d = space.d
    shift = gx.n

    def legs(g):
        # (vertex, dec position or None); None is the invisible unit leg
        ls = [(v, p) for p, (v, _lab) in enumerate(g.decs)]
        ls.extend((v, None) for v in range(1, g.n + 1))
        return ls

    for (u, px) in legs(gx):
        for (v, py) in legs(gy):
            labx = gx.decs[px][1] if px is not None else space.unit_index
            laby = gy.decs[py][1] if py is not None else space.unit_index
            if space.degrees[labx] + space.degrees[laby] != d:
                continue
            dec_x = tuple(dc for p, dc in enumerate(gx.decs) if p != px)
            dec_y = tuple(
                (vv + shift, lab) for p, (vv, lab) in enumerate(gy.decs) if p != py
            )
            edges = gx.edges + tuple((a + shift, b + shift) for (a, b) in gy.edges)
            edges = edges + ((u, v + shift),)
            raw = DecoratedGraph(d, gx.n + gy.n, (), edges, dec_x + dec_y)
            res = canonicalize(space, raw)
            if res is not None:
                out.add(res[0])
    return out


def _bracket_graphs(space, gx, gy, truncation):
    """[x, y] for connected canonical generators, sorted so key(gx) <= key(gy)."""
    out = GraphSum(space, truncation)
    swap = gx.key() > gy.key()
    if swap:
        gx, gy = gy, gx
    lx = lie_degree(space, gx)
    ly = lie_degree(space, gy)
    pair = (gx.key(), gy.key())
    factor = 2 if gx.key() == gy.key() else 1
    for z in _join_candidates(space, gx, gy):
        _linear, quad = _diff_decomposition(space, z)
        c = quad.get(pair)
        if c:
            out.add_canonical(z, _beta(lx, ly) * factor * c)
    if swap:
        s = -1 if ((lx * ly) & 1) else 1
        out = out.scaled(-s)
    return out


def _action_candidates(space, f, g):
    """Connected z with (dual generator of f) (x) g appearing in d_action(z)."""
    out = set()
    red = space.reduced_indices()
    fm = f.matrix()
    # z = g with one decoration label replaced against the action
    for p, (v, lab) in enumerate(g.decs):
        for src in red:
            if (lab, src) in fm:
                raw = DecoratedGraph(
                    g.d, g.n, (), g.edges, g.decs[:p] + ((v, src),) + g.decs[p + 1 :]
                )
                res = canonicalize(space, raw)
                if res is not None:
                    out.add(res[0])
    # z = g plus one decoration that the action sends to the unit
    for src in red:
        if (space.unit_index, src) in fm:
            for v in range(1, g.n + 1):
                raw = DecoratedGraph(g.d, g.n, (), g.edges, g.decs + ((v, src),))
                res = canonicalize(space, raw)
                if res is not None:
                    out.add(res[0])
    return out


def _action_decomposition(space, z):
    """Coefficients of (b,) (x) graph words in d_action of a generator z."""
    cache = space._cache.setdefault("lie_adec", {})
    ck = z.key()
    if ck in cache:
        return cache[ck]
    x = twisted.CEWordSum(space, 10 ** 9)
    x.add((), z, 1, raw=False)
    img = twisted.d_action(x)
    out = {}
    for (w, g, c) in img.terms.values():
        assert len(w) == 1
        if is_connected_graph(g) or g.n == 0:
            out[(w[0], g.key())] = c
    cache[ck] = out
    return out


def _bracket_osp_graph(space, k, g, truncation):
    """[f_k, x] for a connected generator x: minus the dual of d_action.

    The global minus is the read-off sign pinned by the mixed
    Jacobi/Leibniz suite, including triples with two ortho-symplectic
    factors of different degrees (docs/signs.md).
    """
    out = GraphSum(space, truncation)
    fs = space.osp_neg_basis()
    f = fs[k]
    for z in _action_candidates(space, f, g):
        dec = _action_decomposition(space, z)
        c = dec.get((k, g.key()))
        if c:
            out.add_canonical(z, -c)
    return out


def bracket(x, y):
    """Graded Lie bracket on osp^{<0} |x GC, truncation = min of inputs."""
    if x.space is not y.space:
        raise GraphError("space mismatch in bracket")
    space = x.space
    N = min(x.truncation, y.truncation)
    out = LieElement.zero(space, N)
    fs = space.osp_neg_basis()
    # graph-graph part
    for (gx, cx) in x.graphs.terms.values():
        for (gy, cy) in y.graphs.terms.values():
            out.graphs.add_sum(_bracket_graphs(space, gx, gy, N), cx * cy)
    # osp-osp part
    for kx, cx in x.osp.items():
        for ky, cy in y.osp.items():
            br = space.osp_bracket(fs[kx], fs[ky])
            if not br.is_zero():
                for k, c in space.osp_expand(br).items():
                    v = out.osp.get(k, Fraction(0)) + cx * cy * c
                    if v:
                        out.osp[k] = v
                    else:
                        out.osp.pop(k, None)
    # mixed parts
    for kx, cx in x.osp.items():
        for (gy, cy) in y.graphs.terms.values():
            out.graphs.add_sum(_bracket_osp_graph(space, kx, gy, N), cx * cy)
    for (gx, cx) in x.graphs.terms.values():
        for ky, cy in y.osp.items():
            lf = fs[ky].degree
            lg = lie_degree(space, gx)
            s = -1 if ((lf * lg) & 1) else 1
            out.graphs.add_sum(_bracket_osp_graph(space, ky, gx, N), -s * cx * cy)
    return out


# -- differential ------------------------------------------------------------


def lie_differential(x):
    """Transpose of the one-component full differential over the window.

    Exact modulo F^{N+1} for N = x.truncation; raises when a graph term of x
    already exceeds the truncation (nothing to represent the image in).
    """
    space = x.space
    N = x.truncation
    out = LieElement.zero(space, N)
    for (g, c) in x.graphs.terms.values():
        w = filtration_weight(space, g)
        if w > N:
            raise GraphError(
                "term of weight %d exceeds truncation %d; image not representable" % (w, N)
            )
        deg = graph_degree(space, g)
        lam = lie_degree(space, g)
        for z in _window(space, deg - 1, N):
            linear, _quad = _diff_decomposition(space, z)
            a = linear.get(g.key())
            if a:
                out.graphs.add_canonical(z, _eps(lam) * a * c)
    # osp part has zero differential
    return out


# -- Maurer-Cartan calculus ---------------------------------------------------


def z0(space, truncation):
    """The one-vertex Maurer-Cartan element.

    One vertex decorated by each dual pair of the pairing, units dropped:
    (1/2) sum_i (-1)^{d |v_i|} vertex(v_i, v_i^#).  The sign pattern and the
    half (one term per unordered dual pair) are pinned by the Maurer-Cartan
    property, which also forces the element to vanish for odd spheres; see
    docs/signs.md.  Basis independence is inherited from the diagonal class.
    """
    out = LieElement.zero(space, truncation)
    dual = space.dual_basis()
    half = Fraction(1, 2)
    for i in range(space.dim):
        s = -1 if ((space.d * space.degrees[i]) & 1) else 1
        for j, c in enumerate(dual[i]):
            if not c:
                continue
            labs = [k for k in (i, j) if k != space.unit_index]
            raw = DecoratedGraph(space.d, 1, (), (), tuple((1, k) for k in labs))
            out.graphs.add_raw(raw, half * s * c)
    return out


def mc_residual(z, truncation=None):
    """d z + 1/2 [z, z] reduced modulo F^{N+1}; zero iff z is MC to order N."""
    N = truncation if truncation is not None else z.truncation
    if N > z.truncation:
        raise GraphError("element truncated at %d; cannot check order %d" % (z.truncation, N))
    degs = z.degrees()
    if degs and degs != [1]:
        raise GraphError("Maurer-Cartan candidates must be homogeneous of Lie degree 1, got %s" % degs)
    zN = LieElement(z.space, N)
    zN.add(z)
    res = lie_differential(zN)
    res.add(bracket(zN, zN), Fraction(1, 2))
    return res


def twist(z, truncation=None):
    """Differential transformer x -> d x + [z, x]; refuses non-MC input."""
    N = truncation if truncation is not None else z.truncation
    res = mc_residual(z, N)
    if not res.is_zero():
        raise GraphError("twist refused: residual nonzero to order %d: %s" % (N, res))

    def dz(x):
        out = lie_differential(x)
        out.add(bracket(z, x))
        return out

    return dz


# -- views --------------------------------------------------------------------


def valence_ok(g, min_valence=3):
    return basismod.min_valence_ok(g, min_valence)


def valence_membership(view):
    """Membership predicate for the valence views '>=3' and 'has-trivalent'."""
    if view == ">=3":
        return lambda g: valence_ok(g, 3)
    if view == "has-trivalent":
        return basismod.has_trivalent_vertex
    raise ValueError("unknown valence view %r" % (view,))


def valence_projector(view):
    """Projector dropping non-members; only the >=3 view is a subalgebra."""
    if view != ">=3":
        raise ValueError("projector is only legal for the >=3 view")
    member = valence_membership(view)

    def proj(x):
        out = LieElement.zero(x.space, x.truncation)
        out.osp = dict(x.osp)
        for (g, c) in x.graphs.terms.values():
            if member(g):
                out.graphs.add_canonical(g, c)
        return out

    return proj


class LieView:
    """A sub-dg-Lie window: optional valence restriction, twist, truncation.

    Provides deterministic bases per Lie degree and exact differential
    matrices (rows = source) for the quotient modulo F^{N+1}.
    """

    def __init__(self, space, truncation, min_valence=0, z=None, with_osp=False,
                 nonpositive=False):
        self.space = space
        self.truncation = truncation
        self.min_valence = min_valence
        self.with_osp = with_osp
        self.nonpositive = nonpositive
        self.z = z
        if z is not None and not mc_residual(z, truncation).is_zero():
            raise GraphError("view twist is not Maurer-Cartan to order %d" % truncation)
        self._basis_cache = {}

    def differential(self, x):
        out = lie_differential(x)
        if self.z is not None:
            out.add(bracket(self.z, x))
        return out

    def generators(self, lam):
        """Basis of the untruncated view at Lie degree lam: graphs then osp."""
        key = lam
        if key in self._basis_cache:
            return self._basis_cache[key]
        gen = []
        if self.with_osp:
            for k, f in enumerate(self.space.osp_neg_basis()):
                if f.degree == lam:
                    gen.append(("osp", k))
        for g in _window(self.space, 1 - lam, self.truncation):
            if self.min_valence and not valence_ok(g, self.min_valence):
                continue
            gen.append(("graph", g))
        self._basis_cache[key] = gen
        return gen

    def _gen_element(self, gen):
        out = LieElement.zero(self.space, self.truncation)
        kind, payload = gen
        if kind == "osp":
            out.osp[payload] = Fraction(1)
        else:
            out.graphs.add_canonical(payload, Fraction(1))
        return out

    def _coords(self, x, lam):
        gen = self.generators(lam)
        index = {}
        for i, (kind, payload) in enumerate(gen):
            index[(kind, payload if kind == "osp" else payload.key())] = i
        vec = {}
        for k, c in x.osp.items():
            i = index.get(("osp", k))
            if i is None:
                raise GraphError("osp component outside view basis")
            vec[i] = c
        for (g, c) in x.graphs.terms.values():
            i = index.get(("graph", g.key()))
            if i is None:
                raise GraphError("graph term outside view basis: %s" % (g,))
            vec[i] = c
        return vec

    def matrix(self, lam):
        """Differential matrix from degree lam to lam + 1 (rows = source)."""
        src = self.generators(lam)
        dst = self.generators(lam + 1)
        index = {}
        for i, (kind, payload) in enumerate(dst):
            index[(kind, payload if kind == "osp" else payload.key())] = i
        mat = SparseMatQ(len(src), len(dst))
        for r, gen in enumerate(src):
            img = self.differential(self._gen_element(gen))
            for k, c in img.osp.items():
                mat.data[(r, index[("osp", k)])] = c
            for (g, c) in img.graphs.terms.values():
                i = index.get(("graph", g.key()))
                if i is None:
                    raise GraphError("image term outside window: %s" % (g,))
                mat.data[(r, i)] = c
        return mat

    def truncated_basis(self, lam):
        """Basis vectors of the nonpositive truncation at degree lam.

        Vectors are dicts over generators(lam); degree < 0 gives the full
        window, degree 0 is cut down to cocycles of the view differential,
        degree > 0 is empty.
        """
        if not self.nonpositive:
            raise GraphError("truncated_basis requires a nonpositive view")
        if lam > 0:
            return []
        gen = self.generators(lam)
        if lam < 0:
            return [{i: Fraction(1)} for i in range(len(gen))]
        # degree-0 cocycles: vectors x over the source basis with x d = 0,
        # i.e. the left kernel in the rows-are-source convention
        mat = self.matrix(0)
        return mat.left_kernel_basis()


def truncate_nonpositive(view):
    """Membership predicate for L<0> inside a LieView with fixed differential."""

    def member(x):
        degs = x.degrees()
        if not degs:
            return True
        if any(l > 0 for l in degs):
            return False
        if 0 in degs:
            # degree-0 part must be a cocycle of the view differential
            parts = LieElement.zero(x.space, x.truncation)
            parts.osp = {
                k: c
                for k, c in x.osp.items()
                if x.space.osp_neg_basis()[k].degree == 0
            }
            for (g, c) in x.graphs.terms.values():
                if lie_degree(x.space, g) == 0:
                    parts.graphs.add_canonical(g, c)
            if not view.differential(parts).is_zero():
                return False
        return True

    return member


def assemble_gM(space, z, truncation, min_valence=3):
    """The truncated twisted semidirect product (osp |x GC^{>=3})^z <0>."""
    member = valence_membership(">=3")
    for (g, _c) in z.graphs.terms.values():
        if not member(g):
            raise GraphError("twist element is not in the >=3 view: %s" % (g,))
    res = mc_residual(z, truncation)
    if not res.is_zero():
        raise GraphError("twist element is not MC to order %d: %s" % (truncation, res))
    return LieView(
        space,
        truncation,
        min_valence=min_valence,
        z=z,
        with_osp=True,
        nonpositive=True,
    )


# -- Chevalley-Eilenberg complexes of windowed views ---------------------------


class CEComplex:
    """CE cochains of a finite window of a dg Lie algebra.

    Generators are the view's truncated basis vectors; structure constants
    are computed exactly in window coordinates, and the CE differential uses
    the same sign laws as the graph-complex read-off (so the CE complex of
    the untwisted full window reproduces the full graph complex).
    """

    def __init__(self, view, min_degree, max_degree):
        self.view = view
        self.min_degree = min_degree
        if view.nonpositive:
            max_degree = min(max_degree, 0)
        gens = []  # (lam, vec over generators(lam))
        for lam in range(min_degree, max_degree + 1):
            if view.nonpositive:
                vecs = view.truncated_basis(lam)
            else:
                vecs = [{i: Fraction(1)} for i in range(len(view.generators(lam)))]
            gens.extend((lam, v) for v in vecs)
        self.gens = gens
        self.gen_degree = [1 - lam for (lam, _v) in gens]
        self._dmat = None
        self._bracket = None

    def _element(self, k):
        lam, vec = self.gens[k]
        out = LieElement.zero(self.view.space, self.view.truncation)
        gen = self.view.generators(lam)
        for i, c in vec.items():
            kind, payload = gen[i]
            if kind == "osp":
                out.osp[payload] = out.osp.get(payload, Fraction(0)) + c
            else:
                out.graphs.add_canonical(payload, c)
        return out

    def _structure(self):
        if self._dmat is not None:
            return
        n = len(self.gens)
        elements = [self._element(k) for k in range(n)]
        # coordinates of an arbitrary LieElement over the generator list
        def coords(x):
            degs = x.degrees()
            vec = {}
            for lam in degs:
                # project onto each degree and solve over that degree's gens
                idxs = [k for k in range(n) if self.gens[k][0] == lam]
                if not idxs:
                    raise GraphError("image outside CE window (degree %d)" % lam)
                cols = []
                keys = set()
                for k in idxs:
                    e = elements[k]
                    col = {}
                    for kk, c in e.osp.items():
                        col[("osp", kk)] = c
                        keys.add(("osp", kk))
                    for (g, c) in e.graphs.terms.values():
                        col[("graph", g.key())] = c
                        keys.add(("graph", g.key()))
                    cols.append(col)
                tgt = {}
                for kk, c in x.osp.items():
                    if x.space.osp_neg_basis()[kk].degree == lam:
                        tgt[("osp", kk)] = c
                        keys.add(("osp", kk))
                for (g, c) in x.graphs.terms.values():
                    if lie_degree(x.space, g) == lam:
                        tgt[("graph", g.key())] = c
                        keys.add(("graph", g.key()))
                keys = sorted(keys)
                from gcx.linalg import solve_dense

                a = [[cols[c].get(key, Fraction(0)) for c in range(len(idxs))] for key in keys]
                b = [tgt.get(key, Fraction(0)) for key in keys]
                sol = solve_dense(a, b)
                if sol is None:
                    raise GraphError("image not in CE window span at degree %d" % lam)
                for c, k in enumerate(idxs):
                    if sol[c]:
                        vec[k] = sol[c]
            return vec

        dmat = {}
        for k in range(n):
            img = self.view.differential(elements[k])
            if not img.is_zero():
                dmat[k] = coords(img)
        brk = {}
        for i in range(n):
            for j in range(i, n):
                # brackets dropping below the window carry no structure
                # constants for any window generator
                if self.gens[i][0] + self.gens[j][0] < self.min_degree:
                    continue
                img = bracket(elements[i], elements[j])
                if not img.is_zero():
                    brk[(i, j)] = coords(img)
        self._dmat = dmat
        self._bracket = brk

    def words(self, ce_degree, max_len=6):
        """Canonical CE words (sorted index tuples) of the given degree."""
        self._structure()
        n = len(self.gens)
        out = []

        def rec(start, deg, acc):
            if deg == ce_degree and acc:
                out.append(tuple(acc))
            if deg >= ce_degree:
                return
            if len(acc) >= max_len:
                return
            for k in range(start, n):
                q = self.gen_degree[k]
                if q <= 0 or deg + q > ce_degree:
                    continue
                if acc and acc[-1] == k and (q & 1):
                    continue
                acc.append(k)
                rec(k, deg + q, acc)
                acc.pop()

        rec(0, 0, [])
        return sorted(out)

    def _word_add(self, sums, word, coeff):
        # canonical sort with Koszul sign over generator degrees
        from gcx import kernels
        from gcx.graphs import koszul_sign

        order = kernels.stable_argsort(tuple(word))
        degs = tuple(self.gen_degree[k] for k in word)
        s = koszul_sign(order, degs)
        w = tuple(word[i] for i in order)
        for i in range(1, len(w)):
            if w[i] == w[i - 1] and (self.gen_degree[w[i]] & 1):
                return
        v = sums.get(w, Fraction(0)) + s * coeff
        if v:
            sums[w] = v
        else:
            sums.pop(w, None)

    def differential_of_word(self, word):
        """CE differential: derivation extension of the generator formula."""
        self._structure()
        out = {}
        prefix = 0
        for pos, k in enumerate(word):
            rest = word[:pos] + word[pos + 1 :]
            psign = -1 if (prefix & 1) else 1
            # linear piece: d(xi_k) = sum_i eps * D^k_i xi_i where D^k_i is
            # the coefficient of e_k in the view differential of e_i
            for i in range(len(self.gens)):
                c = self._dmat.get(i, {}).get(k)
                if c:
                    lam_i = self.gens[i][0]
                    self._word_add(out, (i,) + rest, psign * _eps(lam_i) * c)
            # quadratic piece: bracket structure constants
            for (i, j), row in self._bracket.items():
                c = row.get(k)
                if not c:
                    continue
                li = self.gens[i][0]
                lj = self.gens[j][0]
                b = _beta(li, lj) * c
                if i == j:
                    b = b / 2
                self._word_add(out, (i, j) + rest, psign * b)
            prefix += self.gen_degree[k]
        return out

    def matrix(self, ce_degree, max_len=6):
        src = self.words(ce_degree, max_len)
        dst = self.words(ce_degree + 1, max_len)
        index = {w: i for i, w in enumerate(dst)}
        mat = SparseMatQ(len(src), len(dst))
        for r, w in enumerate(src):
            img = self.differential_of_word(w)
            for w2, c in img.items():
                i = index.get(w2)
                if i is None:
                    raise GraphError("CE image word outside window")
                mat.data[(r, i)] = c
        return mat
