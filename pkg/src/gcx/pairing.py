"""Poincare-duality pairing spaces: loading, dual bases, diagonal class, osp^{<0}.

A pairing space models the cohomology of a closed connected manifold: a
graded rational vector space with a one-dimensional unit in degree 0 and a
non-degenerate graded-symmetric pairing of degree -d.  Everything here is
exact over Fraction.
"""

from __future__ import annotations

import json
import re
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

LABEL_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


class SpaceError(ValueError):
    """Raised when a pairing-space document fails validation."""


def parse_fraction(s):
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, str):
        return Fraction(s)
    raise SpaceError("rational entries must be integers or 'p/q' strings, got %r" % (s,))


def format_fraction(x):
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return "%d/%d" % (x.numerator, x.denominator)


@dataclass(frozen=True)
class OspElement:
    """Homogeneous negative-degree map on a pairing space.

    entries[(j, i)] = coefficient of basis[j] in f(basis[i]); only nonzero
    entries are stored, and deg(basis[j]) = deg(basis[i]) + degree.
    """

    space: "PairingSpace"
    degree: int
    entries: tuple  # tuple of ((j, i), Fraction)

    def matrix(self):
        return dict(self.entries)

    def apply(self, i):
        """f(basis[i]) as a list of (j, coeff)."""
        return [(j, c) for ((j, k), c) in self.entries if k == i]

    def is_zero(self):
        return not self.entries

    def __str__(self):
        sp = self.space
        parts = []
        for ((j, i), c) in self.entries:
            parts.append(
                "%s:%s->%s" % (format_fraction(c), sp.labels[i], sp.labels[j])
            )
        return "osp(deg %d; %s)" % (self.degree, ", ".join(parts))


@dataclass(frozen=True, eq=False)
class PairingSpace:
    d: int
    labels: tuple
    degrees: tuple
    unit_index: int
    gram: tuple  # row-major tuple of tuples of Fraction
    name: str = "space"
    decoration_weight: str = "homological"  # or "unit"
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    # -- queries ---------------------------------------------------------

    @property
    def dim(self):
        return len(self.labels)

    def pair(self, i, j):
        return self.gram[i][j]

    def label_index(self, label):
        try:
            return self.labels.index(label)
        except ValueError:
            raise SpaceError("unknown basis label %r" % (label,)) from None

    def reduced_indices(self):
        """Indices usable as decorations (everything except the unit)."""
        return tuple(i for i in range(self.dim) if i != self.unit_index)

    def decoration_weight_of(self, i):
        """Filtration contribution of one decoration label."""
        if self.decoration_weight == "unit":
            return 1
        # homological grading of the corresponding homology class; under the
        # dual-basis identification this is the label's own degree
        return self.degrees[i]

    # -- derived structure ----------------------------------------------

    def dual_basis(self):
        """Columns c_i with <v_j, sum_k c_i[k] v_k> = delta_{ji}.

        Returns a list of vectors, vector i being a tuple of Fractions over
        the basis; homogeneous of degree d - deg(v_i).
        """
        if "dual" in self._cache:
            return self._cache["dual"]
        n = self.dim
        inv = _invert(self.gram)
        cols = tuple(tuple(inv[k][i] for k in range(n)) for i in range(n))
        self._cache["dual"] = cols
        return cols

    def diagonal_class(self):
        """sum_i (-1)^{|v_i|} v_i (x) v_i^# as a list of (i, j, coeff)."""
        if "diag" in self._cache:
            return self._cache["diag"]
        dual = self.dual_basis()
        terms = []
        for i in range(self.dim):
            s = -1 if self.degrees[i] & 1 else 1
            for j, c in enumerate(dual[i]):
                if c:
                    terms.append((i, j, s * c))
        terms = tuple(terms)
        self._cache["diag"] = terms
        return terms

    def osp_neg_basis(self):
        """Exact basis of the negative-degree ortho-symplectic maps."""
        if "osp" in self._cache:
            return self._cache["osp"]
        from gcx import linalg

        out = []
        degs = self.degrees
        maxdeg = max(degs)
        for delta in range(-1, -maxdeg - 1, -1):
            # unknowns: entries f[j][i] with deg_j = deg_i + delta, i != unit
            slots = [
                (j, i)
                for i in range(self.dim)
                for j in range(self.dim)
                if i != self.unit_index and degs[j] == degs[i] + delta
            ]
            if not slots:
                continue
            pos = {s: k for k, s in enumerate(slots)}
            rows = []
            # skew condition on all basis pairs (x_i, y_j):
            # sum_k f[k][i] G[k][j] + (-1)^(delta*|x_i|) sum_k f[k][j] G[i][k] = 0
            for i in range(self.dim):
                for j in range(self.dim):
                    row = {}
                    for k in range(self.dim):
                        if (k, i) in pos and self.gram[k][j]:
                            row[pos[(k, i)]] = row.get(pos[(k, i)], Fraction(0)) + self.gram[k][j]
                    s = -1 if (delta * degs[i]) & 1 else 1
                    for k in range(self.dim):
                        if (k, j) in pos and self.gram[i][k]:
                            row[pos[(k, j)]] = row.get(pos[(k, j)], Fraction(0)) + s * self.gram[i][k]
                    row = {k: v for k, v in row.items() if v}
                    if row:
                        rows.append(row)
            mat = linalg.SparseMatQ.from_rows(len(rows), len(slots), rows)
            for vec in mat.kernel_basis():
                entries = tuple(
                    (slots[k], c) for k, c in sorted(vec.items()) if c
                )
                out.append(OspElement(self, delta, entries))
        out = tuple(out)
        self._cache["osp"] = out
        return out

    def osp_bracket(self, f, g):
        """Graded commutator f g - (-1)^{|f||g|} g f as an OspElement."""
        if f.space is not self or g.space is not self:
            raise SpaceError("osp bracket requires elements of the same space")
        degree = f.degree + g.degree
        assert degree < 0, "out of osp^{<0}: sum of negative degrees"
        fm, gm = f.matrix(), g.matrix()
        comp = {}
        for ((j, k), a) in fm.items():
            for ((kk, i), b) in gm.items():
                if kk == k:
                    comp[(j, i)] = comp.get((j, i), Fraction(0)) + a * b
        s = -1 if (f.degree * g.degree) & 1 else 1
        for ((j, k), a) in gm.items():
            for ((kk, i), b) in fm.items():
                if kk == k:
                    comp[(j, i)] = comp.get((j, i), Fraction(0)) - s * a * b
        entries = tuple(sorted((k, v) for k, v in comp.items() if v))
        return OspElement(self, degree, entries)

    def osp_expand(self, f):
        """Coordinates of an OspElement over osp_neg_basis (exact solve)."""
        from gcx import linalg

        basis = self.osp_neg_basis()
        idx = [k for k, b in enumerate(basis) if b.degree == f.degree]
        slots = sorted({s for k in idx for (s, _c) in basis[k].entries})
        if f.is_zero():
            return {}
        pos = {s: r for r, s in enumerate(slots)}
        fm = f.matrix()
        for s in fm:
            if s not in pos:
                raise SpaceError("element not in the span of osp_neg_basis")
        cols = len(idx)
        rows = {r: {} for r in range(len(slots))}
        for c, k in enumerate(idx):
            for (s, v) in basis[k].entries:
                rows[pos[s]][c] = v
        rhs = [fm.get(s, Fraction(0)) for s in slots]
        sol = linalg.solve_dense(
            [[rows[r].get(c, Fraction(0)) for c in range(cols)] for r in range(len(slots))],
            rhs,
        )
        if sol is None:
            raise SpaceError("element not in the span of osp_neg_basis")
        return {idx[c]: sol[c] for c in range(cols) if sol[c]}


def _invert(gram):
    """Exact inverse of a square Fraction matrix (raises on singular)."""
    n = len(gram)
    a = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(gram)]
    row = 0
    for col in range(n):
        piv = None
        for r in range(row, n):
            if a[r][col]:
                piv = r
                break
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        pv = a[row][col]
        a[row] = [x / pv for x in a[row]]
        for r in range(n):
            if r != row and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[row])]
        row += 1
    if row < n:
        raise SpaceError("pairing matrix is singular")
    return [r[n:] for r in a]


def _kernel_vector(gram):
    """A nonzero kernel vector of a singular Fraction matrix, or None."""
    n = len(gram)
    a = [list(row) for row in gram]
    pivots = []
    row = 0
    for col in range(n):
        piv = None
        for r in range(row, n):
            if a[r][col]:
                piv = r
                break
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        pv = a[row][col]
        a[row] = [x / pv for x in a[row]]
        for r in range(n):
            if r != row and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[row])]
        pivots.append(col)
        row += 1
    free = [c for c in range(n) if c not in pivots]
    if not free:
        return None
    c0 = free[0]
    vec = [Fraction(0)] * n
    vec[c0] = Fraction(1)
    for r, pc in enumerate(pivots):
        vec[pc] = -a[r][c0]
    return vec


def validate(space):
    """Check all PairingSpace invariants; raises SpaceError on failure."""
    if space.d < 2:
        raise SpaceError("ambient dimension d must be >= 2 (edge-degree bookkeeping breaks at d=1)")
    if space.d <= 2:
        warnings.warn(
            "d <= 2: outside the paper-level hypotheses; algebra is still exact",
            stacklevel=3,
        )
    n = space.dim
    if n == 0:
        raise SpaceError("empty basis")
    if len(set(space.labels)) != n:
        raise SpaceError("duplicate basis labels")
    for lab in space.labels:
        if not LABEL_RE.match(lab):
            raise SpaceError("bad label %r (want [A-Za-z][A-Za-z0-9_]*)" % (lab,))
    units = [i for i, dg in enumerate(space.degrees) if dg == 0]
    if len(units) != 1:
        raise SpaceError("need exactly one degree-0 basis element (the unit), got %d" % len(units))
    if units[0] != space.unit_index:
        raise SpaceError("unit_index does not point at the degree-0 element")
    if any(dg < 0 for dg in space.degrees):
        raise SpaceError("degrees must be non-negative (cohomological)")
    if any(dg > space.d for dg in space.degrees):
        raise SpaceError("degree exceeds ambient dimension d")
    for i in range(n):
        for j in range(n):
            v = space.gram[i][j]
            if v and space.degrees[i] + space.degrees[j] != space.d:
                raise SpaceError(
                    "degree mismatch: <%s,%s> nonzero but degrees %d+%d != d=%d"
                    % (space.labels[i], space.labels[j], space.degrees[i], space.degrees[j], space.d)
                )
            s = -1 if (space.degrees[i] * space.degrees[j]) & 1 else 1
            if v != s * space.gram[j][i]:
                raise SpaceError(
                    "pairing not graded-symmetric at (%s,%s)" % (space.labels[i], space.labels[j])
                )
    ker = _kernel_vector([list(r) for r in space.gram])
    if ker is not None:
        desc = " + ".join(
            "%s*%s" % (format_fraction(c), space.labels[i]) for i, c in enumerate(ker) if c
        )
        raise SpaceError("degenerate pairing; kernel vector: %s" % desc)
    return space


def from_dict(doc, name="space", decoration_weight="homological"):
    try:
        d = int(doc["d"])
        basis = doc["basis"]
        pairing = doc.get("pairing", [])
    except (KeyError, TypeError, ValueError) as e:
        raise SpaceError("malformed space document: %s" % e) from None
    labels = []
    degrees = []
    for ent in basis:
        labels.append(str(ent["label"]))
        degrees.append(int(ent["degree"]))
    n = len(labels)
    gram = [[Fraction(0)] * n for _ in range(n)]
    index = {lab: i for i, lab in enumerate(labels)}
    for (la, lb, val) in pairing:
        if la not in index or lb not in index:
            raise SpaceError("pairing entry references unknown label (%r,%r)" % (la, lb))
        i, j = index[la], index[lb]
        v = parse_fraction(val)
        gram[i][j] = v
        # omitted symmetric partner is filled in by graded symmetry
        s = -1 if (degrees[i] * degrees[j]) & 1 else 1
        if gram[j][i] == 0 and i != j:
            gram[j][i] = s * v
    units = [i for i, dg in enumerate(degrees) if dg == 0]
    unit_index = units[0] if units else -1
    space = PairingSpace(
        d=d,
        labels=tuple(labels),
        degrees=tuple(degrees),
        unit_index=unit_index,
        gram=tuple(tuple(r) for r in gram),
        name=name,
        decoration_weight=decoration_weight,
    )
    return validate(space)


def load_space(path, decoration_weight="homological"):
    """Load and validate a pairing space from a JSON document."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as e:
        raise SpaceError("cannot read %s: %s" % (path, e)) from None
    except json.JSONDecodeError as e:
        raise SpaceError("parse error in %s: %s" % (path, e)) from None
    import os

    name = os.path.splitext(os.path.basename(str(path)))[0]
    return from_dict(doc, name=name, decoration_weight=decoration_weight)


def builtin_space_path(name):
    """Path of a bundled .space file (s2, s3, s4, t2, s1xs2)."""
    import os

    here = os.path.dirname(os.path.abspath(__file__))
    return os.path.join(here, "spaces", name if name.endswith(".space") else name + ".space")


def load_builtin(name, decoration_weight="homological"):
    return load_space(builtin_space_path(name), decoration_weight=decoration_weight)
