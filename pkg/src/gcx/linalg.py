"""Sparse exact linear algebra over the rationals.

Rank and kernels are computed by fraction-free (Bareiss-style) elimination on
denominator-cleared integer rows with Markowitz pivot scoring.  No floating
point anywhere; no modular shortcuts -- exactness is the contract.

Matrix orientation convention: entry (i, j) is the coefficient of target
basis element j in the image of source basis element i (rows = source), so a
two-step complex composes as matmul(d_in, d_out).
"""

from __future__ import annotations

import logging
from fractions import Fraction
from math import gcd

log = logging.getLogger(__name__)


class LinalgError(ValueError):
    pass


class SparseMatQ:
    """Immutable-by-convention sparse rational matrix."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows, cols, data=None):
        self.rows = rows
        self.cols = cols
        self.data = {}
        if data:
            for (i, j), v in data.items():
                self._set(i, j, Fraction(v))

    def _set(self, i, j, v):
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise LinalgError("entry (%d,%d) out of range %dx%d" % (i, j, self.rows, self.cols))
        if v:
            self.data[(i, j)] = v
        else:
            self.data.pop((i, j), None)

    @classmethod
    def from_triplets(cls, rows, cols, triplets):
        m = cls(rows, cols)
        for (i, j, v) in triplets:
            if (i, j) in m.data:
                raise LinalgError("duplicate entry (%d,%d)" % (i, j))
            m._set(i, j, Fraction(v))
        return m

    @classmethod
    def from_rows(cls, rows, cols, rowdicts):
        m = cls(rows, cols)
        for i, rd in enumerate(rowdicts) if isinstance(rowdicts, list) else rowdicts.items():
            for j, v in rd.items():
                m._set(i, j, Fraction(v))
        return m

    @classmethod
    def from_dense(cls, arr):
        rows = len(arr)
        cols = len(arr[0]) if rows else 0
        m = cls(rows, cols)
        for i, row in enumerate(arr):
            for j, v in enumerate(row):
                m._set(i, j, Fraction(v))
        return m

    def to_dense(self):
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.data.items():
            out[i][j] = v
        return out

    def nnz(self):
        return len(self.data)

    def transpose(self):
        t = SparseMatQ(self.cols, self.rows)
        for (i, j), v in self.data.items():
            t.data[(j, i)] = v
        return t

    def matmul(self, other):
        if self.cols != other.rows:
            raise LinalgError("shape mismatch %dx%d @ %dx%d" % (self.rows, self.cols, other.rows, other.cols))
        by_row = {}
        for (i, j), v in other.data.items():
            by_row.setdefault(i, []).append((j, v))
        acc = {}
        for (i, k), v in self.data.items():
            for (j, w) in by_row.get(k, ()):
                key = (i, j)
                acc[key] = acc.get(key, Fraction(0)) + v * w
        out = SparseMatQ(self.rows, other.cols)
        for key, v in acc.items():
            if v:
                out.data[key] = v
        return out

    def is_zero(self):
        return not self.data

    def permuted(self, row_perm=None, col_perm=None):
        out = SparseMatQ(self.rows, self.cols)
        for (i, j), v in self.data.items():
            out.data[(row_perm[i] if row_perm else i, col_perm[j] if col_perm else j)] = v
        return out

    def __eq__(self, other):
        return (
            isinstance(other, SparseMatQ)
            and (self.rows, self.cols) == (other.rows, other.cols)
            and self.data == other.data
        )

    def __repr__(self):
        return "SparseMatQ(%dx%d, nnz=%d)" % (self.rows, self.cols, self.nnz())

    # -- elimination ------------------------------------------------------

    def _integer_rows(self):
        """Denominator-cleared copy: list of {col: int}; row scaling keeps rank/kernel."""
        rows = [dict() for _ in range(self.rows)]
        for (i, j), v in self.data.items():
            rows[i][j] = v
        out = []
        for rd in rows:
            if not rd:
                out.append({})
                continue
            mult = 1
            for v in rd.values():
                mult = mult * (v.denominator // gcd(mult, v.denominator))
            row = {j: int(v * mult) for j, v in rd.items()}
            g = 0
            for x in row.values():
                g = gcd(g, abs(x))
            if g > 1:
                row = {j: x // g for j, x in row.items()}
            out.append(row)
        return out

    def _eliminate(self):
        """Fraction-free forward elimination.

        Returns (rank, pivots, echelon) where pivots is a list of (row, col)
        in elimination order and echelon the final integer row dicts.  Also
        logs the largest intermediate entry bit-size as a diagnostic.
        """
        rows = self._integer_rows()
        col_count = {}
        for rd in rows:
            for j in rd:
                col_count[j] = col_count.get(j, 0) + 1
        active = set(i for i, rd in enumerate(rows) if rd)
        pivots = []
        prev_pivot = 1
        max_bits = 0
        while active:
            best = None
            for i in active:
                rd = rows[i]
                rl = len(rd) - 1
                for j, v in rd.items():
                    score = rl * (col_count[j] - 1)
                    key = (score, i, j)
                    if best is None or key < best[0]:
                        best = (key, i, j)
            _, pi, pj = best
            piv = rows[pi][pj]
            pivots.append((pi, pj))
            active.discard(pi)
            prow = rows[pi]
            for i in list(active):
                rd = rows[i]
                a = rd.get(pj)
                new = {}
                if a is None:
                    # rows missing the pivot column still rescale by
                    # piv/prev_pivot, or the one-step minor structure (and
                    # with it exact division) is lost
                    for j, v in rd.items():
                        q, r = divmod(v * piv, prev_pivot)
                        assert r == 0, "Bareiss division not exact"
                        new[j] = q
                        b = q.bit_length()
                        if b > max_bits:
                            max_bits = b
                else:
                    for j, v in rd.items():
                        w = v * piv - a * prow.get(j, 0)
                        if w:
                            q, r = divmod(w, prev_pivot)
                            assert r == 0, "Bareiss division not exact"
                            new[j] = q
                            b = q.bit_length()
                            if b > max_bits:
                                max_bits = b
                    for j, v in prow.items():
                        if j not in rd:
                            w = -a * v
                            if w:
                                q, r = divmod(w, prev_pivot)
                                assert r == 0, "Bareiss division not exact"
                                new[j] = q
                                b = q.bit_length()
                                if b > max_bits:
                                    max_bits = b
                for j in rd:
                    if j not in new:
                        col_count[j] -= 1
                for j in new:
                    if j not in rd:
                        col_count[j] = col_count.get(j, 0) + 1
                rows[i] = new
                if not new:
                    active.discard(i)
            prev_pivot = piv
        if max_bits:
            log.debug("elimination max intermediate entry: %d bits", max_bits)
        return len(pivots), pivots, rows

    def rank(self):
        r, _, _ = self._eliminate()
        return r

    def kernel_basis(self):
        """Basis of the right kernel; returns a list of {col: Fraction}."""
        rank, pivots, rows = self._eliminate()
        pivot_cols = [pj for (_pi, pj) in pivots]
        pivot_set = set(pivot_cols)
        free = [j for j in range(self.cols) if j not in pivot_set]
        out = []
        # back-substitute along the elimination order (echelon rows from the
        # fraction-free sweep are triangular with respect to that order)
        for fc in free:
            vec = {fc: Fraction(1)}
            for (pi, pj) in reversed(pivots):
                rd = rows[pi]
                s = Fraction(0)
                for j, v in rd.items():
                    if j == pj:
                        continue
                    x = vec.get(j)
                    if x:
                        s += v * x
                if s:
                    vec[pj] = -s / rd[pj]
            out.append({j: v for j, v in vec.items() if v})
        return out

    def left_kernel_basis(self):
        return self.transpose().kernel_basis()

    def apply_row_vector(self, vec):
        """vec (dict over source index) -> image dict over target index."""
        out = {}
        for i, c in vec.items():
            if not c:
                continue
            for (ii, j), v in self.data.items():
                if ii == i:
                    out[j] = out.get(j, Fraction(0)) + c * v
        return {j: v for j, v in out.items() if v}


def cohomology_dim(d_in, d_out):
    """dim ker(d_out) - rank(d_in) for a two-step complex C(k-1) -> C(k) -> C(k+1).

    d_in has rows = dim C(k-1), cols = dim C(k); d_out rows = dim C(k).
    Aborts loudly if the composite is nonzero (upstream sign bug).
    """
    if d_in.cols != d_out.rows:
        raise LinalgError(
            "non-composable shapes: d_in is %dx%d, d_out is %dx%d"
            % (d_in.rows, d_in.cols, d_out.rows, d_out.cols)
        )
    comp = d_in.matmul(d_out)
    if not comp.is_zero():
        (i, j), v = next(iter(sorted(comp.data.items())))
        raise LinalgError(
            "d o d != 0: composite entry (%d, %d) = %s -- sign bug upstream"
            % (i, j, v)
        )
    dim_k = d_out.rows
    return dim_k - d_out.rank() - d_in.rank()


def solve_dense(a, b):
    """Solve a x = b exactly (a: list of rows, column vector b); None if inconsistent."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    aug = [[Fraction(x) for x in a[i]] + [Fraction(b[i])] for i in range(rows)]
    piv_cols = []
    r = 0
    for c in range(cols):
        piv = None
        for i in range(r, rows):
            if aug[i][c]:
                piv = i
                break
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        pv = aug[r][c]
        aug[r] = [x / pv for x in aug[r]]
        for i in range(rows):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        piv_cols.append(c)
        r += 1
    for i in range(r, rows):
        if aug[i][cols]:
            return None
    sol = [Fraction(0)] * cols
    for i, c in enumerate(piv_cols):
        sol[c] = aug[i][cols]
    return sol


# -- SMS-style triplet text format ---------------------------------------


def write_sms(mat, fh):
    """Write in SMS-style sparse triplet text (1-based, 'p/q' entries)."""
    fh.write("%d %d M\n" % (mat.rows, mat.cols))
    for (i, j) in sorted(mat.data):
        v = mat.data[(i, j)]
        if v.denominator == 1:
            fh.write("%d %d %d\n" % (i + 1, j + 1, v.numerator))
        else:
            fh.write("%d %d %d/%d\n" % (i + 1, j + 1, v.numerator, v.denominator))
    fh.write("0 0 0\n")


def read_sms(fh):
    header = fh.readline().split()
    if len(header) != 3 or header[2] != "M":
        raise LinalgError("bad SMS header %r" % (header,))
    rows, cols = int(header[0]), int(header[1])
    mat = SparseMatQ(rows, cols)
    for line in fh:
        parts = line.split()
        if not parts:
            continue
        if parts[:3] == ["0", "0", "0"]:
            break
        i, j, v = int(parts[0]), int(parts[1]), Fraction(parts[2])
        mat._set(i - 1, j - 1, v)
    return mat
