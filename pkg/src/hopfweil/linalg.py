"""
Exact sparse linear algebra over the rationals.

Scalars are ``fractions.Fraction``.  Matrices are stored as dicts keyed by
``(row, col)`` with no zero entries.  Elimination pivots on the entry of
smallest bit-size, ties broken by (row, col), so bases are reproducible.
"""

from __future__ import annotations

from fractions import Fraction


class InconsistentComplex(ValueError):
    pass


def to_scalar(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x)


def fstr(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return "%s/%s" % (x.numerator, x.denominator)


def _bits(x: Fraction) -> int:
    return abs(x.numerator).bit_length() + x.denominator.bit_length()


class SparseMatrix:
    """rows x cols matrix over Q with a dict of nonzero entries."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries=None):
        self.rows = rows
        self.cols = cols
        self.entries: dict[tuple[int, int], Fraction] = {}
        if entries:
            for (r, c), v in entries.items():
                if not (0 <= r < rows and 0 <= c < cols):
                    raise IndexError("entry (%d, %d) outside %dx%d" % (r, c, rows, cols))
                v = to_scalar(v)
                if v:
                    self.entries[r, c] = v

    @classmethod
    def from_dense(cls, rows):
        rows = [list(r) for r in rows]
        nr = len(rows)
        nc = len(rows[0]) if rows else 0
        ent = {}
        for i, row in enumerate(rows):
            for j, v in enumerate(row):
                if v:
                    ent[i, j] = v
        return cls(nr, nc, ent)

    @classmethod
    def from_columns(cls, nrows: int, columns: list[dict[int, Fraction]]):
        ent = {}
        for j, col in enumerate(columns):
            for i, v in col.items():
                if v:
                    ent[i, j] = v
        return cls(nrows, len(columns), ent)

    def to_dense(self):
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def row_dicts(self) -> list[dict[int, Fraction]]:
        rows: list[dict[int, Fraction]] = [dict() for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            rows[r][c] = v
        return rows

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()})

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch %dx%d @ %dx%d" % (self.rows, self.cols, other.rows, other.cols))
        other_rows = other.row_dicts()
        out: dict[tuple[int, int], Fraction] = {}
        for (r, k), v in self.entries.items():
            for c, w in other_rows[k].items():
                key = (r, c)
                s = out.get(key, 0) + v * w
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return SparseMatrix(self.rows, other.cols, out)

    def apply(self, vec) -> list[Fraction]:
        out = [Fraction(0)] * self.rows
        for (r, c), v in self.entries.items():
            if vec[c]:
                out[r] += v * vec[c]
        return out

    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (self.rows, self.cols, self.entries) == (other.rows, other.cols, other.entries)

    def __repr__(self):
        return "SparseMatrix(%d, %d, nnz=%d)" % (self.rows, self.cols, len(self.entries))

    def to_json(self) -> dict:
        ent = sorted(self.entries.items())
        return {"rows": self.rows, "cols": self.cols,
                "entries": [[r, c, fstr(v)] for (r, c), v in ent]}

    @classmethod
    def from_json(cls, data: dict) -> "SparseMatrix":
        return cls(data["rows"], data["cols"],
                   {(r, c): Fraction(v) for r, c, v in data["entries"]})


def rref(M: SparseMatrix):
    """Reduced row echelon form.

    Returns ``(rows, pivots)`` where ``rows[k]`` is a dict with pivot column
    ``pivots[k]`` normalised to 1.  Pivot choice: among remaining rows, the
    smallest-bit-size nonzero entry in the leftmost column still available;
    ties by (row, col).
    """
    pending = [r for r in M.row_dicts() if r]
    done: list[dict[int, Fraction]] = []
    pivots: list[int] = []
    # column-major sweep keeps the echelon shape canonical
    while pending:
        col = min(min(r) for r in pending)
        best = None
        for idx, r in enumerate(pending):
            v = r.get(col)
            if v is None:
                continue
            key = (_bits(v), idx)
            if best is None or key < best[0]:
                best = (key, idx)
        pidx = best[1]
        prow = pending.pop(pidx)
        inv = 1 / prow[col]
        prow = {c: v * inv for c, v in prow.items()}
        new_pending = []
        for r in pending:
            f = r.get(col)
            if f is None:
                new_pending.append(r)
                continue
            r = dict(r)
            for c, v in prow.items():
                s = r.get(c, 0) - f * v
                if s:
                    r[c] = s
                else:
                    r.pop(c, None)
            if r:
                new_pending.append(r)
        pending = new_pending
        for r in done:
            f = r.get(col)
            if f is None:
                continue
            for c, v in prow.items():
                s = r.get(c, 0) - f * v
                if s:
                    r[c] = s
                else:
                    r.pop(c, None)
        done.append(prow)
        pivots.append(col)
    return done, pivots


def rank(M: SparseMatrix) -> int:
    return len(rref(M)[1])


def kernel_basis(M: SparseMatrix) -> list[list[Fraction]]:
    """Exact basis of the right kernel {v : M v = 0}, one vector per free column."""
    rows, pivots = rref(M)
    pivset = set(pivots)
    basis = []
    for free in range(M.cols):
        if free in pivset:
            continue
        v = [Fraction(0)] * M.cols
        v[free] = Fraction(1)
        for r, p in zip(rows, pivots):
            c = r.get(free)
            if c:
                v[p] = -c
        basis.append(v)
    return basis


def solve(M: SparseMatrix, rhs) -> list[Fraction] | None:
    """One solution of M x = rhs (free variables set to 0), or None."""
    aug = SparseMatrix(M.rows, M.cols + 1, dict(M.entries))
    for i, v in enumerate(rhs):
        v = to_scalar(v)
        if v:
            aug.entries[i, M.cols] = v
    rows, pivots = rref(aug)
    if pivots and pivots[-1] == M.cols:
        return None
    x = [Fraction(0)] * M.cols
    for r, p in zip(rows, pivots):
        x[p] = r.get(M.cols, Fraction(0))
    return x


def image_basis(M: SparseMatrix) -> list[list[Fraction]]:
    """Basis of the column space, in echelon form (rows of rref of M^T)."""
    rows, _ = rref(M.transpose())
    out = []
    for r in rows:
        v = [Fraction(0)] * M.rows
        for c, x in r.items():
            v[c] = x
        out.append(v)
    return out


def cohomology_at_degree(d_in: SparseMatrix, d_out: SparseMatrix):
    """Cohomology of  A --d_in--> V --d_out--> B  at V.

    Returns ``(dimension, representatives)``; representatives are kernel
    vectors of ``d_out`` chosen greedily in kernel-basis order so that they
    are independent modulo the image of ``d_in``.
    """
    if d_in.rows != d_out.cols:
        raise ValueError("d_in lands in dimension %d but d_out starts from %d" % (d_in.rows, d_out.cols))
    if not (d_out @ d_in).is_zero():
        raise InconsistentComplex("d_out o d_in != 0")
    dim_v = d_out.cols
    ker = kernel_basis(d_out)
    img = image_basis(d_in)
    # greedy extension of the image span by kernel vectors
    span_rows = [dict((i, x) for i, x in enumerate(v) if x) for v in img]
    base_rank = len(span_rows)
    reps = []
    for v in ker:
        trial = span_rows + [dict((i, x) for i, x in enumerate(v) if x)]
        T = SparseMatrix(len(trial), dim_v, {(r, c): x for r, row in enumerate(trial) for c, x in row.items()})
        if rank(T) > base_rank:
            span_rows = trial
            base_rank += 1
            reps.append(v)
    dim = len(ker) - len(img)
    assert dim == len(reps)
    return dim, reps


class LinearSolver:
    """Repeated solves of M x = rhs against one matrix with independent columns.

    A square invertible block M[S, :] is found once; each solve multiplies by
    its inverse and then checks every row exactly, returning None when the
    right-hand side is outside the column span.
    """

    def __init__(self, M: SparseMatrix):
        self.M = M
        _, rows_sel = rref(M.transpose())
        if len(rows_sel) != M.cols:
            raise ValueError("columns are dependent (rank %d < %d)" % (len(rows_sel), M.cols))
        self.rows_sel = rows_sel
        k = M.cols
        sub = {}
        pos = {r: i for i, r in enumerate(rows_sel)}
        for (r, c), v in M.entries.items():
            if r in pos:
                sub[pos[r], c] = v
        aug = dict(sub)
        for i in range(k):
            aug[i, k + i] = Fraction(1)
        red, piv = rref(SparseMatrix(k, 2 * k, aug))
        self.inv = [{c - k: v for c, v in r.items() if c >= k} for r in red]
        self._row_dicts = M.row_dicts()

    def solve(self, rhs) -> list[Fraction] | None:
        b = [to_scalar(rhs[r]) for r in self.rows_sel]
        x = [sum((v * b[c] for c, v in row.items() if b[c]), Fraction(0)) for row in self.inv]
        for r, row in enumerate(self._row_dicts):
            s = sum((v * x[c] for c, v in row.items() if x[c]), Fraction(0))
            if s != to_scalar(rhs[r]):
                return None
        return x
