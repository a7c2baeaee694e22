"""Exact sparse linear algebra over the rationals.

Everything downstream (tensor harmonics, Lie tree spaces, graph quotients,
coinvariants) reduces to ranks, kernels and membership solves of sparse
matrices with rational entries.  The elimination core is fraction-free
(Bareiss-style cross-multiplication on gcd-reduced integer rows), so no
rational arithmetic happens in inner loops; results are normalized back to
`Fraction` at the output boundary.

Pivot selection: within the current column, the candidate entry of smallest
bit size wins, ties broken by lowest row index.  This is deterministic and
keeps coefficient growth down on the near-unimodular matrices produced by
graph relations.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

Vec = dict  # sparse vector: column index -> Fraction (or int internally)


def _to_int_row(row) -> dict:
    """Clear denominators and divide by content; returns a primitive int row."""
    if not row:
        return {}
    denom = 1
    for v in row.values():
        f = Fraction(v)
        denom = denom * f.denominator // gcd(denom, f.denominator)
    ints = {c: int(Fraction(v) * denom) for c, v in row.items() if v}
    if not ints:
        return {}
    g = 0
    for v in ints.values():
        g = gcd(g, v)
    if g > 1:
        ints = {c: v // g for c, v in ints.items()}
    return ints


def _combine(row_a: dict, row_b: dict, col: int) -> dict:
    """a*row_a - b*row_b with a = row_b[col], b = row_a[col]; kills `col`.

    Result is gcd-reduced.  Both rows are integer dicts.
    """
    a = row_b[col]
    b = row_a[col]
    out = {}
    for c, v in row_a.items():
        out[c] = a * v
    for c, v in row_b.items():
        w = out.get(c, 0) - b * v
        if w:
            out[c] = w
        elif c in out:
            del out[c]
    g = 0
    for v in out.values():
        g = gcd(g, v)
    if g > 1:
        out = {c: v // g for c, v in out.items()}
    return out


class RowBasis:
    """Incremental row-space builder over Q with integer fraction-free rows.

    Each stored row is reduced so that its leading (minimal) column is not a
    pivot column of any other stored row.  `add` returns True iff the row
    enlarged the span.  Deterministic for a fixed insertion order.
    """

    def __init__(self):
        self.pivots: dict = {}  # pivot col -> int row

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row) -> dict:
        """Fully reduce an (int or Fraction) row against the stored pivots."""
        row = _to_int_row(row)
        while row:
            lead = min(row)
            piv = self.pivots.get(lead)
            if piv is None:
                return row
            row = _combine(row, piv, lead)
        return row

    def add(self, row) -> bool:
        red = self.reduce(row)
        if not red:
            return False
        lead = min(red)
        # keep stored rows mutually reduced on pivot columns
        for c, prow in list(self.pivots.items()):
            if lead in prow:
                self.pivots[c] = _combine(prow, red, lead)
        self.pivots[lead] = red
        return True

    def contains(self, row) -> bool:
        return not self.reduce(row)

    def rows(self):
        return [dict(r) for _, r in sorted(self.pivots.items())]


class SparseMatrix:
    """Immutable sparse rational matrix; no zero entries stored."""

    def __init__(self, rows: int, cols: int, entries=None):
        self.rows = rows
        self.cols = cols
        ent = {}
        for (r, c), v in (entries or {}).items():
            if not (0 <= r < rows and 0 <= c < cols):
                raise IndexError(f"entry ({r},{c}) outside {rows}x{cols}")
            f = Fraction(v)
            if f:
                ent[(r, c)] = f
        self.entries = ent

    @classmethod
    def from_rows(cls, cols: int, rows: list) -> "SparseMatrix":
        entries = {}
        for r, row in enumerate(rows):
            for c, v in row.items():
                if v:
                    entries[(r, c)] = Fraction(v)
        return cls(len(rows), cols, entries)

    def row_list(self) -> list:
        out = [dict() for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(
            self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()}
        )

    def __repr__(self):
        return f"SparseMatrix({self.rows}x{self.cols}, nnz={len(self.entries)})"


def _eliminate(int_rows: list) -> tuple:
    """Fraction-free forward elimination, column-major.

    Returns (pivot list [(col, row_dict)], ordered as eliminated).  Pivot rule:
    smallest bit size of the candidate entry, then lowest row index.
    """
    work = [r for r in (dict(r) for r in int_rows) if r]
    pivots = []
    while work:
        col = min(min(r) for r in work)
        best = None
        for idx, r in enumerate(work):
            v = r.get(col)
            if v is None:
                continue
            key = (abs(v).bit_length(), idx)
            if best is None or key < best[0]:
                best = (key, idx)
        pidx = best[1]
        prow = work.pop(pidx)
        nxt = []
        for r in work:
            if col in r:
                r = _combine(r, prow, col)
            if r:
                nxt.append(r)
        work = nxt
        pivots.append((col, prow))
    return pivots


def rank(m: SparseMatrix) -> int:
    """Exact rank over Q."""
    return len(_eliminate([_to_int_row(r) for r in m.row_list()]))


class Subspace:
    """A subspace of Q^ambient_dim given by a list of sparse basis vectors."""

    def __init__(self, ambient_dim: int, basis: list, _trusted=False):
        self.ambient_dim = ambient_dim
        self.basis = [
            {c: Fraction(v) for c, v in vec.items() if v} for vec in basis
        ]
        for vec in self.basis:
            for c in vec:
                if not 0 <= c < ambient_dim:
                    raise IndexError(f"coordinate {c} outside ambient {ambient_dim}")
        if not _trusted:
            got = rank(SparseMatrix.from_rows(ambient_dim, self.basis))
            if got != len(self.basis):
                raise ValueError(
                    f"basis not independent: rank {got} < {len(self.basis)}"
                )

    @property
    def dim(self) -> int:
        return len(self.basis)

    def matrix(self) -> SparseMatrix:
        return SparseMatrix.from_rows(self.ambient_dim, self.basis)

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def kernel_basis(m: SparseMatrix) -> Subspace:
    """Exact basis of ker(m) acting on column vectors; dim = cols - rank."""
    pivots = _eliminate([_to_int_row(r) for r in m.row_list()])
    pivot_cols = [c for c, _ in pivots]
    pivot_set = set(pivot_cols)
    free_cols = [c for c in range(m.cols) if c not in pivot_set]
    basis = []
    # Back-substitute one kernel vector per free column.
    for fc in free_cols:
        vec = {fc: Fraction(1)}
        for col, row in reversed(pivots):
            s = Fraction(0)
            for c, v in row.items():
                if c != col and c in vec:
                    s += v * vec[c]
            if s:
                vec[col] = -s / row[col]
        basis.append(vec)
    ker = Subspace(m.cols, basis, _trusted=True)
    # rank-nullity, asserted on every call
    assert len(pivots) + ker.dim == m.cols
    return ker


def solve_membership(s: Subspace, v):
    """Exact coordinates of v in span(s), or None if v is not a member.

    The basis rows are eliminated to a staircase over the ambient columns
    while unit tags at columns >= ambient_dim record the combination; v is
    then reduced rationally against the staircase and the tags are read off.
    """
    v = {c: Fraction(x) for c, x in v.items() if x}
    for c in v:
        if not 0 <= c < s.ambient_dim:
            raise ValueError(f"coordinate {c} outside ambient {s.ambient_dim}")
    if not v:
        return [Fraction(0)] * s.dim
    n = s.ambient_dim
    pivots = {}
    for i, b in enumerate(s.basis):
        row = _to_int_row({**b, n + i: Fraction(1)})
        while True:
            ambient = [c for c in row if c < n]
            if not ambient:
                break  # dependent basis rows cannot occur (invariant)
            lead = min(ambient)
            if lead not in pivots:
                pivots[lead] = row
                break
            row = _combine(row, pivots[lead], lead)
    work = dict(v)
    tags = {}
    while True:
        ambient = [c for c in work if c < n]
        if not ambient:
            break
        lead = min(ambient)
        piv = pivots.get(lead)
        if piv is None:
            return None
        factor = work[lead] / piv[lead]
        for c, val in piv.items():
            w = work.get(c, Fraction(0)) - factor * val
            if w:
                work[c] = w
            elif c in work:
                del work[c]
    for c, val in work.items():
        tags[c - n] = -val
    return [tags.get(i, Fraction(0)) for i in range(s.dim)]


def quotient_dim(ambient: Subspace, sub: Subspace) -> int:
    """dim(ambient) - dim(sub) for sub contained in ambient (checked)."""
    if sub.ambient_dim != ambient.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    rb = RowBasis()
    for b in ambient.basis:
        rb.add(b)
    for i, v in enumerate(sub.basis):
        if not rb.contains(v):
            raise ValueError(f"containment violation: sub basis vector {i} "
                             f"is not in the ambient span")
    return ambient.dim - sub.dim


def intersect(a: Subspace, b: Subspace) -> Subspace:
    """Exact basis of a âˆ© b."""
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    # x in both spans: solve A^T alpha = B^T beta; kernel of [A ; -B] stacked
    # as columns.  Columns 0..dim(a)-1 are alpha, the rest beta.
    n = a.ambient_dim
    rows = []
    cols = a.dim + b.dim
    # build matrix with rows indexed by ambient coordinate
    by_coord = {}
    for j, vec in enumerate(a.basis):
        for c, v in vec.items():
            by_coord.setdefault(c, {})[j] = v
    for j, vec in enumerate(b.basis):
        for c, v in vec.items():
            d = by_coord.setdefault(c, {})
            d[a.dim + j] = d.get(a.dim + j, Fraction(0)) - v
    mat = SparseMatrix.from_rows(cols, [by_coord.get(c, {}) for c in sorted(by_coord)])
    ker = kernel_basis(mat)
    out = []
    rb = RowBasis()
    for kv in ker.basis:
        vec = {}
        for j in range(a.dim):
            coef = kv.get(j)
            if coef:
                for c, v in a.basis[j].items():
                    vec[c] = vec.get(c, Fraction(0)) + coef * v
        vec = {c: v for c, v in vec.items() if v}
        if vec and rb.add(vec):
            out.append(vec)
    return Subspace(n, out, _trusted=True)
