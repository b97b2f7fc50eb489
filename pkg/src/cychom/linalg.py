"""Exact sparse linear algebra over Q and Q(zeta_m).

Vectors are dicts {index: raw scalar} that never store zeros; matrices hold
sparse rows plus an explicit shape and field.  Raw scalars are whatever the
field objects in scalars.py operate on (Fraction or int over Q, coefficient
tuples over a cyclotomic field).

Elimination is fraction-free: rows are rescaled to integer content 1 and
combined by cross-multiplication, which keeps entry growth polynomial without
the bookkeeping an exact-division scheme needs once rows skip steps.  Pivots
follow a cheapest-column-first order through a lazy heap, and the matrix is
first split into connected components of its row/column incidence graph, which
on boundary matrices of bar-type complexes cuts the work by orders of
magnitude.  None of this affects results: the reduced echelon form computed at
the end is canonical (monic pivots, zeros above and below, pivot columns
increasing), so every public answer is independent of elimination order.

The reduced echelon form of B's columns also powers a quotient-coordinate
construction of homology that never materializes a full kernel basis of a
large boundary map; see ``homology``.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from math import gcd

from .errors import AmbientMismatch, FieldMismatch, NotContained, ValidationError
from .scalars import _FieldBase, field_of_order

_ZERO = Fraction(0)


# -- sparse vector helpers ----------------------------------------------------

def vec_add(u: dict, v: dict, field: _FieldBase) -> dict:
    out = dict(u)
    for j, val in v.items():
        s = field.add(out[j], val) if j in out else val
        if field.is_zero(s):
            out.pop(j, None)
        else:
            out[j] = s
    return out


def vec_sub(u: dict, v: dict, field: _FieldBase) -> dict:
    return vec_add(u, {j: field.neg(x) for j, x in v.items()}, field)


def vec_scale(v: dict, c, field: _FieldBase) -> dict:
    if field.is_zero(c):
        return {}
    return {j: field.mul(c, x) for j, x in v.items()}


def vec_axpy(out: dict, c, v: dict, field: _FieldBase) -> None:
    """In place out += c*v."""
    if field.is_zero(c):
        return
    for j, x in v.items():
        term = field.mul(c, x)
        s = field.add(out[j], term) if j in out else term
        if field.is_zero(s):
            out.pop(j, None)
        else:
            out[j] = s


def vec_is_zero(v: dict) -> bool:
    return not v


def vec_equal(u: dict, v: dict, field: _FieldBase) -> bool:
    return vec_is_zero(vec_sub(u, v, field))

def vec_dot(u: dict, v: dict, field: _FieldBase):
    """Plain bilinear sum, no conjugation."""
    small, big = (u, v) if len(u) <= len(v) else (v, u)
    total = field.zero
    for j, x in small.items():
        if j in big:
            total = field.add(total, field.mul(x, big[j]))
    return total


def dense_to_sparse(values, field: _FieldBase) -> dict:
    out = {}
    for j, v in enumerate(values):
        raw = to_raw(v, field)
        if not field.is_zero(raw):
            out[j] = raw
    return out


def sparse_to_dense(v: dict, n: int, field: _FieldBase) -> list:
    out = [field.zero] * n
    for j, val in v.items():
        out[j] = val
    return out


def to_raw(value, field: _FieldBase):
    """Accept Cyclotomic, Fraction, int, or an already-raw value."""
    order = getattr(value, "order", None)
    if order is not None and hasattr(value, "coeffs"):
        if order != field.order:
            if field.order % order:
                raise FieldMismatch(
                    f"scalar of order {order} in a field of order {field.order}")
            from .scalars import lift_raw
            return lift_raw(value.raw, field_of_order(order), field)
        return value.raw
    if isinstance(value, (int, Fraction)):
        if field.order == 1:
            return value
        return field.from_rational(value)
    if field.order > 1 and isinstance(value, tuple):
        return value
    raise TypeError(f"cannot use {type(value).__name__} as a scalar")


# -- row normalization adapters ------------------------------------------------

class _IntRows:
    """Order-1 rows: entries kept as primitive integer vectors."""

    @staticmethod
    def prim(row: dict) -> dict:
        if not row:
            return row
        den = 1
        for v in row.values():
            if isinstance(v, Fraction) and v.denominator != 1:
                den = den * v.denominator // gcd(den, v.denominator)
        g = 0
        ints = {}
        for j, v in row.items():
            n = int(v * den) if den != 1 or isinstance(v, Fraction) else v
            if n:
                ints[j] = n
                g = gcd(g, n)
        if not ints:
            return {}
        if ints[min(ints)] < 0:
            g = -g
        if g != 1:
            ints = {j: n // g for j, n in ints.items()}
        return ints

    @staticmethod
    def combine(r: dict, p: dict, c) -> dict:
        """b*r - a*p with a = r[c], b = p[c]; result primitive and zero at c."""
        a, b = r[c], p[c]
        out = {}
        for j, v in r.items():
            out[j] = b * v
        for j, v in p.items():
            w = out.get(j, 0) - a * v
            if w:
                out[j] = w
            else:
                out.pop(j, None)
        out.pop(c, None)
        return _IntRows.prim(out)

    @staticmethod
    def monic(row: dict, c) -> dict:
        piv = Fraction(row[c])
        return {j: Fraction(v) / piv for j, v in row.items()}


class _CycRows:
    """Order-m rows: entries are Fraction tuples, normalized by rational content."""

    def __init__(self, field: _FieldBase):
        self.field = field

    def prim(self, row: dict) -> dict:
        if not row:
            return row
        den = 1
        num = 0
        for entry in row.values():
            for fr in entry:
                if fr:
                    den = den * fr.denominator // gcd(den, fr.denominator)
                    num = gcd(num, fr.numerator)
        if not num:
            return {}
        first = row[min(row)]
        lead = next(fr for fr in first if fr)
        scale = Fraction(den, num if lead > 0 else -num)
        if scale == 1:
            return dict(row)
        return {j: tuple(fr * scale for fr in entry) for j, entry in row.items()}

    def combine(self, r: dict, p: dict, c) -> dict:
        f = self.field
        a, b = r[c], p[c]
        out = {}
        for j, v in r.items():
            out[j] = f.mul(b, v)
        for j, v in p.items():
            w = f.sub(out.get(j, f.zero), f.mul(a, v))
            if f.is_zero(w):
                out.pop(j, None)
            else:
                out[j] = w
        out.pop(c, None)
        return self.prim(out)

    def monic(self, row: dict, c) -> dict:
        inv = self.field.inv(row[c])
        return {j: self.field.mul(inv, v) for j, v in row.items()}


def _adapter(field: _FieldBase):
    return _IntRows() if field.order == 1 else _CycRows(field)


# -- elimination ---------------------------------------------------------------

class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        parent = self.parent
        root = parent.setdefault(x, x)
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[ry] = rx


def _eliminate_component(rows: list[dict], adapter) -> list[tuple[int, dict]]:
    """Echelonize one component; returns (pivot col, primitive row) pairs in
    the order the pivots were created.  A pivot row can still hold entries at
    columns pivoted LATER (it is out of play by then), never earlier, so the
    creation order is what back-substitution must walk backwards."""
    col_rows: dict[int, set[int]] = {}
    live: dict[int, dict] = {}
    for rid, row in enumerate(rows):
        if row:
            live[rid] = row
            for c in row:
                col_rows.setdefault(c, set()).add(rid)
    heap = [(len(rids), c) for c, rids in col_rows.items()]
    heapq.heapify(heap)
    pivots: list[tuple[int, dict]] = []
    pivoted: set[int] = set()

    def touch(cols):
        for c in cols:
            rids = col_rows.get(c)
            if rids:
                heapq.heappush(heap, (len(rids), c))

    while heap:
        cnt, c = heapq.heappop(heap)
        rids = col_rows.get(c)
        if not rids or c in pivoted or cnt != len(rids):
            continue
        prid = min(rids, key=lambda rid: (len(live[rid]), rid))
        prow = live[prid]
        changed = set()
        for rid in list(rids):
            if rid == prid:
                continue
            old = live[rid]
            new = adapter.combine(old, prow, c)
            before, after = set(old), set(new)
            for j in before - after:
                s = col_rows.get(j)
                if s:
                    s.discard(rid)
                    if not s:
                        del col_rows[j]
            for j in after - before:
                col_rows.setdefault(j, set()).add(rid)
            changed |= before ^ after
            if new:
                live[rid] = new
            else:
                del live[rid]
        # retire the pivot row from the active index
        for j in prow:
            s = col_rows.get(j)
            if s:
                s.discard(prid)
                if not s:
                    del col_rows[j]
        changed |= set(prow)
        del live[prid]
        pivots.append((c, prow))
        pivoted.add(c)
        changed.discard(c)
        touch(changed)
    return pivots


def _split_components(input_rows, adapter) -> list[list[dict]]:
    uf = _UnionFind()
    prepared: list[dict] = []
    for row in input_rows:
        row = adapter.prim(row)
        if not row:
            continue
        prepared.append(row)
        it = iter(row)
        first = next(it)
        for c in it:
            uf.union(first, c)
    groups: dict[int, list[dict]] = {}
    for row in prepared:
        groups.setdefault(uf.find(next(iter(row))), []).append(row)
    return list(groups.values())


def reduced_rows(input_rows, ncols: int, field: _FieldBase):
    """A deterministic reduced basis of the row span: monic rows with distinct
    pivot columns, each pivot column absent from every other row.

    Unlike ``rref_rows`` the pivot of a row need not be its leftmost entry,
    so the output is not the canonical echelon form; it is the cheap variant
    for very large spans, where the strict leftmost rule causes fill.  All
    coset reduction and coordinate extraction work the same on it.
    """
    adapter = _adapter(field)
    ordered: list[tuple[int, dict]] = []
    for rows in _split_components(input_rows, adapter):
        ordered.extend(_eliminate_component(rows, adapter))
    # a pivot row may hold columns pivoted later, never earlier, so cleaning
    # in reverse creation order meets only already-clean rows
    clean: dict[int, dict] = {}
    for c, row in reversed(ordered):
        for c2 in sorted(k for k in row if k != c and k in clean):
            if c2 in row:
                row = adapter.combine(row, clean[c2], c2)
        clean[c] = row
    pivot_cols = sorted(clean)
    out = [adapter.monic(clean[c], c) for c in pivot_cols]
    return out, pivot_cols


def rref_rows(input_rows, ncols: int, field: _FieldBase):
    """Canonical reduced echelon form of the span of the given sparse rows.

    Returns (rows, pivot_cols): monic rows sorted by strictly increasing pivot
    column, zero everywhere above and below each pivot.
    """
    adapter = _adapter(field)
    basis: list[dict] = []
    for rows in _split_components(input_rows, adapter):
        basis.extend(row for _, row in _eliminate_component(rows, adapter))

    # The cheap-column pass above gives some basis of the row space; the
    # canonical form needs leftmost pivots, so eliminate again with the
    # strict column order.  A row combined on its leading column only ever
    # moves right, so buckets keyed by current leading column suffice.
    buckets: dict[int, list[dict]] = {}
    for row in basis:
        buckets.setdefault(min(row), []).append(row)
    keyheap = list(buckets)
    heapq.heapify(keyheap)
    pivots: dict[int, dict] = {}
    while keyheap:
        c = heapq.heappop(keyheap)
        here = buckets.pop(c, None)
        if not here:
            continue
        here.sort(key=len)
        pivot = here[0]
        pivots[c] = pivot
        for row in here[1:]:
            new = adapter.combine(row, pivot, c)
            if new:
                lead = min(new)
                if lead in buckets:
                    buckets[lead].append(new)
                else:
                    buckets[lead] = [new]
                    heapq.heappush(keyheap, lead)

    # zeros above pivots: in echelon order a row only holds later pivots'
    # columns, and cleaning against already-clean rows adds no new ones
    for c in sorted(pivots, reverse=True):
        row = pivots[c]
        for c2 in sorted(k for k in row if k != c and k in pivots):
            row = adapter.combine(row, pivots[c2], c2)
        pivots[c] = row

    pivot_cols = sorted(pivots)
    out = [adapter.monic(pivots[c], c) for c in pivot_cols]
    return out, pivot_cols


def kernel_from_rref(rref, pivot_cols, ncols: int, field: _FieldBase) -> list[dict]:
    """Canonical right-kernel basis, one vector per free column, ascending."""
    pivset = set(pivot_cols)
    per_free: dict[int, dict] = {}
    for row, p in zip(rref, pivot_cols):
        for j, val in row.items():
            if j == p:
                continue
            per_free.setdefault(j, {})[p] = field.neg(val)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        vec = per_free.get(f, {})
        vec[f] = field.one
        basis.append(vec)
    return basis


# -- matrices -------------------------------------------------------------------

class SparseMatrix:
    """Sparse exact matrix.  Build, then query; do not mutate after querying."""

    def __init__(self, nrows: int, ncols: int, field: _FieldBase, rows=None):
        self.nrows = nrows
        self.ncols = ncols
        self.field = field
        self.rows: list[dict] = rows if rows is not None else [{} for _ in range(nrows)]
        if rows is not None and len(rows) != nrows:
            raise ValidationError(f"expected {nrows} rows, got {len(rows)}")
        self._rref = None
        self._cols = None
        self._rank = None

    # construction ---------------------------------------------------------

    @staticmethod
    def from_dense(entries, field: _FieldBase) -> "SparseMatrix":
        nrows = len(entries)
        ncols = len(entries[0]) if nrows else 0
        m = SparseMatrix(nrows, ncols, field)
        for i, row in enumerate(entries):
            m.rows[i] = dense_to_sparse(row, field)
        return m

    @staticmethod
    def from_columns(cols: list[dict], nrows: int, field: _FieldBase) -> "SparseMatrix":
        m = SparseMatrix(nrows, len(cols), field)
        for j, col in enumerate(cols):
            for i, val in col.items():
                if not field.is_zero(val):
                    m.rows[i][j] = val
        return m

    @staticmethod
    def identity(n: int, field: _FieldBase) -> "SparseMatrix":
        m = SparseMatrix(n, n, field)
        for i in range(n):
            m.rows[i][i] = field.one
        return m

    @staticmethod
    def zero(nrows: int, ncols: int, field: _FieldBase) -> "SparseMatrix":
        return SparseMatrix(nrows, ncols, field)

    def set(self, i: int, j: int, value) -> None:
        raw = to_raw(value, self.field)
        if self.field.is_zero(raw):
            self.rows[i].pop(j, None)
        else:
            self.rows[i][j] = raw

    def add_to(self, i: int, j: int, value) -> None:
        raw = to_raw(value, self.field)
        cur = self.rows[i].get(j)
        s = raw if cur is None else self.field.add(cur, raw)
        if self.field.is_zero(s):
            self.rows[i].pop(j, None)
        else:
            self.rows[i][j] = s

    # views ------------------------------------------------------------------

    def entry(self, i: int, j: int):
        return self.rows[i].get(j, self.field.zero)

    def columns(self) -> list[dict]:
        if self._cols is None:
            cols = [{} for _ in range(self.ncols)]
            for i, row in enumerate(self.rows):
                for j, val in row.items():
                    cols[j][i] = val
            self._cols = cols
        return self._cols

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.ncols, self.nrows, self.field,
                            rows=[dict(c) for c in self.columns()])

    def is_zero_matrix(self) -> bool:
        return all(not row for row in self.rows)

    def nnz(self) -> int:
        return sum(len(row) for row in self.rows)

    def equals(self, other: "SparseMatrix") -> bool:
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            return False
        if self.field.order != other.field.order:
            return False
        return all(vec_equal(a, b, self.field) for a, b in zip(self.rows, other.rows))

    def scaled(self, c) -> "SparseMatrix":
        raw = to_raw(c, self.field)
        return SparseMatrix(self.nrows, self.ncols, self.field,
                            rows=[vec_scale(r, raw, self.field) for r in self.rows])

    # algebra -----------------------------------------------------------------

    def mat_vec(self, v: dict) -> dict:
        cols = self.columns()
        out: dict = {}
        for j, x in v.items():
            if j >= self.ncols:
                raise AmbientMismatch(f"index {j} outside {self.ncols} columns")
            vec_axpy(out, x, cols[j], self.field)
        return out

    def matmul(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.ncols != other.nrows:
            raise AmbientMismatch(
                f"cannot compose {self.nrows}x{self.ncols} with {other.nrows}x{other.ncols}")
        cols = [self.mat_vec(c) for c in other.columns()]
        return SparseMatrix.from_columns(cols, self.nrows, self.field)

    def add(self, other: "SparseMatrix") -> "SparseMatrix":
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise AmbientMismatch("shape mismatch in matrix sum")
        rows = [vec_add(a, b, self.field) for a, b in zip(self.rows, other.rows)]
        return SparseMatrix(self.nrows, self.ncols, self.field, rows=rows)

    def sub(self, other: "SparseMatrix") -> "SparseMatrix":
        return self.add(other.scaled(self.field.neg(self.field.one)))

    # elimination-backed queries ----------------------------------------------

    def rref(self):
        if self._rref is None:
            self._rref = rref_rows(self.rows, self.ncols, self.field)
        return self._rref

    def rank(self) -> int:
        if self._rank is None:
            if self._rref is not None or self.nrows <= self.ncols:
                self._rank = len(self.rref()[1])
            else:
                # fewer rows after transposing; rank is the same either way
                _, pivots = rref_rows([dict(c) for c in self.columns()],
                                      self.nrows, self.field)
                self._rank = len(pivots)
        return self._rank

    def kernel_basis(self) -> list[dict]:
        rows, pivots = self.rref()
        return kernel_from_rref(rows, pivots, self.ncols, self.field)

    def kernel_space(self) -> "Subspace":
        """The right kernel as a subspace, without re-reducing its basis.

        Each kernel vector is already monic at its own free column and that
        column is absent from the others, so the family is its own pivot
        basis with pivots at the free columns.
        """
        rows, pivots = self.rref()
        basis = kernel_from_rref(rows, pivots, self.ncols, self.field)
        pivset = set(pivots)
        free = [j for j in range(self.ncols) if j not in pivset]
        return Subspace(self.ncols, self.field, basis, free)

    def column_space(self) -> "Subspace":
        return Subspace.from_vectors(self.nrows, self.field, self.columns())

    def row_space(self) -> "Subspace":
        return Subspace.from_vectors(self.ncols, self.field, self.rows)

    def solve(self, rhs: dict) -> dict | None:
        """One exact solution of self @ x = rhs (free variables zero), or None."""
        n = self.ncols
        aug = []
        for i, row in enumerate(self.rows):
            r = dict(row)
            if i in rhs and not self.field.is_zero(rhs[i]):
                r[n] = rhs[i]
            if r:
                aug.append(r)
        rows, pivots = rref_rows(aug, n + 1, self.field)
        if pivots and pivots[-1] == n:
            return None
        out = {}
        for row, p in zip(rows, pivots):
            if n in row:
                out[p] = row[n]
        return out


# -- subspaces -------------------------------------------------------------------

class Subspace:
    """A subspace held by its canonical reduced-echelon basis."""

    def __init__(self, ambient_dim: int, field: _FieldBase, basis: list[dict],
                 pivot_cols: list[int]):
        self.ambient_dim = ambient_dim
        self.field = field
        self.basis = basis
        self.pivot_cols = pivot_cols
        self._pivot_map = dict(zip(pivot_cols, basis))

    @staticmethod
    def from_vectors(ambient_dim: int, field: _FieldBase, vectors,
                     canonical: bool = True) -> "Subspace":
        form = rref_rows if canonical else reduced_rows
        rows, pivots = form(list(vectors), ambient_dim, field)
        return Subspace(ambient_dim, field, rows, pivots)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def reduce(self, vec: dict) -> dict:
        """Canonical coset representative: eliminate all pivot coordinates."""
        out = dict(vec)
        f = self.field
        hits = [c for c in out if c in self._pivot_map]
        while hits:
            for c in hits:
                if c in out:
                    coef = f.neg(out[c])
                    vec_axpy(out, coef, self._pivot_map[c], f)
            hits = [c for c in out if c in self._pivot_map]
        return out

    def contains(self, vec: dict) -> bool:
        return vec_is_zero(self.reduce(vec))

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(b) for b in other.basis)

    def coords(self, vec: dict) -> list | None:
        """Coefficients of vec in the echelon basis, or None if outside."""
        out = dict(vec)
        f = self.field
        coeffs = [f.zero] * len(self.basis)
        for idx, (row, p) in enumerate(zip(self.basis, self.pivot_cols)):
            if p in out:
                c = out[p]
                coeffs[idx] = c
                vec_axpy(out, f.neg(c), row, f)
        return coeffs if vec_is_zero(out) else None

    def linear_combination(self, coeffs) -> dict:
        f = self.field
        out: dict = {}
        for c, row in zip(coeffs, self.basis):
            vec_axpy(out, c, row, f)
        return out

    def sum_with(self, other: "Subspace") -> "Subspace":
        if self.ambient_dim != other.ambient_dim:
            raise AmbientMismatch("subspace sum needs one ambient space")
        return Subspace.from_vectors(self.ambient_dim, self.field,
                                     list(self.basis) + list(other.basis))

    def equals(self, other: "Subspace") -> bool:
        """Same subspace, regardless of how either basis was produced."""
        if self.ambient_dim != other.ambient_dim or self.dim != other.dim:
            return False
        return self.contains_subspace(other)

    def restrict_operator(self, op: SparseMatrix) -> SparseMatrix:
        """Matrix of op on this subspace in its basis; op must preserve it."""
        cols = []
        for b in self.basis:
            image = op.mat_vec(b)
            c = self.coords(image)
            if c is None:
                raise NotContained("operator does not preserve the subspace")
            cols.append({i: v for i, v in enumerate(c) if not self.field.is_zero(v)})
        return SparseMatrix.from_columns(cols, self.dim, self.field)


def preimage_subspace(f: SparseMatrix, target: Subspace) -> Subspace:
    """{x : f(x) lies in target} as a subspace of the domain."""
    if f.nrows != target.ambient_dim:
        raise AmbientMismatch("map codomain does not match the target's ambient space")
    residual_cols = [target.reduce(col) for col in f.columns()]
    constraint = SparseMatrix.from_columns(residual_cols, f.nrows, f.field)
    return Subspace.from_vectors(f.ncols, f.field, constraint.kernel_basis())


# -- homology of a two-step complex -----------------------------------------------

class Homology:
    """ker(A) / im(B) where A follows B in a complex (so A @ B = 0).

    Classes are carried in quotient coordinates: the reduced echelon form of
    B's columns marks pivot coordinates, A restricted to the remaining
    coordinates has the same rank as A, and its kernel is exactly the
    homology.  Representatives are honest cycles supported on the free
    coordinates.  This keeps the work proportional to rank(A) + rank(B) even
    when a full kernel basis of A would be enormous.
    """

    def __init__(self, A: SparseMatrix | None, B: SparseMatrix | None,
                 space_dim: int | None = None, field: _FieldBase | None = None,
                 check_complex: bool = False):
        if A is None and B is None and (space_dim is None or field is None):
            raise ValidationError("need a map or an explicit space dimension")
        self.field = field or (A.field if A is not None else B.field)
        dim_here = space_dim
        if A is not None:
            dim_here = A.ncols
        if B is not None:
            if dim_here is not None and B.nrows != dim_here:
                raise AmbientMismatch("B's codomain must be A's domain")
            dim_here = B.nrows
        self.space_dim = dim_here
        self.A = A
        self.B = B
        if check_complex and A is not None and B is not None:
            if not A.matmul(B).is_zero_matrix():
                raise ValidationError("not a complex: composition is nonzero")

        if B is not None:
            # the cheap reduced basis: coset reduction does not need the
            # canonical form, and B can be very wide here
            b_rows, b_pivots = reduced_rows([dict(c) for c in B.columns()],
                                            dim_here, self.field)
            self.boundary_space = Subspace(dim_here, self.field, b_rows, b_pivots)
        else:
            self.boundary_space = Subspace(dim_here, self.field, [], [])

        pivset = set(self.boundary_space.pivot_cols)
        free_cols = [j for j in range(dim_here) if j not in pivset]
        self._free = free_cols
        self._free_pos = {j: k for k, j in enumerate(free_cols)}

        if A is not None:
            # A restricted to the free coordinates, then its kernel
            sub_rows = []
            for row in A.rows:
                r = {self._free_pos[j]: v for j, v in row.items() if j in self._free_pos}
                if r:
                    sub_rows.append(r)
            rr, pivset_small = rref_rows(sub_rows, len(free_cols), self.field)
            small_kernel = kernel_from_rref(rr, pivset_small, len(free_cols), self.field)
        else:
            pivset_small = []
            small_kernel = [{k: self.field.one} for k in range(len(free_cols))]
        self._small_kernel = small_kernel
        taken = set(pivset_small)
        self._small_free = [k for k in range(len(free_cols)) if k not in taken]
        self.representatives = [
            {free_cols[k]: v for k, v in vec.items()} for vec in small_kernel]

    @property
    def dim(self) -> int:
        return len(self.representatives)

    def coords(self, vec: dict) -> list | None:
        """Coordinates of the class of vec, or None if it is not a cycle
        modulo boundaries."""
        if self.A is not None:
            if not vec_is_zero(self.A.mat_vec(vec)):
                return None
        reduced = self.boundary_space.reduce(vec)
        small = {}
        for j, v in reduced.items():
            k = self._free_pos.get(j)
            if k is None:
                return None
            small[k] = v
        # kernel basis vectors carry a lone 1 at their own free coordinate
        coeffs = [small.get(f, self.field.zero) for f in self._small_free]
        residual = dict(small)
        f = self.field
        for c, basis_vec in zip(coeffs, self._small_kernel):
            vec_axpy(residual, f.neg(c), basis_vec, f)
        return coeffs if vec_is_zero(residual) else None

    def class_is_zero(self, vec: dict) -> bool:
        c = self.coords(vec)
        if c is None:
            raise NotContained("not a cycle modulo boundaries")
        return all(self.field.is_zero(x) for x in c)


def homology(A: SparseMatrix | None, B: SparseMatrix | None,
             space_dim: int | None = None, field: _FieldBase | None = None,
             check_complex: bool = False) -> Homology:
    return Homology(A, B, space_dim=space_dim, field=field,
                    check_complex=check_complex)


def induced_map(f: SparseMatrix, source: Homology, target: Homology) -> SparseMatrix:
    """Matrix of the map induced on homology by a chain-level map."""
    cols = []
    for rep in source.representatives:
        image = f.mat_vec(rep)
        c = target.coords(image)
        if c is None:
            raise NotContained("chain map does not send cycles to cycles")
        cols.append({i: v for i, v in enumerate(c) if not target.field.is_zero(v)})
    return SparseMatrix.from_columns(cols, target.dim, target.field)
