"""Finite-dimensional associative algebras given by structure constants.

An algebra is a basis with a sparse multiplication tensor over Q or a
cyclotomic field.  Everything here is immutable after construction, and
each constructor validates its output, so downstream modules can assume
associativity and unit axioms hold.
"""

from __future__ import annotations

from dataclasses import dataclass

from .config import default_budget
from .errors import (
    AmbientMismatch,
    ClosureOverflow,
    NotAutomorphism,
    NotMultiplicative,
    NonUnital,
    SizeOverflow,
    ValidationError,
)
from .linalg import SparseMatrix, Subspace, to_raw, vec_axpy, vec_equal
from .scalars import field_of_order, scalar_to_string


def _normalize_vec(vec, field) -> dict:
    """Copy a sparse vector, coercing entries to raw field values."""
    out = {}
    for k, v in vec.items():
        raw = to_raw(v, field)
        if not field.is_zero(raw):
            out[k] = raw
    return out


@dataclass
class ValidationReport:
    ok: bool
    unital: bool
    messages: list
    failing_triple: tuple | None


class FDAlgebra:
    """A finite-dimensional algebra with sparse structure constants.

    ``mul[i][j]`` is the sparse coordinate vector of ``e_i * e_j``.  The
    optional ``unit`` is a coordinate vector; nonunital algebras (ideals
    viewed as algebras, augmentation kernels) simply omit it.
    """

    def __init__(self, dim, field_order=1, mul=None, labels=None, unit=None,
                 name="", budget=None):
        budget = budget or default_budget()
        if dim < 1:
            raise ValidationError("algebra dimension must be at least 1")
        if dim > budget.dim_cap:
            raise SizeOverflow(
                "algebra dimension %d exceeds cap %d" % (dim, budget.dim_cap))
        self.dim = dim
        self.field_order = field_order
        self.field = field_of_order(field_order)
        self.name = name
        if labels is None:
            labels = ["e%d" % i for i in range(dim)]
        if len(labels) != dim:
            raise ValidationError("expected %d basis labels" % dim)
        self.labels = list(labels)
        table = [[{} for _ in range(dim)] for _ in range(dim)]
        if mul is not None:
            for i in range(dim):
                for j in range(dim):
                    entry = mul[i][j] if isinstance(mul, list) else mul.get((i, j), {})
                    table[i][j] = _normalize_vec(entry, self.field)
        self.mul = table
        self.unit = _normalize_vec(unit, self.field) if unit is not None else None

    @classmethod
    def from_triples(cls, dim, field_order, triples, labels=None, unit=None,
                     name="", budget=None):
        """Build from a list of (i, j, k, scalar) structure constants."""
        mul = {}
        field = field_of_order(field_order)
        for i, j, k, value in triples:
            raw = to_raw(value, field)
            vec = mul.setdefault((i, j), {})
            vec[k] = field.add(vec.get(k, field.zero), raw)
        return cls(dim, field_order, mul, labels=labels, unit=unit,
                   name=name, budget=budget)

    @property
    def is_unital(self) -> bool:
        return self.unit is not None

    def basis_vector(self, i: int) -> dict:
        return {i: self.field.one}

    def multiply(self, u: dict, v: dict) -> dict:
        """Product of two sparse coordinate vectors."""
        field = self.field
        out = {}
        for i, a in u.items():
            for j, b in v.items():
                c = field.mul(a, b)
                if not field.is_zero(c):
                    vec_axpy(out, c, self.mul[i][j], field)
        return out

    def left_mult_matrix(self, vec: dict) -> SparseMatrix:
        """Matrix of x -> vec * x."""
        cols = [self.multiply(vec, self.basis_vector(j)) for j in range(self.dim)]
        return SparseMatrix.from_columns(cols, self.dim, self.field)

    def right_mult_matrix(self, vec: dict) -> SparseMatrix:
        """Matrix of x -> x * vec."""
        cols = [self.multiply(self.basis_vector(j), vec) for j in range(self.dim)]
        return SparseMatrix.from_columns(cols, self.dim, self.field)

    def trace_vector(self) -> list:
        """Traces of the left multiplication operators, one per basis element."""
        field = self.field
        out = []
        for k in range(self.dim):
            t = field.zero
            for i in range(self.dim):
                t = field.add(t, self.mul[k][i].get(i, field.zero))
            out.append(t)
        return out

    def is_commutative(self) -> bool:
        field = self.field
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                if not vec_equal(self.mul[i][j], self.mul[j][i], field):
                    return False
        return True

    def validate(self) -> ValidationReport:
        """Check associativity and unit axioms.

        Returns a report naming the first failing basis triple instead of
        raising, so callers can surface the exact defect.
        """
        field = self.field
        messages = []
        failing = None
        for i in range(self.dim):
            for j in range(self.dim):
                p = self.mul[i][j]
                for k in range(self.dim):
                    lhs = {}
                    for t, c in p.items():
                        vec_axpy(lhs, c, self.mul[t][k], field)
                    rhs = {}
                    for t, c in self.mul[j][k].items():
                        vec_axpy(rhs, c, self.mul[i][t], field)
                    if not vec_equal(lhs, rhs, field):
                        failing = (i, j, k)
                        messages.append(
                            "associativity fails at basis triple (%d, %d, %d)"
                            % (i, j, k))
                        break
                if failing:
                    break
            if failing:
                break
        unital = False
        if self.unit is not None and failing is None:
            unital = True
            for i in range(self.dim):
                e = self.basis_vector(i)
                if not vec_equal(self.multiply(self.unit, e), e, field):
                    messages.append("unit fails on the left at basis %d" % i)
                    failing = failing or (i, i, i)
                    unital = False
                    break
                if not vec_equal(self.multiply(e, self.unit), e, field):
                    messages.append("unit fails on the right at basis %d" % i)
                    failing = failing or (i, i, i)
                    unital = False
                    break
        return ValidationReport(ok=not messages, unital=unital,
                                messages=messages, failing_triple=failing)

    def require_valid(self) -> "FDAlgebra":
        report = self.validate()
        if not report.ok:
            raise ValidationError(report.messages[0])
        return self

    def element_str(self, vec: dict) -> str:
        if not vec:
            return "0"
        parts = []
        for k in sorted(vec):
            c = scalar_to_string(
                _wrap(vec[k], self.field), with_order=False)
            label = self.labels[k]
            if label == "1":
                parts.append(c)
            elif c == "1":
                parts.append(label)
            elif c == "-1":
                parts.append("-" + label)
            else:
                parts.append("%s*%s" % (c, label))
        return " + ".join(parts).replace("+ -", "- ")


def _wrap(raw, field):
    from .scalars import Cyclotomic
    return Cyclotomic.from_raw(raw, field.order)


# ---------------------------------------------------------------------------
# linear and multiplicative maps


class AlgebraMap:
    """A linear map between algebras, with optional structure flags.

    The flags are contracts: ``validate`` confirms a flagged property on
    all basis pairs and raises when the matrix does not deliver it.
    """

    def __init__(self, source: FDAlgebra, target: FDAlgebra,
                 matrix: SparseMatrix, multiplicative=False, unital=False,
                 name=""):
        if matrix.nrows != target.dim or matrix.ncols != source.dim:
            raise ValidationError(
                "map matrix must be %d x %d, got %d x %d"
                % (target.dim, source.dim, matrix.nrows, matrix.ncols))
        if source.field_order != target.field_order:
            raise AmbientMismatch("source and target live over different fields")
        self.source = source
        self.target = target
        self.matrix = matrix
        self.multiplicative = multiplicative
        self.unital = unital
        self.name = name

    @classmethod
    def from_images(cls, source, target, images, **flags):
        cols = [_normalize_vec(v, target.field) for v in images]
        return cls(source, target,
                   SparseMatrix.from_columns(cols, target.dim, target.field),
                   **flags)

    @classmethod
    def identity(cls, algebra):
        return cls(algebra, algebra,
                   SparseMatrix.identity(algebra.dim, algebra.field),
                   multiplicative=True, unital=algebra.is_unital)

    def apply(self, vec: dict) -> dict:
        return self.matrix.mat_vec(vec)

    def compose(self, other: "AlgebraMap") -> "AlgebraMap":
        """self after other."""
        if other.target is not self.source and other.target.dim != self.source.dim:
            raise AmbientMismatch("composition dimensions do not match")
        return AlgebraMap(
            other.source, self.target, self.matrix.matmul(other.matrix),
            multiplicative=self.multiplicative and other.multiplicative,
            unital=self.unital and other.unital)

    def is_bijective(self) -> bool:
        return (self.source.dim == self.target.dim
                and self.matrix.rank() == self.source.dim)

    def validate(self) -> None:
        src, tgt = self.source, self.target
        if self.multiplicative:
            images = [self.apply(src.basis_vector(i)) for i in range(src.dim)]
            for i in range(src.dim):
                for j in range(src.dim):
                    lhs = self.apply(src.mul[i][j])
                    rhs = tgt.multiply(images[i], images[j])
                    if not vec_equal(lhs, rhs, tgt.field):
                        raise NotMultiplicative(
                            "map is not multiplicative on basis pair (%d, %d)"
                            % (i, j))
        if self.unital:
            if not (src.is_unital and tgt.is_unital):
                raise NonUnital("unital flag requires unital source and target")
            if not vec_equal(self.apply(src.unit), tgt.unit, tgt.field):
                raise NonUnital("map does not send unit to unit")

    def require_automorphism(self) -> "AlgebraMap":
        if self.source is not self.target:
            raise NotAutomorphism("automorphism must map an algebra to itself")
        if not self.is_bijective():
            raise NotAutomorphism("matrix is not invertible")
        try:
            AlgebraMap(self.source, self.target, self.matrix,
                       multiplicative=True,
                       unital=self.source.is_unital).validate()
        except (NotMultiplicative, NonUnital) as exc:
            raise NotAutomorphism(str(exc)) from exc
        return self

    def inverse(self) -> "AlgebraMap":
        if not self.is_bijective():
            raise NotAutomorphism("matrix is not invertible")
        n = self.source.dim
        cols = []
        for j in range(n):
            sol = self.matrix.solve(self.target.basis_vector(j))
            cols.append(sol)
        inv = SparseMatrix.from_columns(cols, n, self.source.field)
        return AlgebraMap(self.target, self.source, inv,
                          multiplicative=self.multiplicative,
                          unital=self.unital)


# ---------------------------------------------------------------------------
# ideals


class TwoSidedIdeal:
    """A subspace of an algebra closed under both multiplications."""

    def __init__(self, parent: FDAlgebra, space: Subspace, name=""):
        if space.ambient_dim != parent.dim:
            raise AmbientMismatch("ideal subspace has wrong ambient dimension")
        self.parent = parent
        self.space = space
        self.name = name

    @property
    def dim(self) -> int:
        return self.space.dim

    def contains(self, vec: dict) -> bool:
        return self.space.contains(vec)

    def validate(self) -> None:
        A = self.parent
        for x in self.space.basis:
            for a in range(A.dim):
                left = A.multiply(A.basis_vector(a), x)
                right = A.multiply(x, A.basis_vector(a))
                if not self.space.contains(left):
                    raise ValidationError(
                        "left absorption fails: e_%d times ideal basis leaves "
                        "the subspace" % a)
                if not self.space.contains(right):
                    raise ValidationError(
                        "right absorption fails: ideal basis times e_%d leaves "
                        "the subspace" % a)


def two_sided_ideal(A: FDAlgebra, vectors, name="") -> TwoSidedIdeal:
    """Wrap explicit basis vectors as an ideal, checking absorption."""
    space = Subspace.from_vectors(
        A.dim, A.field, [_normalize_vec(v, A.field) for v in vectors])
    ideal = TwoSidedIdeal(A, space, name=name)
    ideal.validate()
    return ideal


def ideal_generated_by(A: FDAlgebra, gens, name="") -> TwoSidedIdeal:
    """Smallest two-sided ideal containing the generators.

    Alternates left and right multiplication closure until the subspace
    stabilizes.  The generators themselves are kept, which is the
    unit-augmented convention needed when A has no unit.
    """
    vectors = [_normalize_vec(v, A.field) for v in gens]
    space = Subspace.from_vectors(A.dim, A.field, vectors)
    while True:
        new_vecs = []
        for x in space.basis:
            for a in range(A.dim):
                for prod in (A.multiply(A.basis_vector(a), x),
                             A.multiply(x, A.basis_vector(a))):
                    if not space.contains(prod):
                        new_vecs.append(prod)
        if not new_vecs:
            return TwoSidedIdeal(A, space, name=name)
        space = Subspace.from_vectors(
            A.dim, A.field, list(space.basis) + new_vecs)


# ---------------------------------------------------------------------------
# bimodules


class Bimodule:
    """An A-bimodule given by commuting left and right action matrices."""

    def __init__(self, algebra: FDAlgebra, dim: int, left, right,
                 labels=None, name=""):
        self.algebra = algebra
        self.dim = dim
        self.left = left
        self.right = right
        self.labels = labels or ["m%d" % i for i in range(dim)]
        self.name = name

    def act_left(self, i: int, vec: dict) -> dict:
        return self.left[i].mat_vec(vec)

    def act_right(self, vec: dict, i: int) -> dict:
        return self.right[i].mat_vec(vec)

    def validate(self) -> None:
        A = self.algebra
        field = A.field
        n = A.dim
        for i in range(n):
            for j in range(n):
                prod_left = _action_of(self.left, A.mul[i][j], self.dim, field)
                if not prod_left.equals(self.left[i].matmul(self.left[j])):
                    raise ValidationError(
                        "left action is not multiplicative at pair (%d, %d)"
                        % (i, j))
                prod_right = _action_of(self.right, A.mul[i][j], self.dim, field)
                if not prod_right.equals(self.right[j].matmul(self.right[i])):
                    raise ValidationError(
                        "right action does not reverse products at pair "
                        "(%d, %d)" % (i, j))
                if not self.left[i].matmul(self.right[j]).equals(
                        self.right[j].matmul(self.left[i])):
                    raise ValidationError(
                        "left and right actions fail to commute at pair "
                        "(%d, %d)" % (i, j))
        if A.is_unital:
            ident = SparseMatrix.identity(self.dim, field)
            if not _action_of(self.left, A.unit, self.dim, field).equals(ident):
                raise ValidationError("unit does not act as identity on the left")
            if not _action_of(self.right, A.unit, self.dim, field).equals(ident):
                raise ValidationError("unit does not act as identity on the right")


def _action_of(mats, vec, dim, field):
    out = SparseMatrix.zero(dim, dim, field)
    for i, c in vec.items():
        out = out.add(mats[i].scaled(c))
    return out


def diagonal_bimodule(A: FDAlgebra) -> Bimodule:
    left = [A.left_mult_matrix(A.basis_vector(i)) for i in range(A.dim)]
    right = [A.right_mult_matrix(A.basis_vector(i)) for i in range(A.dim)]
    return Bimodule(A, A.dim, left, right, labels=A.labels, name=A.name)


def twisted_bimodule(A: FDAlgebra, g: AlgebraMap) -> Bimodule:
    """The bimodule with a.m = am and m.a = m g(a).

    g must be a unital algebra automorphism of A.
    """
    g.require_automorphism()
    left = [A.left_mult_matrix(A.basis_vector(i)) for i in range(A.dim)]
    right = [A.right_mult_matrix(g.apply(A.basis_vector(i)))
             for i in range(A.dim)]
    return Bimodule(A, A.dim, left, right, labels=A.labels,
                    name=A.name + "(twisted)")


# ---------------------------------------------------------------------------
# constructors


def ground_field(field_order=1, budget=None) -> FDAlgebra:
    return FDAlgebra(1, field_order, {(0, 0): {0: 1}}, labels=["1"],
                     unit={0: 1}, name="ground_field",
                     budget=budget).require_valid()


def functions_on_points(l: int, field_order=1, budget=None) -> FDAlgebra:
    """Functions on l points: component-wise products of delta functions."""
    field = field_of_order(field_order)
    mul = {(i, i): {i: field.one} for i in range(l)}
    unit = {i: field.one for i in range(l)}
    labels = ["d%d" % i for i in range(l)]
    return FDAlgebra(l, field_order, mul, labels=labels, unit=unit,
                     name="points_%d" % l, budget=budget).require_valid()


def truncated_polynomial(N: int, field_order=1, budget=None) -> FDAlgebra:
    """Q[x] / (x^N) on the basis 1, x, ..., x^(N-1)."""
    field = field_of_order(field_order)
    mul = {}
    for i in range(N):
        for j in range(N):
            if i + j < N:
                mul[(i, j)] = {i + j: field.one}
    labels = ["1"] + ["x" if k == 1 else "x^%d" % k for k in range(1, N)]
    return FDAlgebra(N, field_order, mul, labels=labels, unit={0: field.one},
                     name="trunc_poly_%d" % N, budget=budget).require_valid()


def matrix_algebra(base: FDAlgebra, N: int, budget=None) -> FDAlgebra:
    """N x N matrices over a unital base algebra.

    Basis is E_pq tensor a_i with index ((p*N)+q)*dim(base)+i; the unit is
    the sum of diagonal matrix units tensored with the base unit.
    """
    if not base.is_unital:
        raise NonUnital("matrix algebra needs a unital base")
    d = base.dim
    field = base.field
    dim = N * N * d
    plain = d == 1 and base.labels == ["1"]

    def idx(p, q, i):
        return (p * N + q) * d + i

    mul = {}
    for p in range(N):
        for q in range(N):
            for r in range(N):
                for s in range(N):
                    if q != r:
                        continue
                    for i in range(d):
                        for j in range(d):
                            target = {idx(p, s, k): c
                                      for k, c in base.mul[i][j].items()}
                            if target:
                                mul[(idx(p, q, i), idx(r, s, j))] = target
    labels = []
    for p in range(N):
        for q in range(N):
            for i in range(d):
                tag = "E%d%d" % (p + 1, q + 1)
                labels.append(tag if plain else tag + "⊗" + base.labels[i])
    unit = {}
    for p in range(N):
        for i, c in base.unit.items():
            unit[idx(p, p, i)] = c
    A = FDAlgebra(dim, base.field_order, mul, labels=labels, unit=unit,
                  name="matrix_%d(%s)" % (N, base.name or "base"),
                  budget=budget).require_valid()
    A.matrix_base = base
    A.matrix_size = N
    return A


def upper_triangular(n: int, field_order=1, budget=None) -> FDAlgebra:
    """Upper triangular n x n matrices over the ground field."""
    field = field_of_order(field_order)
    pairs = [(p, q) for p in range(n) for q in range(p, n)]
    index = {pq: t for t, pq in enumerate(pairs)}
    mul = {}
    for (p, q) in pairs:
        for (r, s) in pairs:
            if q == r:
                mul[(index[(p, q)], index[(r, s)])] = {index[(p, s)]: field.one}
    labels = ["E%d%d" % (p + 1, q + 1) for (p, q) in pairs]
    unit = {index[(p, p)]: field.one for p in range(n)}
    return FDAlgebra(len(pairs), field_order, mul, labels=labels, unit=unit,
                     name="upper_tri_%d" % n, budget=budget).require_valid()


@dataclass
class DirectSumData:
    algebra: FDAlgebra
    include_left: AlgebraMap
    include_right: AlgebraMap
    project_left: AlgebraMap
    project_right: AlgebraMap


def direct_sum(A: FDAlgebra, B: FDAlgebra, budget=None) -> DirectSumData:
    """Product algebra A x B with the four structural maps.

    The inclusions are multiplicative but not unital; the projections are
    both when the summands are unital.
    """
    if A.field_order != B.field_order:
        raise AmbientMismatch("direct sum needs a common scalar field")
    field = A.field
    dim = A.dim + B.dim
    mul = {}
    for i in range(A.dim):
        for j in range(A.dim):
            if A.mul[i][j]:
                mul[(i, j)] = dict(A.mul[i][j])
    for i in range(B.dim):
        for j in range(B.dim):
            if B.mul[i][j]:
                mul[(A.dim + i, A.dim + j)] = {
                    A.dim + k: c for k, c in B.mul[i][j].items()}
    labels = (["(%s,0)" % lbl for lbl in A.labels]
              + ["(0,%s)" % lbl for lbl in B.labels])
    unit = None
    if A.is_unital and B.is_unital:
        unit = dict(A.unit)
        for k, c in B.unit.items():
            unit[A.dim + k] = c
    C = FDAlgebra(dim, A.field_order, mul, labels=labels, unit=unit,
                  name="%s+%s" % (A.name or "A", B.name or "B"),
                  budget=budget).require_valid()
    inc_a = AlgebraMap.from_images(
        A, C, [{i: field.one} for i in range(A.dim)], multiplicative=True)
    inc_b = AlgebraMap.from_images(
        B, C, [{A.dim + i: field.one} for i in range(B.dim)],
        multiplicative=True)
    proj_a = AlgebraMap.from_images(
        C, A, [{i: field.one} if i < A.dim else {} for i in range(dim)],
        multiplicative=True, unital=unit is not None and A.is_unital)
    proj_b = AlgebraMap.from_images(
        C, B, [{} if i < A.dim else {i - A.dim: field.one}
               for i in range(dim)],
        multiplicative=True, unital=unit is not None and B.is_unital)
    for m in (inc_a, inc_b, proj_a, proj_b):
        m.validate()
    return DirectSumData(C, inc_a, inc_b, proj_a, proj_b)


@dataclass
class QuotientData:
    algebra: FDAlgebra
    projection: AlgebraMap


def quotient_algebra(A: FDAlgebra, ideal: TwoSidedIdeal,
                     budget=None) -> QuotientData:
    """A / J with its multiplicative projection map.

    Quotient coordinates are the ambient coordinates away from the pivot
    columns of the ideal subspace, so residues of the canonical reduction
    read off directly.
    """
    if ideal.parent is not A:
        raise AmbientMismatch("ideal does not belong to this algebra")
    ideal.validate()
    field = A.field
    free = [i for i in range(A.dim) if i not in set(ideal.space.pivot_cols)]
    if not free:
        raise ValidationError("quotient by the whole algebra is empty")
    pos = {f: t for t, f in enumerate(free)}

    def residue(vec):
        red = ideal.space.reduce(vec)
        return {pos[k]: c for k, c in red.items()}

    dim = len(free)
    mul = {}
    for a in range(dim):
        for b in range(dim):
            prod = residue(A.multiply(A.basis_vector(free[a]),
                                      A.basis_vector(free[b])))
            if prod:
                mul[(a, b)] = prod
    labels = [A.labels[f] for f in free]
    unit = residue(A.unit) if A.is_unital else None
    Q = FDAlgebra(dim, A.field_order, mul, labels=labels, unit=unit,
                  name=(A.name or "A") + "_mod_" + (ideal.name or "J"),
                  budget=budget).require_valid()
    proj = AlgebraMap.from_images(
        A, Q, [residue(A.basis_vector(i)) for i in range(A.dim)],
        multiplicative=True, unital=A.is_unital)
    proj.validate()
    return QuotientData(Q, proj)


@dataclass
class UnitalizationData:
    algebra: FDAlgebra
    include: AlgebraMap
    augmentation: AlgebraMap


def unitalization(A: FDAlgebra, budget=None) -> UnitalizationData:
    """Adjoin a unit: A+ = A + Q with (a, s)(b, t) = (ab + sb + ta, st).

    The original basis keeps its indices; the adjoined unit is the last
    coordinate.  Works whether or not A already has a unit.
    """
    field = A.field
    d = A.dim
    mul = {}
    for i in range(d):
        for j in range(d):
            if A.mul[i][j]:
                mul[(i, j)] = dict(A.mul[i][j])
    for i in range(d):
        mul[(i, d)] = {i: field.one}
        mul[(d, i)] = {i: field.one}
    mul[(d, d)] = {d: field.one}
    labels = list(A.labels) + ["u"]
    plus = FDAlgebra(d + 1, A.field_order, mul, labels=labels,
                     unit={d: field.one}, name=(A.name or "A") + "_plus",
                     budget=budget).require_valid()
    include = AlgebraMap.from_images(
        A, plus, [{i: field.one} for i in range(d)], multiplicative=True)
    include.validate()
    ground = ground_field(A.field_order)
    augmentation = AlgebraMap.from_images(
        plus, ground, [{} for _ in range(d)] + [{0: field.one}],
        multiplicative=True, unital=True)
    augmentation.validate()
    return UnitalizationData(plus, include, augmentation)


def subalgebra_closure(A: FDAlgebra, generators, budget=None):
    """Smallest subalgebra containing the generators.

    Returns (algebra, inclusion map).  The result has no unit unless the
    closure happens to contain one; callers needing units should include
    the unit among the generators.
    """
    budget = budget or default_budget()
    field = A.field
    vectors = [_normalize_vec(v, A.field) for v in generators]
    space = Subspace.from_vectors(A.dim, field, vectors)
    while True:
        new_vecs = []
        for x in space.basis:
            for y in space.basis:
                prod = A.multiply(x, y)
                if not space.contains(prod):
                    new_vecs.append(prod)
        if not new_vecs:
            break
        space = Subspace.from_vectors(
            A.dim, field, list(space.basis) + new_vecs)
        if space.dim > budget.dim_cap:
            raise ClosureOverflow(
                "subalgebra closure exceeded dimension cap %d"
                % budget.dim_cap)
    basis = list(space.basis)
    dim = space.dim
    if dim == 0:
        raise ValidationError("closure of zero generators is empty")
    mul = {}
    for a in range(dim):
        for b in range(dim):
            prod = A.multiply(basis[a], basis[b])
            coords = space.coords(prod)
            entry = {k: c for k, c in enumerate(coords)
                     if not field.is_zero(c)}
            if entry:
                mul[(a, b)] = entry
    unit = None
    if A.is_unital and space.contains(A.unit):
        coords = space.coords(A.unit)
        unit = {k: c for k, c in enumerate(coords) if not field.is_zero(c)}
    sub = FDAlgebra(dim, A.field_order, mul, unit=unit,
                    name=(A.name or "A") + "_sub", budget=budget)
    sub.require_valid()
    include = AlgebraMap.from_images(sub, A, basis, multiplicative=True,
                                     unital=unit is not None and A.is_unital)
    include.validate()
    return sub, include


def ideal_as_algebra(ideal: TwoSidedIdeal, budget=None):
    """View a two-sided ideal as a nonunital algebra on its own basis.

    Returns (algebra, inclusion map into the parent).
    """
    A = ideal.parent
    field = A.field
    basis = list(ideal.space.basis)
    dim = len(basis)
    mul = {}
    for a in range(dim):
        for b in range(dim):
            prod = A.multiply(basis[a], basis[b])
            coords = ideal.space.coords(prod)
            if coords is None:
                raise ValidationError("ideal is not closed under products")
            entry = {k: c for k, c in enumerate(coords)
                     if not field.is_zero(c)}
            if entry:
                mul[(a, b)] = entry
    J = FDAlgebra(dim, A.field_order, mul, unit=None,
                  name=(ideal.name or "J"), budget=budget)
    J.require_valid()
    include = AlgebraMap.from_images(J, A, basis, multiplicative=True)
    include.validate()
    return J, include
