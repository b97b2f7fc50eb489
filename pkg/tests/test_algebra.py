"""Algebra constructors, validation diagnostics, ideals, and bimodules."""

from fractions import Fraction

import pytest

from cychom.algebra import (
    AlgebraMap,
    FDAlgebra,
    diagonal_bimodule,
    direct_sum,
    functions_on_points,
    ground_field,
    ideal_as_algebra,
    ideal_generated_by,
    matrix_algebra,
    quotient_algebra,
    subalgebra_closure,
    truncated_polynomial,
    twisted_bimodule,
    two_sided_ideal,
    unitalization,
    upper_triangular,
)
from cychom.config import Budget
from cychom.errors import (
    ClosureOverflow,
    NotAutomorphism,
    NotMultiplicative,
    NonUnital,
    SizeOverflow,
    ValidationError,
)
from cychom.scalars import Cyclotomic


def one(A):
    return A.field.one


def test_ground_field_is_unital_line():
    Q = ground_field()
    assert Q.dim == 1
    assert Q.is_unital
    assert Q.multiply({0: 2}, {0: Fraction(1, 2)}) == {0: Fraction(1)}


def test_ground_field_with_fourth_root():
    C = ground_field(4)
    i = Cyclotomic.zeta(4)
    prod = C.multiply({0: i.raw}, {0: i.raw})
    assert Cyclotomic.from_raw(prod[0], 4) == -1


def test_points_algebra_products():
    A = functions_on_points(2)
    d0, d1 = A.basis_vector(0), A.basis_vector(1)
    assert A.multiply(d0, d0) == d0
    assert A.multiply(d0, d1) == {}
    assert A.unit == {0: 1, 1: 1}
    assert A.is_commutative()
    assert A.validate().ok


def test_truncated_polynomial_products():
    A = truncated_polynomial(3)
    x = A.basis_vector(1)
    assert A.multiply(x, x) == {2: 1}
    assert A.multiply(x, {2: 1}) == {}
    assert A.labels == ["1", "x", "x^2"]


def test_matrix_algebra_m2_is_valid_and_unital():
    M2 = matrix_algebra(ground_field(), 2)
    assert M2.dim == 4
    report = M2.validate()
    assert report.ok and report.unital
    # E11, E12, E21, E22 in index order
    E12, E21 = M2.basis_vector(1), M2.basis_vector(2)
    assert M2.multiply(E12, E21) == {0: 1}
    assert M2.multiply(E21, E12) == {3: 1}
    assert M2.multiply(E12, E12) == {}
    assert M2.labels == ["E11", "E12", "E21", "E22"]


def test_matrix_algebra_over_two_points():
    M = matrix_algebra(functions_on_points(2), 2)
    assert M.dim == 8
    assert M.validate().ok
    # blocks do not talk to each other
    a = M.basis_vector(0)   # E11 (x) d0
    b = M.basis_vector(1)   # E11 (x) d1
    assert M.multiply(a, b) == {}


def test_matrix_algebra_unit_coordinates():
    M3 = matrix_algebra(ground_field(), 3)
    assert M3.unit == {0: 1, 4: 1, 8: 1}


def test_upper_triangular_products():
    T = upper_triangular(2)
    assert T.dim == 3
    assert T.validate().unital
    E11, E12, E22 = (T.basis_vector(i) for i in range(3))
    assert T.multiply(E11, E12) == {1: 1}
    assert T.multiply(E12, E22) == {1: 1}
    assert T.multiply(E22, E12) == {}


# The stated bad-table probe (e0*e0 = e1, all other products zero) is in
# fact associative: both ways of bracketing e0*e0*e0 vanish.  validate
# must confirm that, and must catch a table that genuinely fails.

def test_nilpotent_square_table_is_associative():
    A = FDAlgebra(2, 1, {(0, 0): {1: 1}})
    report = A.validate()
    assert report.ok
    assert report.failing_triple is None


def test_validate_names_first_failing_triple():
    A = FDAlgebra(2, 1, {(0, 0): {1: 1}, (1, 0): {0: 1}})
    report = A.validate()
    assert not report.ok
    assert report.failing_triple == (0, 0, 0)
    assert "associativity" in report.messages[0]


def test_validate_reports_bad_unit():
    A = FDAlgebra(2, 1, {(0, 0): {0: 1}, (1, 1): {1: 1}}, unit={0: 1})
    report = A.validate()
    assert not report.ok
    assert not report.unital
    assert "unit" in report.messages[0]


def test_require_valid_raises():
    A = FDAlgebra(2, 1, {(0, 0): {1: 1}, (1, 0): {0: 1}})
    with pytest.raises(ValidationError):
        A.require_valid()


def test_dimension_cap():
    with pytest.raises(SizeOverflow):
        functions_on_points(5, budget=Budget(dim_cap=4))


def test_trace_vector_matrix_algebra():
    M2 = matrix_algebra(ground_field(), 2)
    # left multiplication by a matrix unit E_pq has trace 2 on the diagonal
    assert M2.trace_vector() == [2, 0, 0, 2]


def test_element_str():
    A = truncated_polynomial(2)
    assert A.element_str({0: 1, 1: 2}) == "1 + 2*x"
    assert A.element_str({1: -1}) == "-x"
    assert A.element_str({}) == "0"


# ---------------------------------------------------------------------------
# maps


def test_identity_map_validates():
    A = functions_on_points(3)
    AlgebraMap.identity(A).validate()


def test_swap_is_automorphism():
    A = functions_on_points(2)
    swap = AlgebraMap.from_images(A, A, [{1: 1}, {0: 1}],
                                  multiplicative=True, unital=True)
    swap.validate()
    swap.require_automorphism()
    inv = swap.inverse()
    assert inv.matrix.equals(swap.matrix)


def test_scaling_map_is_rejected():
    A = functions_on_points(2)
    bad = AlgebraMap.from_images(A, A, [{0: 1}, {1: 2}])
    with pytest.raises(NotAutomorphism):
        bad.require_automorphism()


def test_noninvertible_map_is_rejected():
    A = functions_on_points(2)
    bad = AlgebraMap.from_images(A, A, [{0: 1}, {0: 1}])
    with pytest.raises(NotAutomorphism):
        bad.require_automorphism()


def test_multiplicative_flag_checked():
    A = functions_on_points(2)
    bad = AlgebraMap.from_images(A, A, [{0: 1, 1: 1}, {1: 1}],
                                 multiplicative=True)
    with pytest.raises(NotMultiplicative):
        bad.validate()


def test_unital_flag_needs_units():
    A = truncated_polynomial(2)
    J = ideal_generated_by(A, [A.basis_vector(1)])
    JA, _ = ideal_as_algebra(J)
    m = AlgebraMap.from_images(JA, A, [{1: 1}], unital=True)
    with pytest.raises(NonUnital):
        m.validate()


def test_compose_tracks_flags():
    A = functions_on_points(2)
    swap = AlgebraMap.from_images(A, A, [{1: 1}, {0: 1}],
                                  multiplicative=True, unital=True)
    both = swap.compose(swap)
    assert both.multiplicative and both.unital
    assert both.matrix.equals(AlgebraMap.identity(A).matrix)


# ---------------------------------------------------------------------------
# ideals and quotients


def test_ideal_in_two_points():
    A = functions_on_points(2)
    J = ideal_generated_by(A, [A.basis_vector(0)])
    assert J.dim == 1
    assert J.contains(A.basis_vector(0))
    assert not J.contains(A.basis_vector(1))


def test_matrix_algebra_is_simple():
    M2 = matrix_algebra(ground_field(), 2)
    J = ideal_generated_by(M2, [M2.basis_vector(0)])
    assert J.dim == 4


def test_ideal_of_x_in_truncated_cubic():
    A = truncated_polynomial(3)
    J = ideal_generated_by(A, [A.basis_vector(1)])
    assert J.dim == 2
    assert J.contains(A.basis_vector(2))
    assert not J.contains(A.basis_vector(0))


def test_absorption_is_checked():
    M2 = matrix_algebra(ground_field(), 2)
    with pytest.raises(ValidationError):
        two_sided_ideal(M2, [M2.basis_vector(0)])


def test_quotient_of_cubic_by_x_is_ground_field():
    A = truncated_polynomial(3)
    J = ideal_generated_by(A, [A.basis_vector(1)])
    q = quotient_algebra(A, J)
    assert q.algebra.dim == 1
    assert q.algebra.is_unital
    assert q.projection.apply(A.basis_vector(1)) == {}
    assert q.projection.apply(A.unit) == q.algebra.unit
    q.projection.validate()


def test_quotient_dimension_law():
    T = upper_triangular(2)
    J = ideal_generated_by(T, [T.basis_vector(1)])
    q = quotient_algebra(T, J)
    assert q.algebra.dim == T.dim - J.dim
    assert q.algebra.is_commutative()


def test_quotient_by_everything_rejected():
    M2 = matrix_algebra(ground_field(), 2)
    J = ideal_generated_by(M2, [M2.basis_vector(0)])
    with pytest.raises(ValidationError):
        quotient_algebra(M2, J)


def test_ideal_as_algebra_is_nonunital():
    A = truncated_polynomial(3)
    J = ideal_generated_by(A, [A.basis_vector(1)])
    JA, include = ideal_as_algebra(J)
    assert JA.dim == 2
    assert not JA.is_unital
    assert JA.validate().ok
    x = JA.basis_vector(0)
    assert include.apply(JA.multiply(x, x)) == A.multiply(
        A.basis_vector(1), A.basis_vector(1))


# ---------------------------------------------------------------------------
# sums, unitalization, closure


def test_direct_sum_structure():
    data = direct_sum(truncated_polynomial(2), ground_field())
    C = data.algebra
    assert C.dim == 3
    assert C.is_unital
    left_x = data.include_left.apply({1: 1})
    right_1 = data.include_right.apply({0: 1})
    assert C.multiply(left_x, right_1) == {}
    assert data.project_left.apply(left_x) == {1: 1}
    assert data.project_right.apply(left_x) == {}
    data.project_left.validate()
    data.project_right.validate()


def test_unitalization_of_zero_multiplication_line():
    # multiply out (a + s)(b + t) with ab = 0: the result is dual numbers
    Z = FDAlgebra(1, 1, {}, labels=["x"])
    assert Z.validate().ok and not Z.is_unital
    data = unitalization(Z)
    P = data.algebra
    D = truncated_polynomial(2)
    assert P.dim == 2
    x = P.basis_vector(0)
    assert P.multiply(x, x) == {}
    assert P.unit == {1: 1}
    # same table as the dual numbers after swapping the basis order
    flip = {0: 1, 1: 0}
    for i in range(2):
        for j in range(2):
            expect = {flip[k]: c for k, c in D.mul[i][j].items()}
            assert P.mul[flip[i]][flip[j]] == expect
    data.include.validate()
    data.augmentation.validate()
    assert data.augmentation.apply(P.unit) == {0: 1}
    assert data.augmentation.apply(x) == {}


def test_unitalization_of_unital_algebra_keeps_old_unit_inside():
    A = ground_field()
    P = unitalization(A).algebra
    assert P.dim == 2
    # the old unit is an idempotent but not the new unit
    e = P.basis_vector(0)
    assert P.multiply(e, e) == e
    assert P.unit == {1: 1}


def test_closure_of_x_in_cubic():
    A = truncated_polynomial(3)
    sub, include = subalgebra_closure(A, [A.basis_vector(1)])
    assert sub.dim == 2
    assert not sub.is_unital
    include.validate()


def test_closure_with_unit_gives_everything():
    A = truncated_polynomial(3)
    sub, _ = subalgebra_closure(A, [A.unit, A.basis_vector(1)])
    assert sub.dim == 3
    assert sub.is_unital


def test_closure_is_idempotent():
    A = matrix_algebra(ground_field(), 2)
    diag = [A.basis_vector(0), A.basis_vector(3)]
    sub, include = subalgebra_closure(A, diag)
    again, _ = subalgebra_closure(A, [include.apply(sub.basis_vector(i))
                                      for i in range(sub.dim)])
    assert again.dim == sub.dim == 2


def test_closure_overflow():
    M2 = matrix_algebra(ground_field(), 2)
    with pytest.raises(ClosureOverflow):
        subalgebra_closure(M2, [M2.basis_vector(1), M2.basis_vector(2)],
                           budget=Budget(dim_cap=3))


# ---------------------------------------------------------------------------
# bimodules


def test_identity_twist_is_diagonal_bimodule():
    A = functions_on_points(2)
    plain = diagonal_bimodule(A)
    twisted = twisted_bimodule(A, AlgebraMap.identity(A))
    for i in range(A.dim):
        assert plain.right[i].equals(twisted.right[i])
    plain.validate()


def test_swap_twist_permutes_right_action():
    A = functions_on_points(2)
    swap = AlgebraMap.from_images(A, A, [{1: 1}, {0: 1}],
                                  multiplicative=True, unital=True)
    M = twisted_bimodule(A, swap)
    d0 = A.basis_vector(0)
    # d0 . d0 = d0 * swap(d0) = d0 * d1 = 0 and d0 . d1 = d0
    assert M.act_right(d0, 0) == {}
    assert M.act_right(d0, 1) == d0
    assert M.act_left(0, d0) == d0
    M.validate()


def test_sign_twist_on_dual_numbers():
    A = truncated_polynomial(2)
    sign = AlgebraMap.from_images(A, A, [{0: 1}, {1: -1}],
                                  multiplicative=True, unital=True)
    M = twisted_bimodule(A, sign)
    M.validate()
    x = A.basis_vector(1)
    unit = A.unit
    # (a.m).b = a.(m.b) spot check with a = x, m = 1, b = x
    lhs = M.act_right(M.act_left(1, unit), 1)
    rhs = M.act_left(1, M.act_right(unit, 1))
    assert lhs == rhs == {}
    assert M.act_right(unit, 1) == {1: -1}
    assert M.act_left(1, unit) == x


def test_twist_requires_automorphism():
    A = functions_on_points(2)
    bad = AlgebraMap.from_images(A, A, [{0: 1}, {0: 1}])
    with pytest.raises(NotAutomorphism):
        twisted_bimodule(A, bad)
