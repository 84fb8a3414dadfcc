"""Exact linear algebra: examples pinned by hand plus randomized invariants."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import naive_det, naive_rank, rows_of
from propermap.linalg import (
  RatMatrix,
  RatVector,
  Subspace,
  as_rat,
  det,
  image_basis,
  intersect,
  kernel_basis,
  orthogonal_complement,
  primitive_integer_vector,
  rank,
  solve,
  solve_affine_in_subspace,
  subspace_image,
)
from propermap.forge import shift_5x5

rationals = st.builds(Fraction, st.integers(-9, 9), st.integers(1, 3))


def square_matrices(max_m: int = 5):
  return st.integers(1, max_m).flatmap(
    lambda m: st.lists(
      st.lists(rationals, min_size=m, max_size=m),
      min_size=m, max_size=m)).map(RatMatrix.of)


def test_as_rat_accepts_exact_forms():
  assert as_rat("3/4") == Fraction(3, 4)
  assert as_rat("-2") == Fraction(-2)
  assert as_rat(" 5/10 ") == Fraction(1, 2)
  assert as_rat(7) == Fraction(7)
  assert as_rat(Fraction(1, 3)) == Fraction(1, 3)


def test_as_rat_rejects_imprecise_and_malformed_input():
  with pytest.raises(ValueError, match="zero denominator"):
    as_rat("1/0")
  with pytest.raises(ValueError, match="not a rational literal"):
    as_rat("one half")
  with pytest.raises(TypeError):
    as_rat(0.5)
  with pytest.raises(TypeError):
    as_rat(True)


def test_rank_identity_and_zero():
  assert rank(RatMatrix.identity(3)) == 3
  assert rank(RatMatrix.zero(4, 4)) == 0


def test_rank_shift_matrix_matches_naive_elimination():
  S = shift_5x5()
  assert naive_rank(rows_of(S)) == 3
  assert rank(S) == 3


def test_kernel_identity_is_trivial():
  assert kernel_basis(RatMatrix.identity(3)).dim == 0


def test_kernel_of_zero_matrix_is_everything():
  K = kernel_basis(RatMatrix.zero(4, 4))
  assert K.dim == 4
  assert K == Subspace.full(4)


def test_kernel_pinned_three_by_three():
  A = RatMatrix.of([[1, 0, -1], [0, 1, -1], [1, 1, -2]])
  K = kernel_basis(A)
  assert K.basis == (RatVector.of([1, 1, 1]),)
  assert A.apply(RatVector.of([1, 1, 1])).is_zero()


def test_image_identity_is_full():
  assert image_basis(RatMatrix.identity(4)) == Subspace.full(4)


def test_image_of_outer_product_is_the_column_line():
  A = RatMatrix.of([[1, 2], [1, 2]])
  assert image_basis(A).basis == (RatVector.of([1, 1]),)


def test_image_of_shift_is_leading_coordinates():
  S = shift_5x5()
  expected = Subspace.span([RatVector.unit(5, i) for i in range(3)], 5)
  assert image_basis(S) == expected


def test_contains_zero_vector_always():
  s = Subspace.span([RatVector.of([1, 2, 3])], 3)
  assert s.contains(RatVector.zero(3))


def test_contains_scalar_multiple():
  s = Subspace.span([RatVector.of([1, 1, 1])], 3)
  assert s.contains(RatVector.of([2, 2, 2]))
  assert not s.contains(RatVector.of([1, 1, 2]))


def test_contains_misses_missing_coordinate():
  s = Subspace.span([RatVector.unit(3, 0), RatVector.unit(3, 1)], 3)
  assert not s.contains(RatVector.unit(3, 2))


def test_contains_rejects_dimension_mismatch():
  s = Subspace.full(3)
  with pytest.raises(ValueError):
    s.contains(RatVector.zero(2))


def test_subspace_image_under_identity_and_zero():
  s = Subspace.span([RatVector.of([1, 2, 3])], 3)
  assert subspace_image(RatMatrix.identity(3), s) == s
  assert subspace_image(RatMatrix.zero(3, 3), s).dim == 0


def test_subspace_image_of_shift_block():
  S = shift_5x5()
  block = Subspace.span([RatVector.unit(5, 2), RatVector.unit(5, 3)], 5)
  expected = Subspace.span([RatVector.unit(5, 0), RatVector.unit(5, 1)], 5)
  assert subspace_image(S, block) == expected


def test_intersect_with_full_space():
  s = Subspace.span([RatVector.of([1, 2])], 2)
  assert intersect(s, Subspace.full(2)) == s


def test_intersect_of_transverse_lines_is_zero():
  a = Subspace.span([RatVector.of([1, 0])], 2)
  b = Subspace.span([RatVector.of([0, 1])], 2)
  assert intersect(a, b).dim == 0


def test_intersect_of_planes_is_the_shared_line():
  a = Subspace.span([RatVector.unit(3, 0), RatVector.unit(3, 1)], 3)
  b = Subspace.span([RatVector.unit(3, 1), RatVector.unit(3, 2)], 3)
  assert intersect(a, b).basis == (RatVector.unit(3, 1),)


def test_solve_affine_identity_cases():
  w = Subspace.span([RatVector.of([1, 0])], 2)
  inside = RatVector.of([2, 0])
  outside = RatVector.of([0, 1])
  assert solve_affine_in_subspace(RatMatrix.identity(2), inside, w) == inside
  assert solve_affine_in_subspace(RatMatrix.identity(2), outside, w) is None


def test_solve_affine_pinned_example():
  M = RatMatrix.of([[1, 1], [0, 0]])
  b = RatVector.of([1, 0])
  w = Subspace.span([RatVector.of([1, 0])], 2)
  assert solve_affine_in_subspace(M, b, w) == RatVector.of([1, 0])


def test_primitive_integer_vector_clears_denominators():
  v = RatVector.of([Fraction(-1, 2), Fraction(3, 4)])
  p = primitive_integer_vector(v)
  assert p == RatVector.of([-2, 3]) or p == RatVector.of([2, -3])
  # leading nonzero is positive by contract
  lead = next(x for x in p if x != 0)
  assert lead > 0
  with pytest.raises(ValueError):
    primitive_integer_vector(RatVector.zero(3))


@settings(deadline=None, max_examples=80)
@given(square_matrices())
def test_rank_agrees_with_naive_elimination(A):
  assert rank(A) == naive_rank(rows_of(A))


@settings(deadline=None, max_examples=80)
@given(square_matrices())
def test_det_agrees_with_cofactor_expansion(A):
  assert det(A) == naive_det(rows_of(A))


@settings(deadline=None, max_examples=80)
@given(square_matrices())
def test_rank_nullity(A):
  assert rank(A) + kernel_basis(A).dim == A.m


@settings(deadline=None, max_examples=80)
@given(square_matrices())
def test_kernel_orthogonal_to_row_space(A):
  K = kernel_basis(A)
  R = image_basis(A.transpose())
  assert K.dim + R.dim == A.m
  for kb in K.basis:
    assert A.apply(kb).is_zero()
    for rb in R.basis:
      assert kb.dot(rb) == 0


@settings(deadline=None, max_examples=60)
@given(square_matrices(), st.lists(st.integers(-3, 3), min_size=1, max_size=5))
def test_row_space_vectors_are_not_killed(A, coeffs):
  R = image_basis(A.transpose())
  z = RatVector.zero(A.m)
  for c, b in zip(coeffs, R.basis):
    z = z + b.scale(c)
  if not z.is_zero():
    assert not A.apply(z).is_zero()


@settings(deadline=None, max_examples=60)
@given(square_matrices())
def test_canonical_basis_is_idempotent(A):
  for s in (kernel_basis(A), image_basis(A), image_basis(A.transpose())):
    assert Subspace.span(list(s.basis), s.ambient_dim) == s


@settings(deadline=None, max_examples=60)
@given(square_matrices(), st.lists(rationals, min_size=1, max_size=5))
def test_solve_affine_result_verifies(A, raw):
  w = image_basis(A.transpose())
  b = RatVector.of((list(raw) + [0] * A.m)[:A.m])
  u = solve_affine_in_subspace(A, b, w)
  if u is not None:
    assert A.apply(u) == b
    assert w.contains(u)


@settings(deadline=None, max_examples=60)
@given(square_matrices())
def test_plain_solve_round_trip(A):
  b = A.apply(RatVector.of(list(range(1, A.m + 1))))
  x = solve(A, b)
  assert x is not None
  assert A.apply(x) == b


@settings(deadline=None, max_examples=40)
@given(square_matrices(4))
def test_orthogonal_complement_dimensions(A):
  s = image_basis(A)
  c = orthogonal_complement(s)
  assert s.dim + c.dim == A.m
  for sb in s.basis:
    for cb in c.basis:
      assert sb.dot(cb) == 0
