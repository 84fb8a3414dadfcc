"""The decision pipeline: screens, the corank-1 procedure, and certificates."""

import random
from fractions import Fraction

import pytest

from helpers import (
  ones_kernel_sample,
  rand_antisymmetric,
  rand_int_matrix,
  rand_invertible,
  rand_symmetric,
)
from propermap.certify import (
  NONPROPER,
  PROPER,
  UNDECIDED,
  DirectionProfile,
  certify,
  condition_chain,
  corank1_decide,
  gram_image,
  kernel_cuberoot_candidates,
  necessary_escape_search,
  normalize_kernel_direction,
  sufficient_screens,
  verify_certificate,
)
from propermap.forge import Family3x3Params, forge_3x3, golden_3x3, shift_5x5
from propermap.hadamard import hpow
from propermap.linalg import RatMatrix, RatVector, kernel_basis, rank

# corank 1 with kernel line (1,1,2): the cube root of the kernel direction
# is irrational, every membership it needs holds, and the escape system has
# no solution even numerically, so no screen can decide the instance
UNDECIDED_FIXTURE = [[1, 1, -1], [1, 1, -1], [1, -1, 0]]


def test_escape_search_invertible_matrix_is_a_proof():
  s = necessary_escape_search(RatMatrix.of([[2, 1], [1, 1]]))
  assert s.candidate is None
  assert s.none_is_proof


def test_escape_search_zero_matrix_is_a_proof():
  s = necessary_escape_search(RatMatrix.zero(3, 3))
  assert s.candidate is None
  assert s.none_is_proof


def test_escape_search_shift_finds_the_classic_candidate():
  S = shift_5x5()
  s = necessary_escape_search(S)
  assert s.candidate == RatVector.of([0, 0, 1, 1, 0])
  assert s.image_vector == RatVector.of([1, 1, 0, 0, 0])
  assert s.image_vector == S.apply(s.candidate)
  assert not s.image_vector.is_zero()
  assert S.apply(hpow(s.image_vector, 3)).is_zero()


def test_screens_identity_fires_kernel_in_gram():
  cert = certify(RatMatrix.identity(3))
  assert cert.verdict == PROPER
  assert cert.reason == "kernel-in-gram-kernel"


def test_screens_symmetric_and_antisymmetric(subtests=None):
  rng = random.Random(2)
  for build in (rand_symmetric, rand_antisymmetric):
    A = build(rng, 4)
    cert = certify(A)
    assert cert.verdict == PROPER
    assert cert.reason == "kernel-in-gram-kernel"


def test_screens_rank_one_outer_product():
  A = RatMatrix.of([[1, 2], [1, 2]])
  cert = certify(A)
  assert cert.verdict == PROPER
  assert cert.reason == "gram-rank-1"


def test_screens_shift_is_triangular():
  cert = certify(shift_5x5())
  assert cert.verdict == PROPER
  assert cert.reason == "triangular"
  # the escape candidate exists, so the screen result shows the necessary
  # condition alone cannot settle properness
  steps = {a.step: a.outcome for a in cert.audit}
  assert steps.get("escape-search") == "candidate"


def test_screens_lower_triangular_fires_too():
  A = RatMatrix.of([[0, 0, 0], [2, 0, 0], [1, -1, 0]])
  screen, _ = sufficient_screens(A)
  assert screen is not None
  assert screen.reason == "triangular"


def test_corank1_golden_member_is_non_proper():
  cert = corank1_decide(golden_3x3())
  assert cert.verdict == NONPROPER
  assert cert.reason == "escape-direction"
  recipe = cert.witness()
  assert recipe is not None
  assert recipe.kind == "simple"
  assert recipe.x_inf == RatVector.of([1, 1, 1])


def test_corank1_blocked_kernel_line_is_proper():
  A = RatMatrix.of([[-2, -3, 5], [0, -1, 1], [-2, -3, 5]])
  cert = corank1_decide(A)
  assert cert.verdict == PROPER
  assert cert.reason == "kernel-line-blocked"


def test_corank1_two_by_two_fast_path():
  cert = corank1_decide(RatMatrix.of([[1, -1], [1, -1]]))
  assert cert.verdict == PROPER
  assert cert.reason == "kernel-line-blocked"


def test_corank1_rejects_wrong_corank():
  with pytest.raises(ValueError):
    corank1_decide(RatMatrix.identity(3))
  with pytest.raises(ValueError):
    corank1_decide(RatMatrix.zero(3, 3))


def test_normalize_kernel_direction_all_ones_is_identity_frame():
  A = golden_3x3()
  nk = normalize_kernel_direction(A, RatVector.of([1, 1, 1]))
  assert nk.frame.is_identity()
  assert nk.matrix == A
  assert nk.generator == RatVector.of([1, 1, 1])


def test_normalize_kernel_direction_scales_by_cube_roots():
  A = RatMatrix.of([[1, 0, -8], [0, 1, -8], [1, 1, -16]])
  g = RatVector.of([8, 8, 1])
  assert A.apply(g).is_zero()
  nk = normalize_kernel_direction(A, g)
  assert nk.generator == RatVector.of([1, 1, 1])
  assert nk.matrix.apply(nk.generator).is_zero()
  assert sorted(nk.frame.diag) == [Fraction(1, 2), Fraction(1, 2), Fraction(1)]


def test_normalize_kernel_direction_pushes_zeros_last():
  A = RatMatrix.of([[1, 0, -8], [0, 1, 0], [1, 1, -8]])
  g = RatVector.of([8, 0, 1])
  assert A.apply(g).is_zero()
  nk = normalize_kernel_direction(A, g)
  assert nk.generator == RatVector.of([1, 1, 0])
  assert nk.support_size == 2
  assert nk.matrix.apply(nk.generator).is_zero()


def test_normalize_kernel_direction_negative_entries():
  A = RatMatrix.of([[1, -1], [1, -1]])
  nk = normalize_kernel_direction(A, RatVector.of([-1, -1]))
  assert nk.generator == RatVector.of([1, 1])
  assert nk.frame.diag == (Fraction(-1), Fraction(-1))


def test_normalize_kernel_direction_rejects_non_kernel_vectors():
  with pytest.raises(ValueError):
    normalize_kernel_direction(golden_3x3(), RatVector.of([1, 0, 0]))


def test_condition_chain_on_golden_direction():
  A = golden_3x3()
  V = gram_image(A)
  profile = DirectionProfile.from_vector(RatVector.of([1, 1, 1]))
  rep = condition_chain(A, profile, V, "S")
  assert rep.satisfied
  assert rep.depth == 1
  u = RatVector.of(rep.stages[0].solution)
  assert A.apply(u) == -RatVector.of([1, 1, 1])


def test_condition_chain_infeasible_direction():
  # the identity kills no cube, so the chain must fail at its first equation
  A = RatMatrix.identity(3)
  V = gram_image(A)
  profile = DirectionProfile.from_vector(RatVector.of([1, 1, 1]))
  rep = condition_chain(A, profile, V, "S")
  assert not rep.satisfied


def test_condition_chain_solvability_skeleton_is_implied_by_full_set():
  # sampled family members all satisfy the full condition set, so the weaker
  # solvability-only variant has to come back satisfied on every one of them
  rng = random.Random(9)
  checked = 0
  profile = DirectionProfile.from_vector(RatVector.of([1, 1, 1]))
  while checked < 20:
    try:
      p = Family3x3Params.from_free(
        Fraction(rng.randint(-6, 6), rng.choice([1, 2, 3])),
        Fraction(rng.randint(-6, 6), rng.choice([1, 2, 3])),
        Fraction(rng.randint(-6, 6), rng.choice([1, 2, 3])),
        Fraction(rng.randint(-6, 6), rng.choice([1, 2, 3])))
    except ValueError:
      continue
    A = forge_3x3(p)
    V = gram_image(A)
    rep_s = condition_chain(A, profile, V, "S")
    if not rep_s.satisfied:
      continue
    rep_n = condition_chain(A, profile, V, "N")
    assert rep_n.satisfied
    checked += 1


def test_certify_golden_is_non_proper_with_validated_recipe():
  A = golden_3x3()
  cert = certify(A)
  assert cert.verdict == NONPROPER
  assert cert.reason == "escape-direction"
  assert verify_certificate(A, cert)


def test_certify_undecided_fixture():
  A = RatMatrix.of(UNDECIDED_FIXTURE)
  assert A.m - rank(A) == 1
  g = kernel_basis(A).basis[0]
  cert = certify(A)
  assert cert.verdict == UNDECIDED
  assert cert.reason == "outside-decidable-screens"
  assert not cert.decided
  # undecided certificates claim nothing, so there is nothing to verify
  assert not verify_certificate(A, cert)


def test_certify_small_dimensions_always_decide():
  rng = random.Random(21)
  for trial in range(40):
    m = rng.choice([1, 2])
    A = rand_int_matrix(rng, m, box=5)
    cert = certify(A)
    assert cert.verdict == PROPER


def test_certify_verdicts_survive_diagonal_conjugation():
  rng = random.Random(23)
  for trial in range(25):
    m = rng.choice([2, 3])
    A = rand_int_matrix(rng, m)
    d = [Fraction(rng.choice([1, 2, 3, -1, -2]), rng.choice([1, 2]))
         for _ in range(m)]
    D = RatMatrix.diagonal(d)
    Dinv3 = RatMatrix.diagonal([1 / t ** 3 for t in d])
    B = D.matmul(A).matmul(Dinv3)
    ca, cb = certify(A), certify(B)
    if ca.decided and cb.decided:
      assert ca.verdict == cb.verdict


def test_verify_certificate_all_proper_reason_codes():
  for rows in ([[2, 1], [1, 1]],            # kernel-in-gram-kernel
               [[1, 2], [1, 2]],            # gram-rank-1
               [[0, 1], [0, 0]]):           # gram-rank-1 beats triangular here
    A = RatMatrix.of(rows)
    cert = certify(A)
    assert cert.verdict == PROPER
    assert verify_certificate(A, cert)
  S = shift_5x5()
  assert verify_certificate(S, certify(S))


def test_verify_certificate_rejects_matrix_swap():
  A = golden_3x3()
  cert = certify(A)
  other = RatMatrix.identity(3)
  assert not verify_certificate(other, cert)


def test_corank1_is_decisive_on_all_ones_kernels():
  rng = random.Random(31)
  for trial in range(30):
    A = ones_kernel_sample(rng, rng.choice([3, 4]))
    cert = corank1_decide(A)
    assert cert.verdict in (PROPER, NONPROPER)
    assert verify_certificate(A, cert)


def test_kernel_cuberoot_candidates_identity_has_none():
  cands, complete = kernel_cuberoot_candidates(RatMatrix.identity(3))
  assert cands == []
  assert complete


def test_kernel_cuberoot_candidates_golden_contains_ones():
  cands, complete = kernel_cuberoot_candidates(golden_3x3())
  assert complete
  assert RatVector.of([1, 1, 1]) in cands


def test_certificate_audit_records_the_pipeline():
  cert = certify(golden_3x3())
  steps = [a.step for a in cert.audit]
  assert "escape-search" in steps
  assert cert.audit[0].outcome in ("candidate", "provably empty", "nothing found")
