"""Decision engine: certify properness or non-properness of x + (Ax)^3.

The map F(x) = x + (Ax)^3 built from a square rational matrix A is proper
exactly when its companion G(x) = x + A(x^3), restricted to the image of
A A^T, is proper.  Every decision this module makes goes through that
reduction.  A certificate records the verdict, the decisive reason, exact
evidence, and an audit trail of everything that was tried.

Proper certificates come from structural screens (kernel conditions, Gram
rank, triangularity, a nonnegative pairing, a blocked kernel line) or from
exhausting all escape directions.  NonProper certificates carry a witness
recipe whose escape points can be generated and validated independently.

All decisive arithmetic is exact over the rationals.  Floats appear only
in clearly flagged numeric fallbacks, which can support a NonProper claim
(with a "-numeric" reason suffix) but never a Proper one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .hadamard import (
  cube_root_classes,
  cube_root_in_subspace,
  hpow,
  hprod,
  rational_cube_root_direction,
  rational_kth_root,
  rational_kth_root_approx,
)
from .linalg import (
  RatMatrix,
  RatVector,
  Subspace,
  as_rat,
  image_basis,
  intersect,
  kernel_basis,
  primitive_integer_vector,
  rank,
  solve,
  solve_affine_in_subspace,
  subspace_image,
)
from .recipes import ConjugationFrame, WitnessRecipe

PROPER = "Proper"
NONPROPER = "NonProper"
UNDECIDED = "Undecided"

# reasons for Proper verdicts
REASON_KERNEL_GRAM = "kernel-in-gram-kernel"
REASON_GRAM_RANK1 = "gram-rank-1"
REASON_TRIANGULAR = "triangular"
REASON_PAIRING = "nonneg-pairing"
REASON_KERNEL_LINE = "kernel-line-blocked"
REASON_CHAIN_UNSAT = "escape-chain-unsat"
REASON_NO_ESCAPE = "no-escape-direction"

# reasons for NonProper verdicts
REASON_ESCAPE = "escape-direction"
REASON_CHAIN = "escape-chain"

# numeric fallbacks append this suffix
NUMERIC_SUFFIX = "-numeric"

# Undecided
REASON_OUT_OF_SCOPE = "outside-decidable-screens"

# linear case k = 1
REASON_LINEAR_INVERTIBLE = "linear-map-invertible"
REASON_LINEAR_SINGULAR = "linear-map-singular"

FLOAT_TOL = 1e-9


@dataclass(frozen=True)
class AuditEntry:
  """One step of the decision pipeline: what ran and what it concluded."""

  step: str
  outcome: str
  detail: str = ""


@dataclass(frozen=True)
class Certificate:
  verdict: str
  reason: str
  matrix: RatMatrix
  k: int = 3
  evidence: dict = field(default_factory=dict)
  audit: tuple[AuditEntry, ...] = ()

  def __post_init__(self):
    if self.verdict not in (PROPER, NONPROPER, UNDECIDED):
      raise ValueError(f"unknown verdict {self.verdict!r}")

  @property
  def decided(self) -> bool:
    return self.verdict != UNDECIDED

  def witness(self) -> WitnessRecipe | None:
    recipe = self.evidence.get("recipe")
    return recipe if isinstance(recipe, WitnessRecipe) else None


@dataclass(frozen=True)
class DirectionProfile:
  """A candidate limit direction, with its zero pattern made explicit."""

  x_inf: RatVector
  support: tuple[int, ...]
  normalized: bool

  @staticmethod
  def from_vector(v: RatVector) -> "DirectionProfile":
    supp = v.support()
    if not supp:
      raise ValueError("direction must be nonzero")
    return DirectionProfile(
      x_inf=v,
      support=supp,
      normalized=all(v[i] == 1 for i in supp),
    )


@dataclass(frozen=True)
class ChainStage:
  """One solve of the escape chain, with the memberships it had to satisfy."""

  index: int
  block: tuple[int, ...]
  target: tuple
  solution: tuple
  numeric: bool
  extrapolated: bool
  memberships: tuple[tuple[str, bool], ...] = ()


@dataclass(frozen=True)
class ConditionSetReport:
  """Outcome of the recursive escape-chain conditions for one direction."""

  mode: str                  # "N" (solvability skeleton) or "S" (full set)
  x_inf: RatVector
  satisfied: bool
  stages: tuple[ChainStage, ...]
  failure: str | None = None
  numeric_only: bool = False
  extrapolated: bool = False

  @property
  def depth(self) -> int:
    return len(self.stages)


@dataclass(frozen=True)
class EscapeSearch:
  """Result of looking for x with Ax != 0 and A((Ax)^3) = 0, x in Im(A^T).

  ``none_is_proof`` is True when the absence of a candidate is an exact
  theorem about A rather than the failure of a bounded search.
  """

  candidate: RatVector | None
  image_vector: RatVector | None
  none_is_proof: bool
  note: str = ""


@dataclass(frozen=True)
class NormalizedKernel:
  """Corank-one matrix rewritten so a kernel vector is a 0/1 pattern."""

  matrix: RatMatrix
  frame: ConjugationFrame
  generator: RatVector
  support_size: int


def gram_image(A: RatMatrix) -> Subspace:
  """Image of A A^T, the subspace the properness question reduces to."""
  return image_basis(A.gram())


def _row_space(A: RatMatrix) -> Subspace:
  return image_basis(A.transpose())


def _indicator_matrix(m: int, indices) -> RatMatrix:
  idx = set(indices)
  return RatMatrix.diagonal([Fraction(1) if i in idx else Fraction(0)
                             for i in range(m)])


def _restrict(v: RatVector, indices) -> RatVector:
  idx = set(indices)
  return RatVector.of([v[i] if i in idx else Fraction(0) for i in range(len(v))])


def _repair_solution(u0: RatVector, kernel: Subspace,
                     conditions: list[tuple[RatMatrix, Subspace]]) -> RatVector | None:
  """Adjust u0 by a kernel vector so that L u lands in W for every (L, W).

  The solution set of the original linear system is u0 + Ker; each
  membership constraint is linear, so feasibility is one joint solve over
  the kernel coefficients and the target-subspace coordinates.
  """
  if not conditions:
    return u0
  if kernel.dim == 0:
    for L, W in conditions:
      if not W.contains(L.apply(u0)):
        return None
    return u0
  kdim = kernel.dim
  ncols = kdim + sum(W.dim for _, W in conditions)
  rows: list[tuple[Fraction, ...]] = []
  rhs: list[Fraction] = []
  col_offset = kdim
  for L, W in conditions:
    Lu0 = L.apply(u0)
    LK = [L.apply(b) for b in kernel.basis]
    for i in range(L.n_rows):
      row = [Fraction(0)] * ncols
      for t in range(kdim):
        row[t] = LK[t][i]
      for s in range(W.dim):
        row[col_offset + s] = -W.basis[s][i]
      rows.append(tuple(row))
      rhs.append(-Lu0[i])
    col_offset += W.dim
  sol = solve(RatMatrix(tuple(rows)), RatVector.of(rhs))
  if sol is None:
    return None
  adjusted = u0
  for t in range(kdim):
    adjusted = adjusted + kernel.basis[t].scale(sol[t])
  return adjusted


def _solve_preferring_zero_tail(u0: RatVector, kernel: Subspace,
                                conditions: list[tuple[RatMatrix, Subspace]],
                                tail_indices) -> RatVector | None:
  """Like _repair_solution, but first try to also zero out a tail block.

  The chain conditions quantify over all solutions of each linear solve;
  a solution whose next tail vanishes ends the recursion, so it is
  preferred whenever one exists.
  """
  tail = list(tail_indices)
  if tail:
    m = len(u0)
    zero_tail = (_indicator_matrix(m, tail), Subspace.zero(m))
    attempt = _repair_solution(u0, kernel, conditions + [zero_tail])
    if attempt is not None:
      return attempt
  return _repair_solution(u0, kernel, conditions)


def _coeff_enumeration(dim: int, box: int = 3, cap: int = 3000) -> list[tuple[int, ...]]:
  """Small integer coefficient tuples, primitive and sign-normalized."""
  from itertools import combinations, product
  from math import gcd

  seen: set[tuple[int, ...]] = set()
  out: list[tuple[int, ...]] = []

  def push(c):
    if all(x == 0 for x in c):
      return
    g = 0
    for x in c:
      g = gcd(g, abs(x))
    c = tuple(x // g for x in c)
    for x in c:
      if x != 0:
        if x < 0:
          c = tuple(-y for y in c)
        break
    if c not in seen:
      seen.add(c)
      out.append(c)

  if (2 * box + 1) ** dim <= cap:
    for c in product(range(-box, box + 1), repeat=dim):
      push(c)
    return out
  for i in range(dim):
    for a in range(1, box + 1):
      c = [0] * dim
      c[i] = a
      push(tuple(c))
  for i, j in combinations(range(dim), 2):
    for a in range(-box, box + 1):
      for b in range(1, box + 1):
        c = [0] * dim
        c[i], c[j] = a, b
        push(tuple(c))
  if dim <= 8:
    for signs in product((1, -1), repeat=dim):
      push(signs)
  else:
    push(tuple([1] * dim))
  return out


def _ordered_candidates(basis_vectors: list[RatVector], box: int = 3,
                        cap: int = 400) -> list[RatVector]:
  """Nonzero rational combinations, widest support first, small first."""
  if not basis_vectors:
    return []
  combos = _coeff_enumeration(len(basis_vectors), box=box)
  scored = []
  seen = set()
  for c in combos:
    v = RatVector.zero(len(basis_vectors[0]))
    for coef, b in zip(c, basis_vectors):
      if coef:
        v = v + b.scale(Fraction(coef))
    if v.is_zero():
      continue
    key = tuple(primitive_integer_vector(v).entries)
    if key in seen:
      continue
    seen.add(key)
    mixed = 1 if any(x < 0 for x in c) else 0
    scored.append((-len(v.support()), sum(abs(x) for x in c), mixed, c, v))
  scored.sort(key=lambda t: (t[0], t[1], t[2], t[3]))
  return [v for *_, v in scored[:cap]]


def _disjoint_supports(vectors) -> bool:
  seen: set[int] = set()
  for v in vectors:
    s = set(v.support())
    if seen & s:
      return False
    seen |= s
  return True


def necessary_escape_search(A: RatMatrix) -> EscapeSearch:
  """Look for x in the row space with Ax != 0 and A((Ax)^3) = 0.

  Any unbounded sequence with bounded images has, after normalization, a
  limit direction y = Ax of this kind, so when provably none exists the
  map is proper outright.  Emptiness is proved exactly for invertible
  matrices, corank one (through cube-ratio classes, even when the cube
  root is irrational), and kernels with a disjoint-support basis of
  rational cube-root directions.
  """
  m = A.m
  if rank(A) == m:
    return EscapeSearch(None, None, True,
                        "matrix invertible: only Ax = 0 solves A((Ax)^3) = 0")
  K = kernel_basis(A)
  Im = image_basis(A)
  rowspace = _row_space(A)

  def found(y: RatVector) -> EscapeSearch:
    x = solve_affine_in_subspace(A, y, rowspace)
    if x is None:
      raise AssertionError("image vector without row-space preimage")
    return EscapeSearch(x, y, True, "candidate found")

  basis = list(K.basis)
  directions = [rational_cube_root_direction(b) for b in basis]
  if _disjoint_supports(basis) and all(d is not None for d in directions):
    # cube roots act per coordinate, so with disjoint supports every cube
    # root of a kernel vector is a combination of the per-vector roots
    roots = Subspace.span(directions, m)
    meet = intersect(roots, Im)
    if meet.dim == 0:
      return EscapeSearch(None, None, True,
                          "no cube root of a kernel vector lies in the image")
    for y in _ordered_candidates(list(meet.basis)):
      return found(y)
  if K.dim == 1:
    g = primitive_integer_vector(K.basis[0])
    if not cube_root_in_subspace(g, Im):
      return EscapeSearch(None, None, True,
                          "kernel-line cube root avoids the image")
    d = rational_cube_root_direction(g)
    if d is not None:
      return found(d)
    return EscapeSearch(None, None, False,
                        "an escape image vector exists but is irrational")
  for w in _ordered_candidates(basis):
    d = rational_cube_root_direction(w)
    if d is None:
      continue
    x = solve_affine_in_subspace(A, d, rowspace)
    if x is not None:
      return EscapeSearch(x, d, True, "candidate found")
  note = "bounded search over rational directions found nothing"
  hint = _float_escape_probe(A, K, Im)
  if hint:
    note += "; " + hint
  return EscapeSearch(None, None, False, note)


def _float_escape_probe(A: RatMatrix, K: Subspace, Im: Subspace,
                        samples: int = 300, seed: int = 7) -> str:
  """Cheap float scan for irrational escape image vectors, note only."""
  if K.dim == 0 or Im.dim == 0:
    return ""
  import numpy as np
  rng = np.random.default_rng(seed)
  kb = np.array([[float(x) for x in b] for b in K.basis]).T
  ib = np.array([[float(x) for x in b] for b in Im.basis]).T
  q, _ = np.linalg.qr(ib)
  best = float("inf")
  for _ in range(samples):
    c = rng.uniform(-1.0, 1.0, K.dim)
    w = kb @ c
    if np.linalg.norm(w) < 1e-12:
      continue
    y = np.cbrt(w)
    y /= np.linalg.norm(y)
    resid = np.linalg.norm(y - q @ (q.T @ y))
    best = min(best, float(resid))
  if best < 1e-7:
    return "a float scan suggests an irrational escape direction may exist"
  return ""


def _kernel_in_gram_kernel(A: RatMatrix) -> bool:
  G = A.gram()
  return all(G.apply(b).is_zero() for b in kernel_basis(A).basis)


def sufficient_screens(A: RatMatrix, zeta: RatVector | None = None
                       ) -> tuple[Certificate | None, list[AuditEntry]]:
  """Structural conditions, each alone implying properness, tried in order.

  The screens: every kernel vector of A also kills A A^T (which covers
  invertible, symmetric and antisymmetric matrices); A A^T has rank one;
  A is triangular; a user-supplied positive weight zeta makes the pairing
  <A(x^3), zeta*x> nonnegative on the reduced subspace (certified exactly
  only when that subspace is a line); the kernel is the all-ones line and
  the ones vector misses the reduced subspace or its image.
  """
  audit: list[AuditEntry] = []

  if _kernel_in_gram_kernel(A):
    kdim = kernel_basis(A).dim
    detail = ("matrix invertible" if kdim == 0 else
              f"all {kdim} kernel direction(s) also kill the Gram matrix")
    audit.append(AuditEntry("screen:kernel-in-gram-kernel", "fires", detail))
    cert = Certificate(PROPER, REASON_KERNEL_GRAM, A,
                       evidence={"kernel_dim": kdim, "note": detail})
    return cert, audit
  audit.append(AuditEntry("screen:kernel-in-gram-kernel", "no"))

  if rank(A.gram()) == 1:
    audit.append(AuditEntry("screen:gram-rank-1", "fires"))
    cert = Certificate(PROPER, REASON_GRAM_RANK1, A,
                       evidence={"gram_rank": 1})
    return cert, audit
  audit.append(AuditEntry("screen:gram-rank-1", "no"))

  if A.is_upper_triangular() or A.is_lower_triangular():
    orientation = "upper" if A.is_upper_triangular() else "lower"
    audit.append(AuditEntry("screen:triangular", "fires", orientation))
    cert = Certificate(PROPER, REASON_TRIANGULAR, A,
                       evidence={"orientation": orientation})
    return cert, audit
  audit.append(AuditEntry("screen:triangular", "no"))

  if zeta is not None:
    cert = _zeta_screen(A, zeta, audit)
    if cert is not None:
      return cert, audit

  cert = _ones_kernel_screen(A, audit)
  if cert is not None:
    return cert, audit
  return None, audit


def _zeta_screen(A: RatMatrix, zeta: RatVector,
                 audit: list[AuditEntry]) -> Certificate | None:
  if any(z <= 0 for z in zeta):
    raise ValueError("pairing weight zeta must be positive in every coordinate")
  V = gram_image(A)
  if V.dim == 1:
    b = V.basis[0]
    # sign of <A((tb)^3), zeta*(tb)> is the sign of t^4 <A(b^3), zeta*b>
    val = A.apply(hpow(b, 3)).dot(hprod(zeta, b))
    if val >= 0:
      audit.append(AuditEntry("screen:nonneg-pairing", "fires",
                              f"pairing value {val} on the generating line"))
      return Certificate(PROPER, REASON_PAIRING, A,
                         evidence={"zeta": zeta, "basis_vector": b,
                                   "pairing_value": val})
    audit.append(AuditEntry("screen:nonneg-pairing", "no",
                            f"pairing is negative ({val}) on the line"))
    return None
  violation = nonneg_pairing_falsifier(A, zeta)
  if violation is not None:
    audit.append(AuditEntry("screen:nonneg-pairing", "refuted",
                            "sampling found a negative pairing value"))
  else:
    audit.append(AuditEntry(
      "screen:nonneg-pairing", "inconclusive",
      "no violation sampled, but certification needs a one-dimensional "
      "reduced subspace"))
  return None


def nonneg_pairing_falsifier(A: RatMatrix, zeta: RatVector,
                             samples: int = 200, seed: int = 0
                             ) -> tuple[float, ...] | None:
  """Sample the reduced subspace for <A(x^3), zeta*x> < 0; None if unseen."""
  if any(z <= 0 for z in zeta):
    raise ValueError("pairing weight zeta must be positive in every coordinate")
  V = gram_image(A)
  if V.dim == 0:
    return None
  import numpy as np
  rng = np.random.default_rng(seed)
  basis = np.array([[float(x) for x in b] for b in V.basis]).T
  Af = np.array([[float(A.entry(i, j)) for j in range(A.m)] for i in range(A.m)])
  zf = np.array([float(z) for z in zeta])
  for _ in range(samples):
    c = rng.uniform(-1.0, 1.0, V.dim)
    x = basis @ c
    nx = np.linalg.norm(x)
    if nx < 1e-12:
      continue
    x /= nx
    val = float((Af @ (x ** 3)) @ (zf * x))
    if val < -1e-9:
      return tuple(float(t) for t in x)
  return None


def _ones_kernel_screen(A: RatMatrix, audit: list[AuditEntry]) -> Certificate | None:
  K = kernel_basis(A)
  if K.dim != 1:
    audit.append(AuditEntry("screen:kernel-line-blocked", "skipped",
                            "kernel is not a line"))
    return None
  g = primitive_integer_vector(K.basis[0])
  if any(x != 1 for x in g):
    audit.append(AuditEntry("screen:kernel-line-blocked", "skipped",
                            "kernel line is not the all-ones direction"))
    return None
  V = gram_image(A)
  in_V = V.contains(g)
  in_AV = solve_affine_in_subspace(A, g, V) is not None
  if not (in_V and in_AV):
    which = ("the reduced subspace" if not in_V
             else "the image of the reduced subspace")
    audit.append(AuditEntry("screen:kernel-line-blocked", "fires",
                            f"all-ones direction misses {which}"))
    return Certificate(PROPER, REASON_KERNEL_LINE, A,
                       evidence={"generator": g,
                                 "in_reduced_subspace": in_V,
                                 "reachable_from_reduced_subspace": in_AV})
  audit.append(AuditEntry("screen:kernel-line-blocked", "no",
                          "all-ones direction reaches the reduced subspace "
                          "and its image"))
  return None


def escape_direction_check(A: RatMatrix, V: Subspace, x_inf: RatVector
                           ) -> tuple[bool, RatVector | None, str]:
  """Full characterization for a limit direction with no zero coordinate.

  Inside the subspace V the direction x_inf escapes (unbounded points with
  bounded images under x + A(x^3)) exactly when A(x_inf^3) = 0 and -x_inf
  has a preimage u inside V * x_inf^2.  Returns (satisfied, u, note).
  """
  if any(a == 0 for a in x_inf):
    raise ValueError("direction has zero coordinates: use condition_chain")
  if not A.apply(hpow(x_inf, 3)).is_zero():
    return False, None, "x_inf^3 is not in the kernel"
  scaled = Subspace.span([hprod(b, hpow(x_inf, 2)) for b in V.basis],
                         V.ambient_dim)
  u = solve_affine_in_subspace(A, -x_inf, scaled)
  if u is None:
    return False, None, "-x_inf has no preimage in V * x_inf^2"
  return True, u, "escape direction confirmed"


def normalize_kernel_direction(A: RatMatrix, g: RatVector) -> NormalizedKernel:
  """Conjugate A so the kernel vector g becomes a leading 0/1 pattern.

  Every entry of g must be the cube of a rational; the diagonal scaling
  divides coordinate i by that cube root, and coordinates are permuted to
  put the support first.  The conjugated matrix has the same properness
  status as A.
  """
  m = A.m
  if len(g) != m:
    raise ValueError("kernel vector dimension does not match the matrix")
  if g.is_zero():
    raise ValueError("kernel direction must be nonzero")
  if not A.apply(g).is_zero():
    raise ValueError("vector is not in the kernel")
  roots: list[Fraction] = []
  for i, a in enumerate(g):
    if a == 0:
      roots.append(Fraction(1))
      continue
    r = rational_kth_root(a, 3)
    if r is None:
      raise ValueError(
        f"coordinate {i} ({a}) is not a rational cube; this kernel "
        "direction cannot be normalized exactly")
    roots.append(r)
  support = list(g.support())
  others = [i for i in range(m) if i not in set(support)]
  perm = tuple(support + others)
  diag = tuple(Fraction(1) / roots[i] if g[i] != 0 else Fraction(1)
               for i in range(m))
  frame = ConjugationFrame(perm=perm, diag=diag)
  B = frame.conjugate(A)
  gen = RatVector.of([1] * len(support) + [0] * len(others))
  if not B.apply(gen).is_zero():
    raise AssertionError("normalization lost the kernel direction")
  return NormalizedKernel(matrix=B, frame=frame, generator=gen,
                          support_size=len(support))


class _FloatChain:
  """Float-mode continuation of an escape chain once exact roots run out."""

  def __init__(self, A: RatMatrix, V: Subspace, pr_V: Subspace):
    import numpy as np
    self.np = np
    self.A = np.array([[float(A.entry(i, j)) for j in range(A.m)]
                       for i in range(A.m)])
    self.m = A.m
    self.q = self._orthobasis(V)
    self.q_pr = self._orthobasis(pr_V)

  def _orthobasis(self, s: Subspace):
    np = self.np
    if s.dim == 0:
      return np.zeros((self.m, 0))
    basis = np.array([[float(x) for x in b] for b in s.basis]).T
    q, _ = np.linalg.qr(basis)
    return q

  def solve(self, b):
    np = self.np
    x, *_ = np.linalg.lstsq(self.A, b, rcond=None)
    ok = np.linalg.norm(self.A @ x - b) <= FLOAT_TOL * max(1.0, float(np.linalg.norm(b)))
    return (x, True) if ok else (None, False)

  def contains(self, q, v) -> bool:
    np = self.np
    n = float(np.linalg.norm(v))
    if n < 1e-14:
      return True
    proj = q @ (q.T @ v)
    return bool(np.linalg.norm(v - proj) <= FLOAT_TOL * max(1.0, n))


def condition_chain(A: RatMatrix, profile: DirectionProfile | RatVector,
                    V: Subspace, mode: str = "S") -> ConditionSetReport:
  """Recursive escape-chain conditions for a 0/1 limit direction.

  Mode "S" checks the full condition set: solvability of each stage plus
  the memberships in V and in its projection to the support, quantified
  over the whole solution family of every solve (kernel adjustments).
  Mode "N" checks only the solvability skeleton.

  Stage zero solves A u = -x_inf.  While the current solution has nonzero
  entries on the remaining off-support block, the chain takes the cube
  root of that hat part, requires it to lie in V (mode S), solves for the
  next vector against its negative, and recurses on the zero sub-block.
  Solutions whose next tail vanishes are preferred, ending the recursion.

  Stages beyond the two displayed solves are flagged extrapolated.  When a
  needed cube root is irrational the chain switches to floats and the
  report is flagged numeric.
  """
  if mode not in ("N", "S"):
    raise ValueError("mode must be 'N' or 'S'")
  if isinstance(profile, RatVector):
    profile = DirectionProfile.from_vector(profile)
  if not profile.normalized:
    raise ValueError("condition_chain needs a 0/1 direction; normalize first")
  x_inf = profile.x_inf
  m = len(x_inf)
  support = set(profile.support)
  pr = _indicator_matrix(m, support)
  pr_V = subspace_image(pr, V)
  K = kernel_basis(A)
  off_support = [i for i in range(m) if i not in support]
  stages: list[ChainStage] = []

  def report(satisfied, failure=None, numeric=False, extrapolated=False):
    return ConditionSetReport(mode=mode, x_inf=x_inf, satisfied=satisfied,
                              stages=tuple(stages), failure=failure,
                              numeric_only=numeric, extrapolated=extrapolated)

  if not A.apply(x_inf).is_zero():
    return report(False, "x_inf^3 is not in the kernel")
  if mode == "S" and not V.contains(x_inf):
    return report(False, "x_inf is not in the reduced subspace")

  u0 = solve(A, -x_inf)
  if u0 is None:
    return report(False, "-x_inf has no preimage")
  conditions0 = [(pr, pr_V)] if mode == "S" else []
  u = _solve_preferring_zero_tail(u0, K, conditions0, off_support)
  if u is None:
    return report(False, "no preimage of -x_inf has its support part in pr(V)")
  memberships0 = ((("support part of u in pr(V)", True),) if mode == "S" else ())
  stages.append(ChainStage(0, tuple(sorted(support)), tuple((-x_inf).entries),
                           tuple(u.entries), False, False, memberships0))

  block = off_support
  current: object = u
  numeric = False
  fchain: _FloatChain | None = None
  extrapolated = False
  index = 0

  while True:
    index += 1
    if index > m + 2:
      return report(False, "chain exceeded the dimension bound",
                    numeric, extrapolated)
    if numeric:
      hat = [current[i] if i in set(block) else 0.0 for i in range(m)]
      if max(abs(h) for h in hat) <= FLOAT_TOL:
        return report(True, None, True, extrapolated)
      nz = [i for i in block if abs(hat[i]) > FLOAT_TOL]
    else:
      hat_vec = _restrict(current, block)
      if hat_vec.is_zero():
        return report(True, None, numeric, extrapolated)
      nz = [i for i in block if hat_vec[i] != 0]
    zz = [i for i in block if i not in set(nz)]
    if index >= 2:
      extrapolated = True

    if not numeric:
      root_entries: list[Fraction] | None = []
      for i in range(m):
        if i in set(nz):
          r = rational_kth_root(hat_vec[i], 3)
          if r is None:
            root_entries = None
            break
          assert root_entries is not None
          root_entries.append(r)
        else:
          root_entries.append(Fraction(0))
      if root_entries is None:
        numeric = True
        fchain = _FloatChain(A, V, pr_V)
        current = [float(x) for x in current.entries]
        hat = [current[i] if i in set(block) else 0.0 for i in range(m)]

    if numeric:
      assert fchain is not None
      np = fchain.np
      root_f = np.array([float(np.cbrt(hat[i])) if i in set(nz) else 0.0
                         for i in range(m)])
      mems: list[tuple[str, bool]] = []
      if mode == "S":
        ok_root = fchain.contains(fchain.q, root_f)
        mems.append(("cube root of hat in V", ok_root))
        if not ok_root:
          return report(False, "cube root of the hat vector leaves V",
                        True, extrapolated)
      vsol, ok = fchain.solve(-root_f)
      if not ok:
        return report(False, "hat cube root has no preimage", True, extrapolated)
      if mode == "S":
        paired = np.array([vsol[i] / root_f[i] ** 2 if i in set(nz) else 0.0
                           for i in range(m)])
        ok_pair = fchain.contains(fchain.q, paired)
        mems.append(("paired part of v in V", ok_pair))
        prv = np.array([vsol[i] if i in support else 0.0 for i in range(m)])
        ok_pr = fchain.contains(fchain.q_pr, prv)
        mems.append(("support part of v in pr(V)", ok_pr))
        if not (ok_pair and ok_pr):
          return report(False, "second-stage membership failed numerically",
                        True, extrapolated)
      stages.append(ChainStage(index, tuple(nz), tuple(float(t) for t in root_f),
                               tuple(float(t) for t in vsol), True,
                               extrapolated, tuple(mems)))
      if not zz:
        return report(True, None, True, extrapolated)
      tail = [vsol[i] if i in set(zz) else 0.0 for i in range(m)]
      if max(abs(t) for t in tail) <= FLOAT_TOL:
        return report(True, None, True, extrapolated)
      current = [float(t) for t in vsol]
      block = zz
      continue

    root = RatVector.of(root_entries)
    mems = []
    if mode == "S":
      ok_root = V.contains(root)
      mems.append(("cube root of hat in V", ok_root))
      if not ok_root:
        return report(False, "cube root of the hat vector leaves V",
                      numeric, extrapolated)
    v0 = solve(A, -root)
    if v0 is None:
      return report(False, "hat cube root has no preimage", numeric, extrapolated)
    if mode == "S":
      pair_mat = RatMatrix.diagonal(
        [Fraction(1) / root[i] ** 2 if i in set(nz) else Fraction(0)
         for i in range(m)])
      vsol = _solve_preferring_zero_tail(v0, K, [(pair_mat, V), (pr, pr_V)], zz)
      if vsol is None:
        return report(False, "no preimage satisfies the pairing and support "
                      "memberships", numeric, extrapolated)
      mems.append(("paired part of v in V", True))
      mems.append(("support part of v in pr(V)", True))
    else:
      vsol = _solve_preferring_zero_tail(v0, K, [], zz)
      assert vsol is not None
    stages.append(ChainStage(index, tuple(nz), tuple(root.entries),
                             tuple(vsol.entries), False, extrapolated,
                             tuple(mems)))
    if not zz:
      return report(True, None, numeric, extrapolated)
    tail = _restrict(vsol, zz)
    if tail.is_zero():
      return report(True, None, numeric, extrapolated)
    current = vsol
    block = zz


def _lift_to_subspace(target: RatVector, pr: RatMatrix,
                      V: Subspace) -> RatVector | None:
  """Vector of V whose support part (under pr) equals pr(target)."""
  m = len(target)
  goal = pr.apply(target)
  if V.dim == 0:
    return RatVector.zero(m) if goal.is_zero() else None
  cols = [pr.apply(b) for b in V.basis]
  rows = tuple(tuple(cols[j][i] for j in range(V.dim)) for i in range(m))
  sol = solve(RatMatrix(rows), goal)
  if sol is None:
    return None
  out = RatVector.zero(m)
  for j in range(V.dim):
    out = out + V.basis[j].scale(sol[j])
  return out


def _chain_recipe(report: ConditionSetReport, V: Subspace,
                  frame: ConjugationFrame | None) -> WitnessRecipe | None:
  """Convert a satisfied depth <= 2 exact chain into a witness recipe."""
  if not report.satisfied or report.numeric_only or report.depth > 2:
    return None
  m = len(report.x_inf)
  support = set(report.x_inf.support())
  pr = _indicator_matrix(m, support)
  u = RatVector.of([as_rat(x) for x in report.stages[0].solution])
  u1 = _lift_to_subspace(u, pr, V)
  if u1 is None:
    return None
  if report.depth == 1:
    return WitnessRecipe(kind="corank-chain", x_inf=report.x_inf, u=u,
                         u1=u1, frame=frame)
  stage = report.stages[1]
  root = RatVector.of([as_rat(x) for x in stage.target])
  v = RatVector.of([as_rat(x) for x in stage.solution])
  v1 = _lift_to_subspace(v, pr, V)
  if v1 is None:
    return None
  return WitnessRecipe(kind="corank-chain", x_inf=report.x_inf, u=u, v=v,
                       u1=u1, v1=v1, u_hat_root=root, frame=frame)


def _numeric_chain_recipe(report: ConditionSetReport,
                          frame: ConjugationFrame | None) -> WitnessRecipe | None:
  """Float chain to a recipe with limited-denominator rational entries."""
  if not report.satisfied or report.depth > 2:
    return None

  def vec(values) -> RatVector:
    out = []
    for x in values:
      if isinstance(x, Fraction):
        out.append(x)
      elif isinstance(x, float):
        out.append(Fraction(x).limit_denominator(10 ** 12))
      else:
        out.append(as_rat(x))
    return RatVector.of(out)

  u = vec(report.stages[0].solution)
  if report.depth == 1:
    return WitnessRecipe(kind="corank-chain", x_inf=report.x_inf, u=u, u1=u,
                         frame=frame, numeric=True)
  stage = report.stages[1]
  return WitnessRecipe(kind="corank-chain", x_inf=report.x_inf, u=u,
                       v=vec(stage.solution), u1=u, v1=vec(stage.solution),
                       u_hat_root=vec(stage.target), frame=frame, numeric=True)


def corank1_decide(A: RatMatrix) -> Certificate:
  """Complete decision procedure when the kernel of A is one line.

  Whenever the cube root of the kernel direction is rational the verdict
  is exact and always reached: the fully supported case goes through the
  direct escape characterization, the patterned case through the chain
  conditions, both of which are equivalences.  Irrational directions get
  an exact blocking test, then a numeric fallback that can only refute.
  """
  K = kernel_basis(A)
  if K.dim != 1:
    raise ValueError("corank1_decide requires a matrix of corank exactly one")
  audit: list[AuditEntry] = []
  g = primitive_integer_vector(K.basis[0])
  V = gram_image(A)
  audit.append(AuditEntry("kernel-line", "found",
                          "primitive generator (" +
                          ", ".join(str(x) for x in g) + ")"))

  y = rational_cube_root_direction(g)
  if y is None:
    return _corank1_irrational(A, g, V, audit)

  if all(a != 0 for a in y):
    if not V.contains(y):
      audit.append(AuditEntry("membership", "fails",
                              "kernel cube root is outside the reduced subspace"))
      return Certificate(PROPER, REASON_KERNEL_LINE, A,
                         evidence={"generator": g, "direction": y,
                                   "failed": "direction not in reduced subspace"},
                         audit=tuple(audit))
    ok, u, note = escape_direction_check(A, V, y)
    if ok:
      audit.append(AuditEntry("escape-direction", "satisfied", note))
      recipe = WitnessRecipe(kind="simple", x_inf=y, u=u)
      return Certificate(NONPROPER, REASON_ESCAPE, A,
                         evidence={"recipe": recipe, "direction": y, "u": u},
                         audit=tuple(audit))
    audit.append(AuditEntry("escape-direction", "fails", note))
    return Certificate(PROPER, REASON_KERNEL_LINE, A,
                       evidence={"generator": g, "direction": y,
                                 "failed": note},
                       audit=tuple(audit))

  # zeros present: bring the direction to a 0/1 pattern, then run the chain
  if all(a in (0, 1) for a in y.entries):
    B, frame, x_pat, VB = A, None, y, V
  else:
    norm = normalize_kernel_direction(A, hpow(y, 3))
    B, frame, x_pat = norm.matrix, norm.frame, norm.generator
    VB = gram_image(B)
    audit.append(AuditEntry("normalize", "done",
                            f"support size {norm.support_size}"))
  rep = condition_chain(B, DirectionProfile.from_vector(x_pat), VB, "S")
  audit.append(AuditEntry("condition-chain",
                          "satisfied" if rep.satisfied else "unsatisfied",
                          rep.failure or f"depth {rep.depth}"))
  if rep.satisfied and not rep.numeric_only:
    recipe = _chain_recipe(rep, VB, frame)
    if recipe is not None:
      return Certificate(NONPROPER, REASON_CHAIN, A,
                         evidence={"recipe": recipe, "chain": rep},
                         audit=tuple(audit))
    audit.append(AuditEntry("witness", "unsupported",
                            f"chain depth {rep.depth} has no closed-form points"))
    return Certificate(UNDECIDED, REASON_OUT_OF_SCOPE, A,
                       evidence={"chain": rep}, audit=tuple(audit))
  if rep.satisfied and rep.numeric_only:
    recipe = _numeric_chain_recipe(rep, frame)
    if recipe is not None:
      return Certificate(NONPROPER, REASON_CHAIN + NUMERIC_SUFFIX, A,
                         evidence={"recipe": recipe, "chain": rep},
                         audit=tuple(audit))
    return Certificate(UNDECIDED, REASON_OUT_OF_SCOPE, A,
                       evidence={"chain": rep}, audit=tuple(audit))
  if rep.numeric_only:
    return Certificate(UNDECIDED, REASON_OUT_OF_SCOPE, A,
                       evidence={"chain": rep,
                                 "note": "numeric chain unsatisfied; properness "
                                 "cannot be certified from floats"},
                       audit=tuple(audit))
  return Certificate(PROPER, REASON_CHAIN_UNSAT, A,
                     evidence={"chain": rep}, audit=tuple(audit))


def _corank1_irrational(A: RatMatrix, g: RatVector, V: Subspace,
                        audit: list[AuditEntry]) -> Certificate:
  """Kernel direction with an irrational cube root: exact blocking test
  first, then a numeric escape check that can only refute."""
  if not cube_root_in_subspace(g, V):
    audit.append(AuditEntry("membership", "fails",
                            "irrational kernel cube root provably avoids the "
                            "reduced subspace"))
    return Certificate(PROPER, REASON_KERNEL_LINE, A,
                       evidence={"generator": g,
                                 "failed": "direction not in reduced subspace",
                                 "classes": len(cube_root_classes(g))},
                       audit=tuple(audit))
  audit.append(AuditEntry("membership", "holds",
                          "irrational kernel cube root lies in the reduced "
                          "subspace"))
  if any(x == 0 for x in g):
    return Certificate(UNDECIDED, REASON_OUT_OF_SCOPE, A,
                       evidence={"note": "irrational kernel direction with "
                                 "zeros is outside the decidable screens"},
                       audit=tuple(audit))
  # the true direction g^(1/3) is irrational: work with a rational stand-in
  # so close (10^-48) that the recipe's residuals keep decaying well past
  # the largest validation gamma
  x_tilde = RatVector.of([rational_kth_root_approx(a, 3) for a in g])
  cols = [hprod(b, hpow(x_tilde, 2)) for b in V.basis]
  M = RatMatrix(tuple(tuple(A.apply(col)[i] for col in cols)
                      for i in range(A.m)))
  # least squares in exact arithmetic: normal equations are always solvable
  Mt = M.transpose()
  c = solve(Mt.matmul(M), Mt.apply(-x_tilde))
  u = RatVector.zero(A.m)
  if c is not None:
    for j, col in enumerate(cols):
      u = u + col.scale(c[j])
  resid = A.apply(u) + x_tilde
  resid_norm = math.sqrt(sum(float(t) * float(t) for t in resid))
  scale = math.sqrt(sum(float(t) * float(t) for t in x_tilde))
  if c is not None and resid_norm <= FLOAT_TOL * max(1.0, scale):
    recipe = WitnessRecipe(kind="simple", x_inf=x_tilde, u=u, numeric=True)
    audit.append(AuditEntry("escape-direction", "satisfied numerically",
                            f"residual {resid_norm:.2e}"))
    return Certificate(NONPROPER, REASON_ESCAPE + NUMERIC_SUFFIX, A,
                       evidence={"recipe": recipe}, audit=tuple(audit))
  audit.append(AuditEntry("escape-direction", "unsatisfied numerically",
                          f"residual {resid_norm:.2e}"))
  return Certificate(UNDECIDED, REASON_OUT_OF_SCOPE, A,
                     evidence={"note": "irrational direction; the numeric test "
                               "found no escape but cannot prove properness"},
                     audit=tuple(audit))


def kernel_cuberoot_candidates(A: RatMatrix, box: int = 3, cap: int = 400
                               ) -> tuple[list[RatVector], bool]:
  """Rational directions y with y^3 in Ker(A), plus a completeness flag.

  The flag is True only when the list provably exhausts all candidate
  lines: trivial kernels, and corank one whose generator has a rational
  cube-root direction.
  """
  K = kernel_basis(A)
  if K.dim == 0:
    return [], True
  found: list[RatVector] = []
  seen: set[tuple] = set()
  for w in _ordered_candidates(list(K.basis), box=box, cap=cap * 4):
    y = rational_cube_root_direction(w)
    if y is None:
      continue
    key = tuple(primitive_integer_vector(y).entries)
    if key in seen:
      continue
    seen.add(key)
    found.append(y)
    if len(found) >= cap:
      break
  found.sort(key=lambda v: (-len(v.support()),
                            sum(abs(x) for x in v.entries)))
  complete = (K.dim == 1 and
              rational_cube_root_direction(
                primitive_integer_vector(K.basis[0])) is not None)
  return found, complete


def certify(A: RatMatrix, zeta: RatVector | None = None,
            candidate_box: int = 3, candidate_cap: int = 400) -> Certificate:
  """Decide properness of x + (Ax)^3 and certify the verdict.

  Pipeline: exact search for escape raw material, structural screens,
  the complete corank-one procedure, then a sweep of kernel cube-root
  directions through the escape characterizations.  The first decisive
  step wins; everything evaluated lands in the audit trail.
  """
  m = A.m
  audit: list[AuditEntry] = []

  search = necessary_escape_search(A)
  audit.append(AuditEntry(
    "escape-search",
    "candidate" if search.candidate is not None else
    ("provably empty" if search.none_is_proof else "nothing found"),
    search.note))

  screen_cert, screen_audit = sufficient_screens(A, zeta)
  audit.extend(screen_audit)
  if screen_cert is not None:
    return Certificate(screen_cert.verdict, screen_cert.reason, A,
                       evidence=screen_cert.evidence, audit=tuple(audit))

  if search.candidate is None and search.none_is_proof:
    return Certificate(PROPER, REASON_NO_ESCAPE, A,
                       evidence={"note": search.note}, audit=tuple(audit))

  corank = m - rank(A)
  if corank == 1:
    inner = corank1_decide(A)
    cert = Certificate(inner.verdict, inner.reason, A,
                       evidence=inner.evidence,
                       audit=tuple(audit) + inner.audit)
    return _validated(A, cert)

  candidates, complete = kernel_cuberoot_candidates(A, candidate_box,
                                                    candidate_cap)
  audit.append(AuditEntry("candidate-sweep", "enumerated",
                          f"{len(candidates)} rational direction(s); "
                          f"complete={complete}"))
  V = gram_image(A)
  for y in candidates:
    if all(a != 0 for a in y):
      if not V.contains(y):
        audit.append(AuditEntry("candidate", "blocked",
                                "direction outside the reduced subspace"))
        continue
      ok, u, note = escape_direction_check(A, V, y)
      audit.append(AuditEntry("candidate", "escape" if ok else "no escape",
                              note))
      if ok:
        recipe = WitnessRecipe(kind="simple", x_inf=y, u=u)
        cert = Certificate(NONPROPER, REASON_ESCAPE, A,
                           evidence={"recipe": recipe, "direction": y, "u": u},
                           audit=tuple(audit))
        return _validated(A, cert)
      continue
    try:
      if all(a in (0, 1) for a in y.entries):
        B, frame, x_pat, VB = A, None, y, V
      else:
        norm = normalize_kernel_direction(A, hpow(y, 3))
        B, frame, x_pat = norm.matrix, norm.frame, norm.generator
        VB = gram_image(B)
    except ValueError:
      continue
    rep = condition_chain(B, DirectionProfile.from_vector(x_pat), VB, "S")
    audit.append(AuditEntry("candidate-chain",
                            "satisfied" if rep.satisfied else "unsatisfied",
                            rep.failure or f"depth {rep.depth}"))
    if rep.satisfied and not rep.numeric_only:
      recipe = _chain_recipe(rep, VB, frame)
      if recipe is not None:
        cert = Certificate(NONPROPER, REASON_CHAIN, A,
                           evidence={"recipe": recipe, "chain": rep},
                           audit=tuple(audit))
        return _validated(A, cert)
      audit.append(AuditEntry("witness", "unsupported",
                              f"chain depth {rep.depth} has no closed-form "
                              "points"))
    elif rep.satisfied and rep.numeric_only:
      recipe = _numeric_chain_recipe(rep, frame)
      if recipe is not None:
        cert = Certificate(NONPROPER, REASON_CHAIN + NUMERIC_SUFFIX, A,
                           evidence={"recipe": recipe, "chain": rep},
                           audit=tuple(audit))
        return _validated(A, cert)

  if not candidates and complete:
    return Certificate(PROPER, REASON_NO_ESCAPE, A,
                       evidence={"note": "no rational escape directions exist"},
                       audit=tuple(audit))
  return Certificate(UNDECIDED, REASON_OUT_OF_SCOPE, A,
                     evidence={"note": "no screen fired and the candidate "
                               "sweep was not decisive",
                               "candidates_complete": complete},
                     audit=tuple(audit))


def _validated(A: RatMatrix, cert: Certificate) -> Certificate:
  """Run the float validator over any NonProper witness before returning."""
  if cert.verdict != NONPROPER:
    return cert
  recipe = cert.witness()
  if recipe is None:
    return Certificate(UNDECIDED, REASON_OUT_OF_SCOPE, A,
                       evidence=dict(cert.evidence,
                                     note="refutation lacked a recipe"),
                       audit=cert.audit)
  from .witness import validate_witness
  rep = validate_witness(A, recipe)
  if rep.passed:
    return cert
  audit = cert.audit + (AuditEntry("witness-validation", "failed",
                                   rep.note or "residuals did not decay"),)
  return Certificate(UNDECIDED, REASON_OUT_OF_SCOPE, A,
                     evidence=dict(cert.evidence,
                                   note="witness validation failed"),
                     audit=audit)


def verify_certificate(A: RatMatrix, cert: Certificate) -> bool:
  """Independently re-establish the decisive condition a certificate names.

  Proper reasons are recomputed from A alone; NonProper reasons re-check
  the witness recipe equations exactly (rational recipes) and re-run the
  float validation.
  """
  if cert.matrix != A:
    return False
  reason = cert.reason
  if cert.k == 1:
    from .linalg import det
    M = RatMatrix.identity(A.m).add(A)
    if reason == REASON_LINEAR_INVERTIBLE:
      return cert.verdict == PROPER and det(M) != 0
    if reason == REASON_LINEAR_SINGULAR:
      z = cert.evidence.get("kernel_vector")
      return (cert.verdict == NONPROPER and isinstance(z, RatVector)
              and not z.is_zero() and M.apply(z).is_zero())
    return False
  if cert.verdict == PROPER:
    if reason == REASON_KERNEL_GRAM:
      return _kernel_in_gram_kernel(A)
    if reason == REASON_GRAM_RANK1:
      return rank(A.gram()) == 1
    if reason == REASON_TRIANGULAR:
      return A.is_upper_triangular() or A.is_lower_triangular()
    if reason == REASON_PAIRING:
      zeta = cert.evidence.get("zeta")
      V = gram_image(A)
      if zeta is None or V.dim != 1:
        return False
      b = V.basis[0]
      return A.apply(hpow(b, 3)).dot(hprod(zeta, b)) >= 0
    if reason == REASON_KERNEL_LINE:
      K = kernel_basis(A)
      if K.dim != 1:
        return False
      g = primitive_integer_vector(K.basis[0])
      V = gram_image(A)
      y = rational_cube_root_direction(g)
      if y is None:
        return not cube_root_in_subspace(g, V)
      if not V.contains(y):
        return True
      if all(a != 0 for a in y):
        ok, _, _ = escape_direction_check(A, V, y)
        return not ok
      return False
    if reason == REASON_CHAIN_UNSAT:
      K = kernel_basis(A)
      if K.dim != 1:
        return False
      g = primitive_integer_vector(K.basis[0])
      y = rational_cube_root_direction(g)
      if y is None or all(a != 0 for a in y):
        return False
      if all(a in (0, 1) for a in y.entries):
        B, x_pat = A, y
      else:
        norm = normalize_kernel_direction(A, hpow(y, 3))
        B, x_pat = norm.matrix, norm.generator
      VB = gram_image(B)
      rep = condition_chain(B, DirectionProfile.from_vector(x_pat), VB, "S")
      return not rep.satisfied and not rep.numeric_only
    if reason == REASON_NO_ESCAPE:
      s = necessary_escape_search(A)
      if s.candidate is None and s.none_is_proof:
        return True
      cands, complete = kernel_cuberoot_candidates(A)
      return complete and not cands
    return False
  if cert.verdict == NONPROPER:
    recipe = cert.witness()
    if recipe is None:
      return False
    if not recipe.numeric and not _recipe_equations_hold(A, recipe):
      return False
    from .witness import validate_witness
    return validate_witness(A, recipe).passed
  return False


def _recipe_equations_hold(A: RatMatrix, recipe: WitnessRecipe) -> bool:
  """Exact re-check of the defining equations of a rational recipe."""
  B = recipe.frame.conjugate(A) if recipe.frame is not None else A
  x_inf = recipe.x_inf
  if not B.apply(hpow(x_inf, recipe.k)).is_zero():
    return False
  if recipe.kind == "simple":
    return B.apply(recipe.u) == -x_inf
  if B.apply(recipe.u) != -x_inf:
    return False
  V = gram_image(B)
  if not V.contains(x_inf):
    return False
  m = len(x_inf)
  support = set(x_inf.support())
  u_hat = _restrict(recipe.u, [i for i in range(m) if i not in support])
  if recipe.u_hat_root is None:
    if not u_hat.is_zero():
      return False
    if recipe.u1 is None or not V.contains(recipe.u1):
      return False
    return _restrict(recipe.u1, support) == _restrict(recipe.u, support)
  root = recipe.u_hat_root
  for i in range(m):
    if i in support:
      if root[i] != 0:
        return False
    elif root[i] ** 3 != u_hat[i]:
      return False
  if recipe.v is None or B.apply(recipe.v) != -root:
    return False
  nz = set(root.support())
  # v must vanish where the hat of u does, or the gamma^(1/3) orders clash
  for i in range(m):
    if i not in support and i not in nz and recipe.v[i] != 0:
      return False
  if not V.contains(root):
    return False
  paired = RatVector.of([recipe.v[i] / root[i] ** 2 if i in nz else Fraction(0)
                         for i in range(m)])
  if not V.contains(paired):
    return False
  for lifted, original in ((recipe.u1, recipe.u), (recipe.v1, recipe.v)):
    if lifted is None or not V.contains(lifted):
      return False
    if _restrict(lifted, support) != _restrict(original, support):
      return False
  return True
