"""Jacobian determinants of the maps x + (Ax)^k and related screens.

The Jacobian of F(x) = x + (Ax)^k is I + k diag((Ax)^(k-1)) A.  A matrix A
is called unimodular-cubic here when det JF is identically 1; for k = 3
those are the matrices whose map is a polynomial automorphism candidate in
the classical sense.  Small dimensions get an exact symbolic determinant
via sparse multivariate polynomials; larger ones fall back to randomized
evaluation at integer points (a polynomial identity test), which is
one-sided: a non-unit value refutes, agreement at all sample points only
reports "probably".

Also here: the search for a sign vector delta and global sign s making
s * delta_i * delta_j * a_ij nonnegative for every entry.  That is a
two-coloring problem solved with a parity union-find.  The outcome is
reported as an informational note; it is never a properness verdict by
itself.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .linalg import RatMatrix, RatVector, det


class PolynomialSizeError(ValueError):
  """Symbolic expansion would exceed the configured term budget."""


class MultiPoly:
  """Sparse multivariate polynomial with Fraction coefficients.

  Terms map an exponent tuple (one slot per variable) to a coefficient.
  """

  __slots__ = ("n_vars", "terms")

  def __init__(self, n_vars: int, terms: dict[tuple[int, ...], Fraction] | None = None):
    self.n_vars = n_vars
    self.terms = {e: c for e, c in (terms or {}).items() if c != 0}

  @staticmethod
  def constant(n_vars: int, c) -> "MultiPoly":
    c = Fraction(c)
    if c == 0:
      return MultiPoly(n_vars)
    return MultiPoly(n_vars, {(0,) * n_vars: c})

  @staticmethod
  def variable(n_vars: int, i: int) -> "MultiPoly":
    e = [0] * n_vars
    e[i] = 1
    return MultiPoly(n_vars, {tuple(e): Fraction(1)})

  @staticmethod
  def linear_form(coeffs: RatVector) -> "MultiPoly":
    n = len(coeffs)
    terms = {}
    for i, c in enumerate(coeffs.entries):
      if c != 0:
        e = [0] * n
        e[i] = 1
        terms[tuple(e)] = c
    return MultiPoly(n, terms)

  def __add__(self, other: "MultiPoly") -> "MultiPoly":
    terms = dict(self.terms)
    for e, c in other.terms.items():
      terms[e] = terms.get(e, Fraction(0)) + c
    return MultiPoly(self.n_vars, terms)

  def __sub__(self, other: "MultiPoly") -> "MultiPoly":
    terms = dict(self.terms)
    for e, c in other.terms.items():
      terms[e] = terms.get(e, Fraction(0)) - c
    return MultiPoly(self.n_vars, terms)

  def __mul__(self, other: "MultiPoly") -> "MultiPoly":
    terms: dict[tuple[int, ...], Fraction] = {}
    for e1, c1 in self.terms.items():
      for e2, c2 in other.terms.items():
        e = tuple(a + b for a, b in zip(e1, e2))
        terms[e] = terms.get(e, Fraction(0)) + c1 * c2
    return MultiPoly(self.n_vars, terms)

  def scale(self, c) -> "MultiPoly":
    c = Fraction(c)
    return MultiPoly(self.n_vars, {e: c * v for e, v in self.terms.items()})

  def power(self, k: int) -> "MultiPoly":
    out = MultiPoly.constant(self.n_vars, 1)
    for _ in range(k):
      out = out * self
    return out

  def evaluate(self, point: RatVector) -> Fraction:
    total = Fraction(0)
    for e, c in self.terms.items():
      v = c
      for x, p in zip(point.entries, e):
        if p:
          v *= x ** p
      total += v
    return total

  def is_constant(self) -> bool:
    return all(all(p == 0 for p in e) for e in self.terms)

  def constant_value(self) -> Fraction:
    if not self.is_constant():
      raise ValueError("polynomial is not constant")
    return next(iter(self.terms.values()), Fraction(0))

  def n_terms(self) -> int:
    return len(self.terms)

  def __eq__(self, other) -> bool:
    return isinstance(other, MultiPoly) and self.terms == other.terms

  def __repr__(self) -> str:
    if not self.terms:
      return "MultiPoly(0)"
    bits = []
    for e, c in sorted(self.terms.items()):
      mono = "*".join(f"x{i}^{p}" for i, p in enumerate(e) if p) or "1"
      bits.append(f"{c}*{mono}")
    return "MultiPoly(" + " + ".join(bits) + ")"


def jacobian_entries(A: RatMatrix, k: int = 3) -> list[list[MultiPoly]]:
  """Symbolic Jacobian I + k diag((Ax)^(k-1)) A as a matrix of polynomials."""
  m = A.m
  rows = []
  for i in range(m):
    lin = MultiPoly.linear_form(A.row(i)).power(k - 1)
    row = []
    for j in range(m):
      p = lin.scale(Fraction(k) * A.entry(i, j))
      if i == j:
        p = p + MultiPoly.constant(m, 1)
      row.append(p)
    rows.append(row)
  return rows


def jacobian_det(A: RatMatrix, k: int = 3, *, max_dim: int = 6,
                 max_terms: int = 200_000) -> MultiPoly:
  """Exact symbolic determinant of the Jacobian of x + (Ax)^k.

  Guarded: dimensions above max_dim or expansions above max_terms raise
  PolynomialSizeError; use the randomized identity test instead.
  """
  m = A.m
  if m > max_dim:
    raise PolynomialSizeError(
        f"symbolic determinant limited to dimension {max_dim}; "
        "use the randomized identity test")
  entries = jacobian_entries(A, k)
  memo: dict[tuple[int, frozenset[int]], MultiPoly] = {}

  def minor(row: int, cols: frozenset[int]) -> MultiPoly:
    if row == m:
      return MultiPoly.constant(m, 1)
    key = (row, cols)
    if key in memo:
      return memo[key]
    total = MultiPoly(m)
    sign = 1
    for j in sorted(cols):
      e = entries[row][j]
      if e.terms:
        sub = minor(row + 1, cols - {j})
        term = e * sub if sign > 0 else e.scale(-1) * sub
        total = total + term
        if total.n_terms() > max_terms:
          raise PolynomialSizeError("determinant expansion exceeds term budget")
      sign = -sign
    memo[key] = total
    return total

  return minor(0, frozenset(range(m)))


def jacobian_at_point(A: RatMatrix, x: RatVector, k: int = 3) -> RatMatrix:
  """Numeric (exact rational) Jacobian at a point."""
  ax = A.apply(x)
  m = A.m
  rows = []
  for i in range(m):
    s = Fraction(k) * ax[i] ** (k - 1)
    rows.append(tuple(
        (Fraction(1) if i == j else Fraction(0)) + s * A.entry(i, j)
        for j in range(m)))
  return RatMatrix(tuple(rows))


@dataclass(frozen=True)
class UnimodularReport:
  """Outcome of the det JF == 1 test, with enough data to audit it."""

  unimodular: bool
  mode: str                      # "exact" or "randomized"
  k: int
  trials: int = 0
  seed: int | None = None
  counterexample: RatVector | None = None
  note: str = ""

  def __bool__(self) -> bool:
    return self.unimodular


def is_druzkowski(A: RatMatrix, k: int = 3, *, max_exact_dim: int = 6,
                  trials: int = 64, seed: int = 0,
                  sample_box: int = 10 ** 6) -> UnimodularReport:
  """Decide (or probabilistically test) whether det JF is identically 1.

  Dimensions up to max_exact_dim are decided exactly by symbolic expansion.
  Above that, the determinant is evaluated exactly at `trials` random
  integer points drawn from [-sample_box, sample_box]^m with the given
  seed; any non-unit value refutes with the point as counterexample, and
  full agreement reports probable unimodularity.
  """
  m = A.m
  if m <= max_exact_dim:
    try:
      p = jacobian_det(A, k, max_dim=max_exact_dim)
      one = MultiPoly.constant(m, 1)
      if p == one:
        return UnimodularReport(True, "exact", k, note="det JF expands to 1")
      witness = _nonunit_point(A, p, k, seed)
      return UnimodularReport(False, "exact", k, counterexample=witness,
                              note="det JF is a non-constant or non-unit polynomial")
    except PolynomialSizeError:
      pass  # fall through to sampling
  rng = random.Random(seed)
  for t in range(trials):
    x = RatVector.of([rng.randint(-sample_box, sample_box) for _ in range(m)])
    value = det(jacobian_at_point(A, x, k))
    if value != 1:
      return UnimodularReport(False, "randomized", k, trials=t + 1, seed=seed,
                              counterexample=x,
                              note=f"det JF(x) = {value} at a sampled point")
  return UnimodularReport(True, "randomized", k, trials=trials, seed=seed,
                          note="det JF = 1 at every sampled point (probable)")


def _nonunit_point(A: RatMatrix, p: MultiPoly, k: int, seed: int) -> RatVector | None:
  rng = random.Random(seed)
  for _ in range(256):
    x = RatVector.of([rng.randint(-50, 50) for _ in range(A.m)])
    if p.evaluate(x) != 1:
      return x
  return None


# ---------------------------------------------------------------------------
# sign patterns
# ---------------------------------------------------------------------------


class _ParityUnionFind:
  """Union-find where each node carries its sign parity relative to the root."""

  def __init__(self, n: int):
    self.parent = list(range(n))
    self.rank = [0] * n
    self.parity = [0] * n  # parity to parent

  def find(self, i: int) -> tuple[int, int]:
    if self.parent[i] == i:
      return i, 0
    root, par = self.find(self.parent[i])
    self.parent[i] = root
    self.parity[i] ^= par
    return root, self.parity[i]

  def union(self, i: int, j: int, parity: int) -> bool:
    """Enforce parity(i) xor parity(j) == parity.  False on contradiction."""
    ri, pi = self.find(i)
    rj, pj = self.find(j)
    if ri == rj:
      return (pi ^ pj) == parity
    if self.rank[ri] < self.rank[rj]:
      ri, rj = rj, ri
      pi, pj = pj, pi
    self.parent[rj] = ri
    self.parity[rj] = pi ^ pj ^ parity
    if self.rank[ri] == self.rank[rj]:
      self.rank[ri] += 1
    return True


@dataclass(frozen=True)
class SignPattern:
  """delta in {-1, +1}^m and global sign s with sign(a_ij) = s * delta_i * delta_j
  on every nonzero entry."""

  delta: tuple[int, ...]
  global_sign: int


def find_sign_pattern(A: RatMatrix) -> SignPattern | None:
  """Search for a sign vector making all entries share one signed pattern.

  Feasibility is equivalent to: delta_i delta_j delta_k delta_l a_ij a_kl >= 0
  for all index pairs.  Tries global sign +1 then -1; each attempt is a
  two-coloring solved by parity union-find.  Returns None when both fail.
  """
  m = A.m
  nonzero = [(i, j, 1 if A.entry(i, j) > 0 else -1)
             for i in range(m) for j in range(m) if A.entry(i, j) != 0]
  for s in (1, -1):
    uf = _ParityUnionFind(m)
    ok = True
    for i, j, sign in nonzero:
      want = s * sign            # delta_i * delta_j must equal this
      if i == j:
        if want != 1:            # delta_i^2 = 1 always
          ok = False
          break
        continue
      if not uf.union(i, j, 0 if want == 1 else 1):
        ok = False
        break
    if not ok:
      continue
    delta = []
    for i in range(m):
      _, par = uf.find(i)
      delta.append(1 if par == 0 else -1)
    pattern = SignPattern(tuple(delta), s)
    if _sign_pattern_holds(A, pattern):
      return pattern
  return None


def _sign_pattern_holds(A: RatMatrix, p: SignPattern) -> bool:
  m = A.m
  for i in range(m):
    for j in range(m):
      a = A.entry(i, j)
      if a == 0:
        continue
      if (1 if a > 0 else -1) != p.global_sign * p.delta[i] * p.delta[j]:
        return False
  return True


def invertibility_verdict(A: RatMatrix, properness_verdict: str, *,
                          jacobian_never_vanishes: bool = False,
                          k: int = 3) -> str:
  """Combine a properness verdict with Jacobian information.

  A continuously differentiable map whose Jacobian never vanishes is a
  global diffeomorphism exactly when it is proper; and a continuous
  bijection of R^m is automatically a homeomorphism, hence proper.  So:
  NonProper always means not invertible; Proper plus a never-vanishing
  Jacobian means invertible; anything else is undetermined.
  """
  if properness_verdict == "NonProper":
    return "not invertible"
  if properness_verdict == "Proper":
    if jacobian_never_vanishes or is_druzkowski(A, k).unimodular:
      return "invertible"
  return "undetermined"
