"""Independent oracles and samplers shared by the test modules.

Everything here is deliberately naive: plain Gaussian elimination and
cofactor expansion over Fraction, with no imports from the package's linear
algebra.  Slow but obviously correct, so package results can be checked
against an implementation that shares no code with them.
"""

from __future__ import annotations

import random
from fractions import Fraction

from propermap.linalg import RatMatrix, RatVector


def naive_rank(rows: list[list[Fraction]]) -> int:
  """Row-reduce a copy with textbook Gaussian elimination and count pivots."""
  a = [[Fraction(x) for x in row] for row in rows]
  if not a:
    return 0
  n_rows, n_cols = len(a), len(a[0])
  r = 0
  for c in range(n_cols):
    pivot = next((i for i in range(r, n_rows) if a[i][c] != 0), None)
    if pivot is None:
      continue
    a[r], a[pivot] = a[pivot], a[r]
    inv = 1 / a[r][c]
    a[r] = [x * inv for x in a[r]]
    for i in range(n_rows):
      if i != r and a[i][c] != 0:
        f = a[i][c]
        a[i] = [x - f * y for x, y in zip(a[i], a[r])]
    r += 1
    if r == n_rows:
      break
  return r


def naive_det(rows: list[list[Fraction]]) -> Fraction:
  """Cofactor expansion along the first row."""
  n = len(rows)
  if n == 1:
    return Fraction(rows[0][0])
  total = Fraction(0)
  for j in range(n):
    if rows[0][j] == 0:
      continue
    minor = [[row[c] for c in range(n) if c != j] for row in rows[1:]]
    sign = 1 if j % 2 == 0 else -1
    total += sign * Fraction(rows[0][j]) * naive_det(minor)
  return total


def rows_of(A: RatMatrix) -> list[list[Fraction]]:
  return [[A.entry(i, j) for j in range(A.n_cols)] for i in range(A.n_rows)]


def f_hat_exact(A: RatMatrix, x: RatVector, k: int = 3) -> RatVector:
  """x + A(x^k) computed from scratch in Fractions."""
  xk = [a ** k for a in x]
  return RatVector.of([
      x[i] + sum(A.entry(i, j) * xk[j] for j in range(A.m))
      for i in range(A.m)])


def f_exact(A: RatMatrix, x: RatVector, k: int = 3) -> RatVector:
  """x + (Ax)^k computed from scratch in Fractions."""
  ax = [sum(A.entry(i, j) * x[j] for j in range(A.m)) for i in range(A.m)]
  return RatVector.of([x[i] + ax[i] ** k for i in range(A.m)])


def rand_int_matrix(rng: random.Random, m: int, box: int = 3) -> RatMatrix:
  return RatMatrix.of([[rng.randint(-box, box) for _ in range(m)]
                       for _ in range(m)])


def rand_rat_matrix(rng: random.Random, m: int, box: int = 3) -> RatMatrix:
  """Random matrix mixing integers and small fractions."""
  def cell():
    num = rng.randint(-box, box)
    den = rng.choice([1, 1, 1, 2, 3])
    return Fraction(num, den)
  return RatMatrix.of([[cell() for _ in range(m)] for _ in range(m)])


def rand_symmetric(rng: random.Random, m: int, box: int = 3) -> RatMatrix:
  M = rand_int_matrix(rng, m, box)
  return RatMatrix.of([[M.entry(i, j) + M.entry(j, i) for j in range(m)]
                       for i in range(m)])


def rand_antisymmetric(rng: random.Random, m: int, box: int = 3) -> RatMatrix:
  M = rand_int_matrix(rng, m, box)
  return RatMatrix.of([[M.entry(i, j) - M.entry(j, i) for j in range(m)]
                       for i in range(m)])


def rand_invertible(rng: random.Random, m: int, box: int = 3) -> RatMatrix:
  while True:
    A = rand_int_matrix(rng, m, box)
    if naive_det(rows_of(A)) != 0:
      return A


def rand_upper_triangular(rng: random.Random, m: int, box: int = 3) -> RatMatrix:
  return RatMatrix.of([[rng.randint(-box, box) if j >= i else 0
                        for j in range(m)] for i in range(m)])


def ones_kernel_sample(rng: random.Random, m: int, box: int = 3) -> RatMatrix:
  """Corank-1 matrix whose kernel is exactly the all-ones line."""
  while True:
    partial = [[rng.randint(-box, box) for _ in range(m - 1)]
               for _ in range(m)]
    rows = [r + [-sum(r)] for r in partial]
    if naive_rank([[Fraction(x) for x in r] for r in rows]) == m - 1:
      return RatMatrix.of(rows)
