"""Witness recipes: the data needed to generate concrete escape points.

A witness recipe encodes an explicit unbounded sequence x_n whose images
under the relevant map stay bounded, refuting properness.  Two construction
kinds exist:

* "simple": x_inf has no zero coordinate.  Points are
      x_n = gamma x_inf + (1/(k gamma^(k-2))) u * x_inf^(-(k-1)),
  which makes x_n^k = gamma^k x_inf^k + gamma u + lower order, so with
  A(x_inf^k) = 0 and A u = -x_inf the image under x + A(x^k) decays like
  1/gamma^(k-2).

* "corank-chain": x_inf is a 0/1 pattern (kernel direction with zeros).
  Points follow the two-stage construction
      x_n = gamma x_inf + (1/(3 gamma^2)) (gamma u1 + gamma^(1/3) v1)
            + gamma^(1/3) r + (1/(3 gamma^(1/3))) w,
  where r is the coordinatewise cube root of the off-support part of u and
  w pairs the second solve v against r^(-2) on r's support.  The image
  under x + A(x^3) decays like gamma^(-1/3).

Recipes carry exact rational data (floats only appear for recipes flagged
numeric) plus an optional diagonal-and-permutation frame: when the matrix
under analysis was conjugated to bring its kernel direction to a leading
0/1 pattern, the recipe refers to the conjugated matrix, and the frame says
how to rebuild it from the original.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .linalg import RatMatrix, RatVector


@dataclass(frozen=True)
class ConjugationFrame:
  """B = P D A D^(-3) P^T with D = diag(diag) and (P x)[i] = x[perm[i]].

  Properness of the map of B is equivalent to that of A, and kernel
  directions transform by x -> P D^3 x.
  """

  perm: tuple[int, ...]
  diag: tuple[Fraction, ...]

  def conjugate(self, A: RatMatrix) -> RatMatrix:
    m = A.m
    if len(self.perm) != m or len(self.diag) != m:
      raise ValueError("frame size does not match matrix")
    rows = []
    for i in range(m):
      oi = self.perm[i]
      row = []
      for j in range(m):
        oj = self.perm[j]
        row.append(self.diag[oi] * A.entry(oi, oj) / self.diag[oj] ** 3)
      rows.append(tuple(row))
    return RatMatrix(tuple(rows))

  def is_identity(self) -> bool:
    return (self.perm == tuple(range(len(self.perm)))
            and all(d == 1 for d in self.diag))


@dataclass(frozen=True)
class WitnessRecipe:
  """Everything needed to produce escape points x_n at any gamma."""

  kind: str                      # "simple" or "corank-chain"
  x_inf: RatVector
  u: RatVector
  k: int = 3
  v: RatVector | None = None
  u1: RatVector | None = None
  v1: RatVector | None = None
  u_hat_root: RatVector | None = None
  frame: ConjugationFrame | None = None
  numeric: bool = False

  def __post_init__(self):
    if self.kind not in ("simple", "corank-chain"):
      raise ValueError(f"unknown recipe kind {self.kind!r}")
    if self.k < 1:
      raise ValueError("power k must be >= 1")
    if len(self.u) != len(self.x_inf):
      raise ValueError("u and x_inf live in different dimensions")


def build_witness_point(recipe: WitnessRecipe, gamma: float) -> tuple[float, ...]:
  """Concrete escape point at the given gamma, in float coordinates.

  Only recipe-internal sanity is enforced here (matrix equations are the
  validator's job): gammas must be positive, a simple recipe needs a fully
  nonzero x_inf and a nonzero u, a chain recipe needs a 0/1 pattern x_inf.
  """
  if not gamma > 0:
    raise ValueError("gamma must be positive")
  x_inf = [float(a) for a in recipe.x_inf]
  u = [float(a) for a in recipe.u]
  m = len(x_inf)
  if recipe.kind == "simple":
    if any(a == 0 for a in recipe.x_inf):
      raise ValueError("simple recipe requires x_inf with no zero coordinate")
    if recipe.u.is_zero():
      raise ValueError("simple recipe with u = 0 is impossible unless x_inf = 0")
    k = recipe.k
    if k < 2:
      raise ValueError("simple recipe needs k >= 2")
    coeff = 1.0 / (k * gamma ** (k - 2))
    return tuple(gamma * x_inf[i] + coeff * u[i] / x_inf[i] ** (k - 1)
                 for i in range(m))
  # corank-chain
  support = recipe.x_inf.support()
  if any(recipe.x_inf[i] != 1 for i in support):
    raise ValueError("chain recipe requires a 0/1 pattern x_inf")
  if recipe.k != 3:
    raise ValueError("chain recipes are cubic only")
  u1 = [float(a) for a in (recipe.u1 or recipe.u)]
  v1 = [float(a) for a in recipe.v1] if recipe.v1 is not None else [0.0] * m
  r = [float(a) for a in recipe.u_hat_root] if recipe.u_hat_root is not None else [0.0] * m
  v = [float(a) for a in recipe.v] if recipe.v is not None else [0.0] * m
  g13 = gamma ** (1.0 / 3.0)
  out = []
  for i in range(m):
    val = gamma * x_inf[i]
    val += (gamma * u1[i] + g13 * v1[i]) / (3.0 * gamma ** 2)
    val += g13 * r[i]
    if r[i] != 0.0:
      val += v[i] / (r[i] ** 2 * 3.0 * g13)
    out.append(val)
  return tuple(out)
