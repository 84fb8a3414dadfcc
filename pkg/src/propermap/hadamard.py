"""Coordinatewise vector algebra and the polynomial maps built from it.

The maps under study are

    F(x)     = x + (A x)^k        (power taken coordinatewise)
    F_hat(x) = x + A (x^k)

for a square rational matrix A and odd power k (k = 3 is the main case).
Coordinatewise products, powers, inverse powers and odd real roots are
provided over both Fraction entries (exact) and float entries (IEEE).  A
single generic implementation covers both: Fraction arithmetic stays
closed, and mixing in a float input yields float output.

Also here: exact recognition of rational k-th roots, and the grouping of a
rational vector's coordinates into perfect-cube-ratio classes.  Cube roots
of rationals whose pairwise ratios are not perfect cubes are linearly
independent over the rationals, so membership of an entrywise cube root in
a rational subspace splits into one exact linear condition per class.  This
is what lets kernel directions with irrational cube roots still be handled
exactly in the certifier.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .linalg import RatMatrix, RatVector, Subspace, orthogonal_complement


class ExactRootError(ValueError):
  """A requested exact root does not exist in the rationals."""


def _same_kind(template, values):
  if isinstance(template, RatVector):
    return RatVector(tuple(values))
  return tuple(values)


def _entries(x) -> Sequence:
  return x.entries if isinstance(x, RatVector) else tuple(x)


def hprod(x, y):
  """Coordinatewise product."""
  xs, ys = _entries(x), _entries(y)
  if len(xs) != len(ys):
    raise ValueError(f"length mismatch: {len(xs)} vs {len(ys)}")
  return _same_kind(x, (a * b for a, b in zip(xs, ys)))


def hpow(x, k: int):
  """Coordinatewise k-th power, k >= 1."""
  if k < 1:
    raise ValueError("power must be >= 1")
  return _same_kind(x, (a ** k for a in _entries(x)))


def hinv_pow(x, k: int):
  """Coordinatewise x^(-k).  Any zero coordinate is an error."""
  if k < 1:
    raise ValueError("power must be >= 1")
  xs = _entries(x)
  if any(a == 0 for a in xs):
    raise ValueError("zero coordinate: vector is not coordinatewise invertible")
  if isinstance(x, RatVector):
    return RatVector(tuple(Fraction(1) / (a ** k) for a in xs))
  return tuple(1.0 / (a ** k) for a in xs)


def integer_kth_root(n: int, k: int) -> int | None:
  """Exact integer r with r^k = n, or None.  Negative n needs odd k."""
  if n == 0:
    return 0
  if n < 0:
    if k % 2 == 0:
      return None
    r = integer_kth_root(-n, k)
    return None if r is None else -r
  r = round(n ** (1.0 / k))
  for cand in (r - 1, r, r + 1):
    if cand >= 0 and cand ** k == n:
      return cand
  # float seed can be off for very large n; fall back to bisection
  lo, hi = 0, 1
  while hi ** k < n:
    hi *= 2
  while lo <= hi:
    mid = (lo + hi) // 2
    p = mid ** k
    if p == n:
      return mid
    if p < n:
      lo = mid + 1
    else:
      hi = mid - 1
  return None


def rational_kth_root(q: Fraction, k: int) -> Fraction | None:
  """Exact rational r with r^k = q, or None."""
  num = integer_kth_root(q.numerator, k)
  if num is None:
    return None
  den = integer_kth_root(q.denominator, k)
  if den is None:
    return None
  return Fraction(num, den)


def integer_root_floor(n: int, k: int) -> int:
  """floor(n^(1/k)) for n >= 0 by Newton iteration in pure integers."""
  if k < 1:
    raise ValueError("root order must be >= 1")
  if n < 0:
    raise ValueError("floor root needs a nonnegative argument")
  if n == 0:
    return 0
  x = 1 << ((n.bit_length() + k - 1) // k + 1)
  while True:
    y = ((k - 1) * x + n // x ** (k - 1)) // k
    if y >= x:
      return x
    x = y


def rational_kth_root_approx(q: Fraction, k: int, digits: int = 48) -> Fraction:
  """Rational r with |r - q^(1/k)| < 10^-digits.  Negative q needs odd k.

  Exact when q has a rational k-th root; otherwise a truncation with a
  power-of-ten denominator.  All arithmetic is integer, so the precision
  is real, not float-limited.
  """
  if k < 1:
    raise ValueError("root order must be >= 1")
  if q < 0:
    if k % 2 == 0:
      raise ValueError("negative argument has no real even root")
    return -rational_kth_root_approx(-q, k, digits)
  exact = rational_kth_root(q, k)
  if exact is not None:
    return exact
  scale = 10 ** digits
  # q^(1/k) = (num * den^(k-1))^(1/k) / den
  big = q.numerator * q.denominator ** (k - 1) * scale ** k
  return Fraction(integer_root_floor(big, k), q.denominator * scale)


def hroot_odd(x, k: int):
  """Coordinatewise real k-th root for odd k (sign preserving, unique).

  Fraction input demands exact rational roots and raises ExactRootError
  otherwise; float input takes IEEE roots.
  """
  if k < 1 or k % 2 == 0:
    raise ValueError("odd root only: k must be odd and >= 1")
  xs = _entries(x)
  if isinstance(x, RatVector):
    out = []
    for i, a in enumerate(xs):
      r = rational_kth_root(a, k)
      if r is None:
        raise ExactRootError(
            f"coordinate {i} ({a}) has no rational {k}-th root; use float mode")
      out.append(r)
    return RatVector(tuple(out))
  return tuple(_float_odd_root(float(a), k) for a in xs)


def _float_odd_root(a: float, k: int) -> float:
  if a == 0.0:
    return 0.0
  mag = abs(a) ** (1.0 / k)
  return mag if a > 0 else -mag


# ---------------------------------------------------------------------------
# the maps
# ---------------------------------------------------------------------------


def identity_plus_power(A: RatMatrix, x, k: int = 3):
  """F(x) = x + (A x)^k, exact on RatVector, float otherwise."""
  if isinstance(x, RatVector):
    ax = A.apply(x)
    return x + hpow(ax, k)
  xs = tuple(float(v) for v in _entries(x))
  ax = _float_apply(A, xs)
  return tuple(v + a ** k for v, a in zip(xs, ax))


def identity_plus_image_power(A: RatMatrix, x, k: int = 3):
  """F_hat(x) = x + A(x^k), exact on RatVector, float otherwise."""
  if isinstance(x, RatVector):
    return x + A.apply(hpow(x, k))
  xs = tuple(float(v) for v in _entries(x))
  xk = tuple(v ** k for v in xs)
  return tuple(v + a for v, a in zip(xs, _float_apply(A, xk)))


def _float_apply(A: RatMatrix, x: Sequence[float]) -> tuple[float, ...]:
  return tuple(sum(float(a) * v for a, v in zip(row, x)) for row in A.rows)


def float_norm(x: Sequence[float]) -> float:
  return sum(float(v) * float(v) for v in x) ** 0.5


def rat_to_floats(x: RatVector) -> tuple[float, ...]:
  return tuple(float(v) for v in x.entries)


# ---------------------------------------------------------------------------
# perfect-cube-ratio classes
# ---------------------------------------------------------------------------


def cube_root_classes(g: RatVector) -> list[list[int]]:
  """Group the nonzero coordinate indices of g so that two indices share a
  class exactly when their ratio is the cube of a rational."""
  classes: list[list[int]] = []
  reps: list[Fraction] = []
  for i, a in enumerate(g.entries):
    if a == 0:
      continue
    for cls, rep in zip(classes, reps):
      if rational_kth_root(a / rep, 3) is not None:
        cls.append(i)
        break
    else:
      classes.append([i])
      reps.append(a)
  return classes


def rational_cube_root_direction(g: RatVector) -> RatVector | None:
  """A rational vector spanning the line of entrywise cube roots of g.

  Exists exactly when all nonzero coordinates of g fall in one
  perfect-cube-ratio class.  Zero coordinates stay zero.  Returns None when
  the cube-root direction is irrational.
  """
  if g.is_zero():
    raise ValueError("zero vector has no direction")
  classes = cube_root_classes(g)
  if len(classes) != 1:
    return None
  ref_index = classes[0][0]
  ref = g.entries[ref_index]
  out = [Fraction(0)] * len(g)
  for i in classes[0]:
    out[i] = rational_kth_root(g.entries[i] / ref, 3)
  return RatVector(tuple(out))


def cube_root_in_subspace(g: RatVector, s: Subspace) -> bool:
  """Exact test: does the entrywise real cube root of g lie in s?

  Works even when the cube root is irrational.  For every linear functional
  n vanishing on s, the condition sum_i n_i g_i^(1/3) = 0 splits into one
  rational condition per perfect-cube-ratio class, because cube roots of
  rationals from distinct classes are linearly independent over Q.
  """
  if len(g) != s.ambient_dim:
    raise ValueError("dimension mismatch")
  if g.is_zero():
    return True
  classes = cube_root_classes(g)
  complement = orthogonal_complement(s)
  for n in complement.basis:
    for cls in classes:
      ref = g.entries[cls[0]]
      total = Fraction(0)
      for i in cls:
        rho = rational_kth_root(g.entries[i] / ref, 3)
        total += n.entries[i] * rho
      if total != 0:
        return False
  return True
