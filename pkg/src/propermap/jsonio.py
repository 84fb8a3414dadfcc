"""JSON serialization for matrices, certificates, recipes, and reports.

Rationals always cross the boundary as strings ("p/q" or a plain integer
literal), never as floats, so parsing back is exact.  Parsers are strict:
errors name the offending field.  Serialization is deterministic (sorted
keys, fixed indentation) so identical inputs produce identical bytes.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .certify import AuditEntry, Certificate, ConditionSetReport
from .forge import DensitySummary
from .linalg import RatMatrix, RatVector, as_rat
from .recipes import ConjugationFrame, WitnessRecipe
from .witness import MuProbeReport, WitnessValidationReport


def rat_str(q: Fraction) -> str:
  return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _parse_rat(value, where: str) -> Fraction:
  if isinstance(value, bool) or not isinstance(value, (str, int)):
    raise ValueError(f"{where} must be a rational string or integer, "
                     f"got {type(value).__name__}")
  try:
    return as_rat(value)
  except (ValueError, TypeError) as err:
    raise ValueError(f"{where}: {err}") from None


def _require_keys(obj: dict, allowed: set, required: set, what: str) -> None:
  if not isinstance(obj, dict):
    raise ValueError(f"{what} must be a JSON object")
  for key in required:
    if key not in obj:
      raise ValueError(f"{what} is missing field {key!r}")
  for key in obj:
    if key not in allowed:
      raise ValueError(f"{what} has unexpected field {key!r}")


def matrix_to_json(A: RatMatrix) -> dict:
  if not A.is_square():
    raise ValueError("only square matrices serialize to matrix JSON")
  return {"m": A.m,
          "rows": [[rat_str(A.entry(i, j)) for j in range(A.m)]
                   for i in range(A.m)]}


def matrix_from_json(obj) -> RatMatrix:
  _require_keys(obj, {"m", "rows"}, {"m", "rows"}, "matrix JSON")
  m = obj["m"]
  if isinstance(m, bool) or not isinstance(m, int) or m < 1:
    raise ValueError("field 'm' must be a positive integer")
  rows = obj["rows"]
  if not isinstance(rows, list) or len(rows) != m:
    raise ValueError(f"field 'rows' must be a list of {m} rows")
  parsed = []
  for i, row in enumerate(rows):
    if not isinstance(row, list) or len(row) != m:
      raise ValueError(f"row {i} must be a list of {m} entries")
    parsed.append([_parse_rat(x, f"entry ({i},{j})")
                   for j, x in enumerate(row)])
  return RatMatrix.of(parsed)


def vector_to_json(v: RatVector) -> dict:
  return {"entries": [rat_str(a) for a in v]}


def vector_from_json(obj) -> RatVector:
  _require_keys(obj, {"entries"}, {"entries"}, "vector JSON")
  entries = obj["entries"]
  if not isinstance(entries, list) or not entries:
    raise ValueError("field 'entries' must be a non-empty list")
  return RatVector.of([_parse_rat(x, f"entry {i}")
                       for i, x in enumerate(entries)])


def _vector_list(v: RatVector) -> list:
  return [rat_str(a) for a in v]


def _vector_from_list(value, where: str) -> RatVector:
  if not isinstance(value, list) or not value:
    raise ValueError(f"{where} must be a non-empty list")
  return RatVector.of([_parse_rat(x, f"{where}[{i}]")
                       for i, x in enumerate(value)])


def frame_to_json(frame: ConjugationFrame) -> dict:
  return {"perm": list(frame.perm), "diag": [rat_str(d) for d in frame.diag]}


def frame_from_json(obj) -> ConjugationFrame:
  _require_keys(obj, {"perm", "diag"}, {"perm", "diag"}, "frame JSON")
  perm = obj["perm"]
  if not isinstance(perm, list) or \
     any(isinstance(p, bool) or not isinstance(p, int) for p in perm):
    raise ValueError("field 'perm' must be a list of integers")
  diag = obj["diag"]
  if not isinstance(diag, list) or len(diag) != len(perm):
    raise ValueError("field 'diag' must be a list matching 'perm' in length")
  return ConjugationFrame(tuple(perm),
                          tuple(_parse_rat(d, f"diag[{i}]")
                                for i, d in enumerate(diag)))


def recipe_to_json(recipe: WitnessRecipe) -> dict:
  out = {"kind": recipe.kind,
         "k": recipe.k,
         "x_inf": _vector_list(recipe.x_inf),
         "u": _vector_list(recipe.u),
         "numeric": recipe.numeric}
  for name in ("v", "u1", "v1", "u_hat_root"):
    value = getattr(recipe, name)
    if value is not None:
      out[name] = _vector_list(value)
  if recipe.frame is not None:
    out["frame"] = frame_to_json(recipe.frame)
  return out


def recipe_from_json(obj) -> WitnessRecipe:
  allowed = {"kind", "k", "x_inf", "u", "v", "u1", "v1", "u_hat_root",
             "frame", "numeric"}
  _require_keys(obj, allowed, {"kind", "x_inf", "u"}, "recipe JSON")
  kind = obj["kind"]
  if kind not in ("simple", "corank-chain"):
    raise ValueError(f"field 'kind' must be 'simple' or 'corank-chain', "
                     f"got {kind!r}")
  k = obj.get("k", 3)
  if isinstance(k, bool) or not isinstance(k, int) or k < 1:
    raise ValueError("field 'k' must be a positive integer")
  numeric = obj.get("numeric", False)
  if not isinstance(numeric, bool):
    raise ValueError("field 'numeric' must be a boolean")
  kwargs = {}
  for name in ("v", "u1", "v1", "u_hat_root"):
    if name in obj:
      kwargs[name] = _vector_from_list(obj[name], f"field '{name}'")
  if "frame" in obj:
    kwargs["frame"] = frame_from_json(obj["frame"])
  return WitnessRecipe(kind=kind,
                       x_inf=_vector_from_list(obj["x_inf"], "field 'x_inf'"),
                       u=_vector_from_list(obj["u"], "field 'u'"),
                       k=k, numeric=numeric, **kwargs)


def _chain_summary(report: ConditionSetReport) -> dict:
  return {"type": "chain",
          "mode": report.mode,
          "satisfied": report.satisfied,
          "depth": report.depth,
          "numeric_only": report.numeric_only,
          "extrapolated": report.extrapolated,
          "failure": report.failure}


def _encode_evidence(value):
  if isinstance(value, bool) or value is None:
    return value
  if isinstance(value, (int, float, str)):
    return value
  if isinstance(value, Fraction):
    return {"type": "rational", "value": rat_str(value)}
  if isinstance(value, RatVector):
    return {"type": "vector", "entries": _vector_list(value)}
  if isinstance(value, RatMatrix):
    return {"type": "matrix", **matrix_to_json(value)}
  if isinstance(value, WitnessRecipe):
    return {"type": "recipe", **recipe_to_json(value)}
  if isinstance(value, ConditionSetReport):
    return _chain_summary(value)
  if isinstance(value, (list, tuple)):
    return [_encode_evidence(x) for x in value]
  if isinstance(value, dict):
    return {str(k): _encode_evidence(v) for k, v in value.items()}
  raise TypeError(f"cannot serialize evidence of type {type(value).__name__}")


def _decode_evidence(value):
  if isinstance(value, dict):
    tag = value.get("type")
    if tag == "rational":
      return _parse_rat(value.get("value"), "rational evidence")
    if tag == "vector":
      return _vector_from_list(value.get("entries"), "vector evidence")
    if tag == "matrix":
      return matrix_from_json({k: v for k, v in value.items() if k != "type"})
    if tag == "recipe":
      return recipe_from_json({k: v for k, v in value.items() if k != "type"})
    return {k: _decode_evidence(v) for k, v in value.items()}
  if isinstance(value, list):
    return [_decode_evidence(x) for x in value]
  return value


def certificate_to_json(cert: Certificate) -> dict:
  return {"verdict": cert.verdict,
          "reason": cert.reason,
          "k": cert.k,
          "matrix": matrix_to_json(cert.matrix),
          "evidence": {k: _encode_evidence(v) for k, v in cert.evidence.items()},
          "audit": [{"step": a.step, "outcome": a.outcome, "detail": a.detail}
                    for a in cert.audit]}


def certificate_from_json(obj) -> Certificate:
  allowed = {"verdict", "reason", "k", "matrix", "evidence", "audit"}
  _require_keys(obj, allowed, {"verdict", "reason", "matrix"},
                "certificate JSON")
  k = obj.get("k", 3)
  if isinstance(k, bool) or not isinstance(k, int) or k < 1:
    raise ValueError("field 'k' must be a positive integer")
  evidence = obj.get("evidence", {})
  if not isinstance(evidence, dict):
    raise ValueError("field 'evidence' must be an object")
  audit_raw = obj.get("audit", [])
  if not isinstance(audit_raw, list):
    raise ValueError("field 'audit' must be a list")
  audit = []
  for i, entry in enumerate(audit_raw):
    _require_keys(entry, {"step", "outcome", "detail"}, {"step", "outcome"},
                  f"audit entry {i}")
    audit.append(AuditEntry(str(entry["step"]), str(entry["outcome"]),
                            str(entry.get("detail", ""))))
  return Certificate(verdict=str(obj["verdict"]),
                     reason=str(obj["reason"]),
                     matrix=matrix_from_json(obj["matrix"]),
                     k=k,
                     evidence={str(k2): _decode_evidence(v)
                               for k2, v in evidence.items()},
                     audit=tuple(audit))


def validation_report_to_json(report: WitnessValidationReport) -> dict:
  return {"gammas": list(report.gammas),
          "residuals": list(report.residuals),
          "point_norms": list(report.point_norms),
          "direction_errors": list(report.direction_errors),
          "invariant_ok": report.invariant_ok,
          "rejected": report.rejected,
          "fitted_decay_exponent": report.fitted_decay_exponent,
          "negative_image_coordinates": report.negative_image_coordinates,
          "passed": report.passed,
          "note": report.note}


def probe_report_to_json(report: MuProbeReport) -> dict:
  return {"radii": list(report.radii),
          "mu_values": list(report.mu_values),
          "classification": report.classification,
          "seed": report.seed,
          "note": report.note}


def density_summary_to_json(summary: DensitySummary) -> dict:
  return {"m": summary.m,
          "r": summary.r,
          "trials": summary.trials,
          "seed": summary.seed,
          "counts": dict(sorted(summary.counts.items())),
          "rows": [{"seed": row.seed, "m": row.m, "r": row.r,
                    "verdict": row.verdict, "reason": row.reason,
                    "millis": row.millis} for row in summary.rows]}


def dumps(obj) -> str:
  """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
  return json.dumps(obj, indent=2, sort_keys=True) + "\n"
