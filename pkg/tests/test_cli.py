"""End-to-end command-line behavior, driven in process through main()."""

import json

import pytest

from propermap.certify import certify
from propermap.cli import main
from propermap.forge import golden_3x3, shift_5x5
from propermap.jsonio import (
  certificate_to_json,
  dumps,
  matrix_to_json,
  recipe_to_json,
)
from propermap.linalg import RatMatrix

UNDECIDED_ROWS = [[1, 1, -1], [1, 1, -1], [1, -1, 0]]


def write_matrix(path, A):
  path.write_text(dumps(matrix_to_json(A)))
  return str(path)


def run(capsys, argv):
  code = main(argv)
  captured = capsys.readouterr()
  return code, captured.out, captured.err


def test_analyze_proper_exits_zero(tmp_path, capsys):
  path = write_matrix(tmp_path / "shift.json", shift_5x5())
  code, out, err = run(capsys, ["analyze", "--input", path])
  assert code == 0
  payload = json.loads(out)
  assert payload["verdict"] == "Proper"
  assert payload["reason"] == "triangular"
  assert err == ""


def test_analyze_non_proper_exits_zero_with_recipe(tmp_path, capsys):
  path = write_matrix(tmp_path / "g.json", golden_3x3())
  code, out, _ = run(capsys, ["analyze", "--input", path])
  assert code == 0
  payload = json.loads(out)
  assert payload["verdict"] == "NonProper"
  assert payload["reason"] == "escape-direction"
  assert payload["evidence"]["recipe"]["kind"] == "simple"


def test_analyze_undecided_exits_two(tmp_path, capsys):
  path = write_matrix(tmp_path / "u.json", RatMatrix.of(UNDECIDED_ROWS))
  code, out, _ = run(capsys, ["analyze", "--input", path])
  assert code == 2
  assert json.loads(out)["verdict"] == "Undecided"


def test_analyze_linear_power(tmp_path, capsys):
  A = RatMatrix.identity(2).scale(-1)
  path = write_matrix(tmp_path / "neg.json", A)
  code, out, _ = run(capsys, ["analyze", "--input", path, "--k", "1"])
  assert code == 0
  payload = json.loads(out)
  assert payload["verdict"] == "NonProper"
  assert payload["k"] == 1


def test_analyze_rejects_unsupported_power(tmp_path, capsys):
  path = write_matrix(tmp_path / "m.json", RatMatrix.identity(2))
  code, _, err = run(capsys, ["analyze", "--input", path, "--k", "2"])
  assert code == 1
  assert "'k' must be 1 or 3" in err


def test_missing_input_file_exits_one(tmp_path, capsys):
  code, _, err = run(capsys, ["analyze", "--input", str(tmp_path / "no.json")])
  assert code == 1
  assert "cannot read input file" in err


def test_malformed_json_exits_one(tmp_path, capsys):
  path = tmp_path / "bad.json"
  path.write_text("{not json")
  code, _, err = run(capsys, ["analyze", "--input", str(path)])
  assert code == 1
  assert "malformed JSON" in err


def test_non_rational_entries_exit_one(tmp_path, capsys):
  path = tmp_path / "float.json"
  path.write_text(json.dumps({"m": 1, "rows": [[0.5]]}))
  code, _, err = run(capsys, ["analyze", "--input", str(path)])
  assert code == 1
  assert "entry (0,0)" in err


def test_usage_error_exits_one(capsys):
  code, _, err = run(capsys, ["analyze"])
  assert code == 1
  assert "error" in err


def test_druzkowski_shift_and_identity(tmp_path, capsys):
  path = write_matrix(tmp_path / "s.json", shift_5x5())
  code, out, _ = run(capsys, ["druzkowski", "--input", path])
  assert code == 0
  assert json.loads(out)["druzkowski"] is True
  path2 = write_matrix(tmp_path / "i.json", RatMatrix.identity(2))
  code, out, _ = run(capsys, ["druzkowski", "--input", path2])
  assert code == 0
  payload = json.loads(out)
  assert payload["druzkowski"] is False
  assert payload["counterexample"] is not None


def test_witness_from_certificate(tmp_path, capsys):
  A = golden_3x3()
  path = tmp_path / "cert.json"
  path.write_text(dumps(certificate_to_json(certify(A))))
  code, out, _ = run(capsys, ["witness", "--input", str(path)])
  assert code == 0
  payload = json.loads(out)
  assert payload["passed"] is True
  assert payload["gammas"][-1] == 1e6


def test_witness_schedule_override(tmp_path, capsys):
  A = golden_3x3()
  path = tmp_path / "cert.json"
  path.write_text(dumps(certificate_to_json(certify(A))))
  code, out, _ = run(capsys, ["witness", "--input", str(path),
                              "--schedule", "10,1000,100000"])
  assert code == 0
  assert json.loads(out)["gammas"] == [10.0, 1000.0, 100000.0]


def test_witness_from_matrix_and_recipe_payload(tmp_path, capsys):
  A = golden_3x3()
  recipe = certify(A).witness()
  path = tmp_path / "pair.json"
  path.write_text(dumps({"matrix": matrix_to_json(A),
                         "recipe": recipe_to_json(recipe)}))
  code, out, _ = run(capsys, ["witness", "--input", str(path)])
  assert code == 0
  assert json.loads(out)["passed"] is True


def test_witness_rejects_extra_fields(tmp_path, capsys):
  A = golden_3x3()
  recipe = certify(A).witness()
  path = tmp_path / "pair.json"
  path.write_text(dumps({"matrix": matrix_to_json(A),
                         "recipe": recipe_to_json(recipe),
                         "note": "hi"}))
  code, _, err = run(capsys, ["witness", "--input", str(path)])
  assert code == 1
  assert "unexpected field 'note'" in err


def test_witness_requires_a_recipe(tmp_path, capsys):
  path = tmp_path / "cert.json"
  path.write_text(dumps(certificate_to_json(certify(shift_5x5()))))
  code, _, err = run(capsys, ["witness", "--input", str(path)])
  assert code == 1
  assert "no witness recipe" in err


def test_witness_bad_schedule_exits_one(tmp_path, capsys):
  path = tmp_path / "cert.json"
  path.write_text(dumps(certificate_to_json(certify(golden_3x3()))))
  code, _, err = run(capsys, ["witness", "--input", str(path),
                              "--schedule", "100,10"])
  assert code == 1
  assert "--schedule" in err


def test_probe_growth_exits_zero(tmp_path, capsys):
  path = write_matrix(tmp_path / "i.json", RatMatrix.identity(2))
  code, out, _ = run(capsys, ["probe", "--input", path, "--seed", "3"])
  assert code == 0
  payload = json.loads(out)
  assert payload["classification"] == "GrowthObserved"
  assert payload["seed"] == 3


def test_probe_inconclusive_exits_two(tmp_path, capsys):
  # radii confined to a local pocket of the sphere-minimum curve: the
  # profile falls without ever looking bounded, so no trend is claimed
  A = RatMatrix.of([[-2, -3, 5], [0, -1, 1], [-2, -3, 5]])
  path = write_matrix(tmp_path / "p.json", A)
  code, out, _ = run(capsys, ["probe", "--input", path,
                              "--radii", "256,512,768,1024"])
  assert code == 2
  assert json.loads(out)["classification"] == "Inconclusive"


def test_probe_bad_radii_exits_one(tmp_path, capsys):
  path = write_matrix(tmp_path / "i.json", RatMatrix.identity(2))
  code, _, err = run(capsys, ["probe", "--input", path, "--radii", "4,2,1"])
  assert code == 1
  assert "--radii" in err


def test_forge_3x3_payload(capsys):
  code, out, _ = run(capsys, ["forge", "3x3"])
  assert code == 0
  payload = json.loads(out)
  assert payload["matrix"] == matrix_to_json(golden_3x3())
  assert payload["params"]["a11"] == "-1"


def test_forge_5x5_payload(capsys):
  code, out, _ = run(capsys, ["forge", "5x5"])
  assert code == 0
  assert json.loads(out)["matrix"] == matrix_to_json(shift_5x5())


def test_density_csv_output(capsys):
  code, out, _ = run(capsys, ["density", "--m", "2", "--r", "1",
                              "--trials", "3", "--seed", "5"])
  assert code == 0
  lines = out.splitlines()
  assert lines[0] == "seed,m,r,verdict,reason,millis"
  assert len(lines) == 4
  assert all(line.split(",")[1:3] == ["2", "1"] for line in lines[1:])


def test_signs_found_and_not_found(tmp_path, capsys):
  path = write_matrix(tmp_path / "s.json", shift_5x5())
  code, out, _ = run(capsys, ["signs", "--input", path])
  assert code == 0
  payload = json.loads(out)
  assert payload["found"] is True
  assert payload["global_sign"] == 1
  # planting a single negative entry into a strictly positive matrix kills
  # both global signs
  B = RatMatrix.of([[1, 2, 1], [2, 1, 1], [1, -1, 2]])
  path2 = write_matrix(tmp_path / "b.json", B)
  code, out, _ = run(capsys, ["signs", "--input", path2])
  assert code == 0
  assert json.loads(out) == {"found": False}


def test_out_flag_writes_the_same_bytes(tmp_path, capsys):
  path = write_matrix(tmp_path / "g.json", golden_3x3())
  code, out, _ = run(capsys, ["analyze", "--input", path])
  assert code == 0
  target = tmp_path / "cert.json"
  code2, out2, _ = run(capsys, ["analyze", "--input", path,
                                "--out", str(target)])
  assert code2 == 0
  assert out2 == ""
  assert target.read_text() == out


def test_reruns_are_byte_identical(tmp_path, capsys):
  path = write_matrix(tmp_path / "g.json", golden_3x3())
  outputs = set()
  for _ in range(2):
    _, out, _ = run(capsys, ["analyze", "--input", path])
    outputs.add(out)
  assert len(outputs) == 1
  for _ in range(2):
    _, out, _ = run(capsys, ["probe", "--input", path, "--seed", "1"])
    outputs.add(out)
  assert len(outputs) == 2
