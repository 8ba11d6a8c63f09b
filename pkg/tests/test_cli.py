import json

import numpy as np
import pytest

from polyslice.cli import EXIT_FAIL, EXIT_INPUT, EXIT_OK, EXIT_UNDEFINED, REPORT_DIR_ENV, main
from polyslice.io import save_function, save_operator
from polyslice.operators import ParavectorOperator
from polyslice.poly_slice import PolySliceFunction
from polyslice.sampling import random_commuting_operator, random_poly_slice
from polyslice.slice_functions import IntrinsicElementary, SliceMonogenicPoly

REPORT_KEYS = {"suite", "timestamp", "seed", "checks", "summary"}
CHECK_KEYS = {"identity", "params", "params_digest", "residual", "tolerance", "pass", "asserted", "bound"}


@pytest.fixture
def reports(tmp_path, monkeypatch):
    out = tmp_path / "reports"
    monkeypatch.setenv(REPORT_DIR_ENV, str(out))
    return out


def _op(tmp_path, name, entries):
    path = tmp_path / name
    save_operator(entries if isinstance(entries, ParavectorOperator)
                  else ParavectorOperator(entries[0], np.asarray(entries[1], float)), path)
    return str(path)


def _stdout_json(capsys):
    return json.loads(capsys.readouterr().out)


def test_verify_filter_runs_only_selected_suite(reports, capsys):
    assert main(["verify", "--suite", "resolvent", "--seed", "3"]) == EXIT_OK
    files = sorted(p.name for p in reports.iterdir())
    assert files == ["verify_resolvent.json"]
    doc = json.loads((reports / "verify_resolvent.json").read_text())
    assert REPORT_KEYS <= set(doc)
    assert doc["seed"] == 3 and doc["suite"] == "resolvent"
    assert all(set(c) == CHECK_KEYS for c in doc["checks"])
    assert doc["summary"]["failed"] == 0
    assert "PASS resolvent" in capsys.readouterr().out


def test_verify_is_deterministic(reports):
    residuals = []
    for _ in range(2):
        assert main(["verify", "--suite", "kernels", "--suite", "series", "--seed", "11"]) == EXIT_OK
        docs = [json.loads((reports / f"verify_{s}.json").read_text()) for s in ("kernels", "series")]
        residuals.append([[c["residual"] for c in d["checks"]] for d in docs])
    assert residuals[0] == residuals[1]


def test_verify_failing_tolerance_exits_one(tmp_path, reports):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"suites": {"resolvent": {"count": 2, "tolerances": {"one_variable": 1e-300}}}}))
    assert main(["verify", "--suite", "resolvent", "--config", str(cfg)]) == EXIT_FAIL
    doc = json.loads((reports / "verify_resolvent.json").read_text())
    assert doc["summary"]["failed"] > 0


def test_verify_corrupted_operator_file_exits_two(tmp_path, reports, capsys):
    (tmp_path / "op.json").write_text('{"n": 2, "m": 1, "components": [[[1.0]]')
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"operators": ["op.json"], "suites": {"clifford": {}}}))
    assert main(["verify", "--suite", "clifford", "--config", str(cfg)]) == EXIT_INPUT
    assert "not valid JSON" in capsys.readouterr().err


def test_verify_with_operator_file(tmp_path, reports):
    T = random_commuting_operator(np.random.default_rng(0), 2, 2)
    save_operator(T, tmp_path / "op.json")
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"operators": ["op.json"]}))
    assert main(["verify", "--suite", "clifford", "--config", str(cfg)]) == EXIT_OK
    assert (reports / "verify_operator_files.json").exists()


def test_verify_bad_config_exits_two(tmp_path, reports):
    cfg = tmp_path / "cfg.json"
    cfg.write_text("{")
    assert main(["verify", "--config", str(cfg)]) == EXIT_INPUT


def test_spectrum_paravector(tmp_path, capsys):
    op = _op(tmp_path, "q.json", (2, [[[1.0]], [[2.0]], [[0.0]]]))
    out = tmp_path / "spec.json"
    assert main(["spectrum", "--op", op, "--out", str(out)]) == EXIT_OK
    doc = json.loads(out.read_text())
    assert doc == _stdout_json(capsys)
    (u, v, r), = doc["points"]
    assert abs(u - 1.0) < 1e-6 and abs(v - 2.0) < 1e-6 and r < 1e-8


def test_spectrum_zero_and_diagonal(tmp_path, capsys):
    op = _op(tmp_path, "z.json", ParavectorOperator.zero(2, 2))
    assert main(["spectrum", "--op", op]) == EXIT_OK
    assert _stdout_json(capsys)["points"] == [[0.0, 0.0, 0.0]]
    comps = np.zeros((3, 2, 2))
    comps[0] = np.diag([1.0, 3.0])
    op = _op(tmp_path, "d.json", ParavectorOperator(2, comps))
    assert main(["spectrum", "--op", op, "--window=-4,4,4"]) == EXIT_OK
    pts = np.array(_stdout_json(capsys)["points"])
    assert np.allclose(pts[:, :2], [[1, 0], [3, 0]], atol=1e-6)


def test_spectrum_bad_window(tmp_path):
    op = _op(tmp_path, "z.json", ParavectorOperator.zero(2, 1))
    assert main(["spectrum", "--op", op, "--window", "1,2"]) == EXIT_INPUT
    assert main(["spectrum", "--op", op, "--window", "a,b,c"]) == EXIT_INPUT


def test_calc_conjugate_function(tmp_path, capsys):
    T = random_commuting_operator(np.random.default_rng(1), 2, 2)
    op = _op(tmp_path, "t.json", T)
    fn = tmp_path / "f.json"
    save_function(PolySliceFunction("L", (SliceMonogenicPoly.real("L", 2, [0.0]),
                                          SliceMonogenicPoly.real("L", 2, [1.0]))), fn)
    for method in ("I", "II", "series"):
        assert main(["calc", "--op", op, "--fn", str(fn), "--method", method]) == EXIT_OK
        doc = _stdout_json(capsys)
        assert np.linalg.norm(np.array(doc["realrep"]) - T.lifted_conj, 2) < 1e-8
        assert all(v < 1e-8 for v in doc["differences"].values())


def test_calc_random_poly_function_methods_agree(tmp_path, capsys):
    rng = np.random.default_rng(2)
    op = _op(tmp_path, "t.json", random_commuting_operator(rng, 3, 2))
    fn = tmp_path / "f.json"
    save_function(random_poly_slice(rng, "R", 3, 3, 3), fn)
    assert main(["calc", "--op", op, "--fn", str(fn), "--j", "0,1,1", "--radius", "2.5"]) == EXIT_OK
    doc = _stdout_json(capsys)
    assert max(doc["differences"].values()) < 1e-8
    assert doc["contour"]["radius"] == 2.5


def test_calc_series_unsupported(tmp_path, capsys):
    op = _op(tmp_path, "t.json", ParavectorOperator.zero(2, 1))
    fn = tmp_path / "f.json"
    save_function(IntrinsicElementary("exp", "L", 2), fn)
    assert main(["calc", "--op", op, "--fn", str(fn), "--method", "series"]) == EXIT_UNDEFINED
    assert "UnsupportedRepresentationError" in capsys.readouterr().err
    assert main(["calc", "--op", op, "--fn", str(fn)]) == EXIT_OK
    assert _stdout_json(capsys)["differences"]["series"] is None


def test_calc_contour_missing_spectrum(tmp_path):
    comps = np.zeros((3, 1, 1))
    comps[0] = 3.0
    op = _op(tmp_path, "t.json", ParavectorOperator(2, comps))
    fn = tmp_path / "f.json"
    save_function(SliceMonogenicPoly.real("L", 2, [1.0]), fn)
    assert main(["calc", "--op", op, "--fn", str(fn), "--radius", "2"]) == EXIT_UNDEFINED


def test_calc_dimension_mismatch(tmp_path):
    op = _op(tmp_path, "t.json", ParavectorOperator.zero(3, 1))
    fn = tmp_path / "f.json"
    save_function(SliceMonogenicPoly.real("L", 2, [1.0]), fn)
    assert main(["calc", "--op", op, "--fn", str(fn)]) == EXIT_INPUT


def test_kernel_examples(capsys):
    assert main(["kernel", "--kind", "SL", "--s", "2", "--x", "0"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out) == [0.5, 0.0, 0.0, 0.0]
    args = ["--s", "1,2,-1", "--x", "0.3,0.3,0.5"]
    assert main(["kernel", "--kind", "SL", *args]) == EXIT_OK
    sl = json.loads(capsys.readouterr().out)
    assert main(["kernel", "--kind", "Pi", "--ell", "0", *args]) == EXIT_OK
    assert np.allclose(json.loads(capsys.readouterr().out), sl, atol=1e-15)
    assert main(["kernel", "--kind", "P", "--ell", "1", *args]) == EXIT_OK
    p1 = json.loads(capsys.readouterr().out)
    assert main(["kernel", "--kind", "Pi", "--ell", "1", *args]) == EXIT_OK
    pi1 = json.loads(capsys.readouterr().out)
    assert np.linalg.norm(np.subtract(p1, pi1)) > 1e-3


def test_kernel_complex_and_errors(capsys):
    assert main(["kernel", "--kind", "pi", "--ell", "2", "--s=-1,0.2", "--x", "0.3,0.4"]) == EXIT_OK
    val = json.loads(capsys.readouterr().out)
    assert np.allclose(val, [-0.5898843930635838, 0.2907514450867052, 0.0, 0.0], atol=1e-14)
    assert main(["kernel", "--kind", "SL", "--s", "1,1", "--x", "1,0,1"]) == EXIT_UNDEFINED
    assert main(["kernel", "--kind", "SL", "--s", "1,x", "--x", "0"]) == EXIT_INPUT


def test_unknown_subcommand_is_rejected():
    with pytest.raises(SystemExit):
        main(["frobnicate"])
