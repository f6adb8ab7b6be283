import json

import numpy as np
import pytest

from qae.cli import main, summarize
from qae.mmio import save_matrix
from qae.records import RunRecord
from qae.reference import eigh_reference

from conftest import random_symmetric


@pytest.fixture
def diag123(tmp_path):
    path = tmp_path / "diag123.mtx"
    save_matrix(path, np.diag([1.0, 2.0, 3.0]))
    return str(path)


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    lines = [ln for ln in out.out.splitlines() if ln.strip()]
    return code, [json.loads(ln) for ln in lines], out.err


def strip_time(d):
    d = dict(d)
    d.pop("wall_time")
    return d


def test_solve_check(capsys, diag123):
    code, recs, err = run(capsys, "solve", diag123, "--qubits", 10, "--solver", "exact-decomposed", "--check")
    assert code == 0
    rec = RunRecord.from_dict(recs[0])
    assert abs(rec.errors[0]) <= 0.02
    assert rec.errors[0] == rec.eigenpairs[0]["value"] - rec.reference[0]
    assert "error" in err


def test_solve_zero_matrix_exits_3(capsys, tmp_path):
    path = tmp_path / "zero.mtx"
    path.write_text("%%MatrixMarket matrix coordinate real symmetric\n1 1 0\n")
    code, recs, err = run(capsys, "solve", path)
    assert code == 3
    assert "ZeroMatrix" in err
    assert recs == []


def test_solve_is_deterministic(capsys, diag123):
    _, a, _ = run(capsys, "solve", diag123, "--seed", 5)
    _, b, _ = run(capsys, "solve", diag123, "--seed", 5)
    assert json.dumps(strip_time(a[0])) == json.dumps(strip_time(b[0]))


def test_parse_error_exits_2(capsys, tmp_path):
    path = tmp_path / "bad.mtx"
    path.write_text("not a matrix\n")
    assert run(capsys, "solve", path)[0] == 2
    assert run(capsys, "solve", tmp_path / "missing.mtx")[0] == 2


def test_unknown_flag_exits_2(diag123):
    with pytest.raises(SystemExit) as exc:
        main(["solve", diag123, "--bogus"])
    assert exc.value.code == 2


def test_exact_solver_too_large_exits_3(capsys, diag123):
    assert run(capsys, "solve", diag123, "--solver", "exact")[0] == 3


def test_spectrum_transitions(capsys, diag123):
    code, recs, _ = run(capsys, "spectrum", diag123, "--states", 3, "--solver", "exact-decomposed", "--check")
    assert code == 0
    t = recs[0]["transitions"]
    assert t == pytest.approx([1.0, 2.0], abs=0.04)


def test_spectrum_one_state_matches_solve(capsys, diag123):
    _, a, _ = run(capsys, "solve", diag123)
    _, b, _ = run(capsys, "spectrum", diag123, "--states", 1)
    assert a[0]["eigenpairs"] == b[0]["eigenpairs"]


def test_spectrum_too_many_states(capsys, diag123):
    assert run(capsys, "spectrum", diag123, "--states", 4)[0] == 2


def test_out_file(capsys, diag123, tmp_path):
    out = tmp_path / "rec.jsonl"
    _, recs, _ = run(capsys, "solve", diag123, "--out", out)
    assert json.loads(out.read_text()) == recs[0]


def test_curve_scaling(capsys, tmp_path):
    rng = np.random.default_rng(8)
    a = random_symmetric(rng, 3)
    lines = []
    for c in (1, 2, 3):
        save_matrix(tmp_path / f"c{c}.mtx", c * a)
        lines.append(f"c{c} c{c}.mtx")
    manifest = tmp_path / "curve.txt"
    manifest.write_text("# geometry scan\n" + "\n".join(lines) + "\n")
    code, recs, err = run(capsys, "curve", manifest)
    assert code == 0
    assert [r["label"] for r in recs] == ["c1", "c2", "c3"]
    lam = eigh_reference(a).values[0]
    for c, r in zip((1, 2, 3), recs):
        assert r["eigenpairs"][0]["value"] == pytest.approx(c * lam, abs=0.01 * c)
        assert r["errors"][0] == r["eigenpairs"][0]["value"] - r["reference"][0]


def test_curve_empty_manifest(capsys, tmp_path):
    manifest = tmp_path / "empty.txt"
    manifest.write_text("")
    code, recs, _ = run(capsys, "curve", manifest)
    assert code == 0 and recs == []


def test_curve_missing_row(capsys, tmp_path):
    save_matrix(tmp_path / "ok.mtx", np.diag([1.0, -1.0]))
    manifest = tmp_path / "m.txt"
    manifest.write_text("good ok.mtx\nbad nowhere.mtx\n")
    code, recs, err = run(capsys, "curve", manifest)
    assert code != 0
    assert [r["label"] for r in recs] == ["good"]
    assert "bad" in err and "ERROR" in err


def test_curve_parallel_matches_serial(capsys, tmp_path):
    for c in (1, 2):
        save_matrix(tmp_path / f"m{c}.mtx", c * np.diag([1.0, -0.5, 0.25]))
    manifest = tmp_path / "m.txt"
    manifest.write_text("a m1.mtx\nb m2.mtx\n")
    _, serial, _ = run(capsys, "curve", manifest)
    _, par, _ = run(capsys, "curve", manifest, "--jobs", 2)
    assert [strip_time(r) for r in serial] == [strip_time(r) for r in par]


def test_kscan_rows(capsys, diag123):
    code, recs, _ = run(capsys, "kscan", diag123, "--k-min", 2, "--k-max", 14, "--solver", "exact-decomposed")
    assert code == 0
    assert [r["config"]["K"] for r in recs] == list(range(2, 15))
    # e1 is a code word at every K, so a diagonal matrix is solved exactly
    assert all(r["errors"][0] == 0.0 for r in recs)


def test_kscan_error_drops_with_k(capsys, tmp_path):
    c, s = np.cos(0.3), np.sin(0.3)
    R = np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
    path = tmp_path / "rot.mtx"
    save_matrix(path, R @ np.diag([1.0, 2.0, 3.0]) @ R.T)
    code, recs, _ = run(capsys, "kscan", path, "--k-min", 2, "--k-max", 10, "--solver", "exact-decomposed")
    assert code == 0 and len(recs) == 9
    err = {r["config"]["K"]: r["errors"][0] for r in recs}
    assert err[2] > err[10] >= -1e-12


def test_kscan_validation(capsys, diag123):
    assert run(capsys, "kscan", diag123, "--k-min", 5, "--k-max", 4)[0] == 2


def test_stats_exact_is_noise_free(capsys, tmp_path):
    path = tmp_path / "h2.mtx"
    save_matrix(path, np.array([[-1.1, 0.2], [0.2, -0.4]]))
    code, recs, _ = run(capsys, "stats", path, "--runs", 10, "--solver", "exact")
    assert code == 0
    summary = recs[-1]
    assert summary["command"] == "stats-summary"
    assert len(recs) == 11
    assert summary["std"] <= 1e-12


def test_stats_validation_and_single_run(capsys, diag123):
    assert run(capsys, "stats", diag123, "--runs", 0)[0] == 2
    code, recs, _ = run(capsys, "stats", diag123, "--runs", 1)
    assert recs[-1]["std"] == 0.0


def test_summarize():
    s = summarize([1.0, 3.0])
    assert s == {"mean": 2.0, "std": 1.0, "min": 1.0, "max": 3.0}


def test_checkpoint_resume_via_cli(capsys, tmp_path, diag123):
    ck = tmp_path / "run.ckpt"
    _, a, _ = run(capsys, "spectrum", diag123, "--states", 2, "--checkpoint", ck)
    assert ck.exists()
    # a finished checkpoint replays to the same answer
    _, b, _ = run(capsys, "spectrum", diag123, "--states", 2, "--checkpoint", ck)
    assert a[0]["eigenpairs"] == b[0]["eigenpairs"]
    # a checkpoint for another configuration is refused
    assert run(capsys, "spectrum", diag123, "--states", 2, "--checkpoint", ck, "--qubits", 8)[0] == 2
