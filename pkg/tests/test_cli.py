"""Command-line surface: exit codes, report documents, and file formats."""

import json
import math
from pathlib import Path

import numpy as np
import pytest

from padefit.cli import format_points, main, read_points
from padefit.datagen import sin2pi, uniform_grid
from padefit.rational import RationalModel
from padefit.weibull import median_ranks

DATA = Path(__file__).resolve().parent.parent / "data"
TABLE1 = str(DATA / "table1.csv")


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def sin21(tmp_path):
    x = uniform_grid(0.0, 1.0, 20)
    path = tmp_path / "sin21.csv"
    path.write_text(format_points(x, sin2pi(x)))
    return str(path)


@pytest.fixture
def collinear(tmp_path):
    path = tmp_path / "line.csv"
    path.write_text(format_points([0.0, 1.0, 2.0], [1.0, 3.0, 5.0]))
    return str(path)


# -- fit ---------------------------------------------------------------------


def test_fit_collinear_line_is_exact(capsys, collinear):
    code, out, _ = run(capsys, ["fit", collinear, "--n", "1", "--m", "0"])
    assert code == 0
    doc = json.loads(out)
    assert doc["metrics"]["s"] <= 1e-18
    assert doc["config"]["n"] == 1 and doc["config"]["m"] == 0
    assert doc["poles"]["count"] == 0


def test_fit_table1_cdf_unregularized(capsys):
    code, out, _ = run(
        capsys,
        ["fit", TABLE1, "--form", "cdf", "--n", "6", "--m", "0", "--l", "12"],
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["metrics"]["d"] == pytest.approx(0.023660672851119967, rel=1e-9)
    assert doc["poles"]["count"] >= 1
    assert doc["config"]["form"] == "cdf"


def test_fit_missing_file(capsys, tmp_path):
    code, out, err = run(capsys, ["fit", str(tmp_path / "nope.csv"), "--n", "1", "--m", "0"])
    assert code == 1
    assert out == ""
    assert err != ""


def test_fit_bad_header(capsys, tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a,b\n1,2\n")
    code, out, _ = run(capsys, ["fit", str(path), "--n", "1", "--m", "0"])
    assert code == 1
    assert out == ""


def test_fit_too_few_points_is_fit_failure(capsys, collinear):
    code, out, err = run(capsys, ["fit", collinear, "--n", "5", "--m", "0"])
    assert code == 2
    assert out == ""
    assert "InsufficientData" in err


def test_fit_cdf_requires_tail_power(capsys, collinear):
    code, _, err = run(capsys, ["fit", collinear, "--form", "cdf", "--n", "2", "--m", "0"])
    assert code == 1
    assert "--l" in err


def test_fit_exact_fn_enables_truth_metrics(capsys, sin21):
    code, out, _ = run(
        capsys,
        ["fit", sin21, "--n", "5", "--m", "2", "--exact-fn", "sin"],
    )
    assert code == 0
    doc = json.loads(out)
    # noiseless samples: data-to-truth error is exactly zero
    assert doc["metrics"]["d0"] == 0.0
    assert doc["metrics"]["d1"] is not None


def test_fit_unknown_exact_fn(capsys, sin21):
    code, _, err = run(capsys, ["fit", sin21, "--n", "2", "--m", "0", "--exact-fn", "cosine"])
    assert code == 1
    assert "cosine" in err


# -- interpolate ---------------------------------------------------------------


def test_interpolate_every_second_point(capsys, sin21):
    code, out, _ = run(
        capsys,
        ["interpolate", sin21, "--n", "8", "--m", "2",
         "--zero-mask", "0,8", "--refs", "every-second-point"],
    )
    assert code == 0
    doc = json.loads(out)
    assert len(doc["reference_points"]) == 11
    assert doc["metrics"]["d"] <= 1e-4


def test_interpolate_group_size_and_anchors(capsys, tmp_path):
    x = np.linspace(0.0, 1.0, 47)
    path = tmp_path / "sin47.csv"
    path.write_text(format_points(x, sin2pi(x)))
    code, out, _ = run(
        capsys,
        ["interpolate", str(path), "--n", "8", "--m", "2", "--zero-mask", "0,8",
         "--group-size", "5", "--anchors", "0,0;1,0"],
    )
    assert code == 0
    doc = json.loads(out)
    assert len(doc["reference_points"]) == 11
    refs_x = [p[0] for p in doc["reference_points"]]
    assert refs_x == sorted(refs_x)
    assert 0.0 in refs_x and 1.0 in refs_x


def test_interpolate_ref_count_mismatch(capsys, sin21, tmp_path):
    refs = tmp_path / "refs3.csv"
    refs.write_text(format_points([0.0, 0.5, 1.0], [0.0, 1.0, 0.0]))
    code, out, err = run(
        capsys, ["interpolate", sin21, "--n", "8", "--m", "2", "--refs", str(refs)]
    )
    assert code == 1
    assert out == ""
    assert "CountMismatch" in err


def test_interpolate_needs_one_ref_source(capsys, sin21):
    code, _, _ = run(capsys, ["interpolate", sin21, "--n", "2", "--m", "0"])
    assert code == 1
    code, _, _ = run(
        capsys,
        ["interpolate", sin21, "--n", "2", "--m", "0",
         "--refs", "every-second-point", "--group-size", "3"],
    )
    assert code == 1


# -- search --------------------------------------------------------------------


def test_search_single_cell_matches_fit(capsys):
    code_s, out_s, _ = run(
        capsys,
        ["search", TABLE1, "--form", "cdf", "--n-range", "6:6",
         "--m-range", "0:0", "--l-list", "12"],
    )
    code_f, out_f, _ = run(
        capsys,
        ["fit", TABLE1, "--form", "cdf", "--n", "6", "--m", "0", "--l", "12"],
    )
    assert code_s == 0 and code_f == 0
    doc_s, doc_f = json.loads(out_s), json.loads(out_f)
    assert len(doc_s["candidates"]) == 1
    assert doc_s["model"] == doc_f["model"]
    # fit fills d_der from its default grid; search ranks on s and leaves it unset
    assert doc_s["metrics"] == dict(doc_f["metrics"], d_der=None)


def test_search_table_covers_all_cells(capsys):
    code, out, _ = run(
        capsys,
        ["search", TABLE1, "--form", "cdf", "--n-range", "2:8",
         "--m-range", "0:0", "--l-list", "8,10,12"],
    )
    assert code == 0
    doc = json.loads(out)
    assert len(doc["candidates"]) == 7 * 1 * 3
    assert doc["metrics"]["d"] <= 0.032
    assert doc["poles"]["count"] == 0


# -- sweep ---------------------------------------------------------------------


def test_sweep_reports_rows_and_choice(capsys):
    code, out, _ = run(
        capsys,
        ["sweep", TABLE1, "--form", "cdf", "--n", "6", "--m", "0", "--l", "12",
         "--lambda-grid", "0,0.0005,0.001,0.002,0.0025,0.005,0.01",
         "--der-interval", "0:2", "--der-points", "40"],
    )
    assert code == 0
    doc = json.loads(out)
    assert len(doc["sweep"]["rows"]) == 7
    assert 0.002 <= doc["sweep"]["chosen_lambda"] <= 0.005
    # the echoed config carries the chosen weight, so the report re-runs as-is
    assert doc["config"]["lambda"] == doc["sweep"]["chosen_lambda"]


# -- eval ----------------------------------------------------------------------


def test_eval_constant_model(capsys, tmp_path):
    model = RationalModel(numer=(3.0,), denom=())
    path = tmp_path / "const.json"
    path.write_text(json.dumps(model.to_dict()))
    code, out, _ = run(capsys, ["eval", "--model", str(path), "--points", "0:1:5"])
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "x,r,dr"
    assert len(lines) == 6
    for line in lines[1:]:
        _, r, dr = line.split(",")
        assert float(r) == 3.0
        assert float(dr) == 0.0


def test_eval_regularized_fit_is_monotone(capsys, tmp_path):
    report = tmp_path / "fit.json"
    code, _, _ = run(
        capsys,
        ["fit", TABLE1, "--form", "cdf", "--n", "6", "--m", "0", "--l", "12",
         "--lambda", "0.0025", "--out", str(report)],
    )
    assert code == 0
    code, out, _ = run(capsys, ["eval", "--model", str(report), "--points", "0:2:200"])
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 201
    r = np.array([float(line.split(",")[1]) for line in lines[1:]])
    assert np.all(np.diff(r) >= 0.0)


def test_eval_round_trip_reproduces_s(capsys, tmp_path):
    report_path = tmp_path / "fit.json"
    run(
        capsys,
        ["fit", TABLE1, "--form", "cdf", "--n", "6", "--m", "0", "--l", "12",
         "--lambda", "0.0025", "--out", str(report_path)],
    )
    code, out, _ = run(capsys, ["eval", "--model", str(report_path), "--points-file", TABLE1])
    assert code == 0
    x, f = read_points(TABLE1)
    r = np.array([float(line.split(",")[1]) for line in out.strip().splitlines()[1:]])
    s_again = float(np.sum((r - f) ** 2))
    s_reported = json.loads(report_path.read_text())["metrics"]["s"]
    assert abs(s_again - s_reported) <= 1e-12 * max(1.0, s_reported)


def test_eval_needs_one_grid_source(capsys, tmp_path):
    model = tmp_path / "m.json"
    model.write_text(json.dumps(RationalModel(numer=(1.0,), denom=()).to_dict()))
    code, _, _ = run(capsys, ["eval", "--model", str(model)])
    assert code == 1
    code, _, _ = run(
        capsys,
        ["eval", "--model", str(model), "--points", "0:1:5", "--points-file", TABLE1],
    )
    assert code == 1


def test_eval_rejects_non_model_file(capsys, tmp_path):
    path = tmp_path / "junk.json"
    path.write_text('{"hello": "world"}')
    code, _, err = run(capsys, ["eval", "--model", str(path), "--points", "0:1:5"])
    assert code == 1
    assert err != ""


# -- generate ------------------------------------------------------------------


def test_generate_weibull_ranks_are_median_ranks(capsys):
    code, out, _ = run(
        capsys,
        ["generate", "--fn", "weibull", "--theta", "1", "--beta", "2",
         "--count", "10", "--seed", "5"],
    )
    assert code == 0
    rows = [tuple(map(float, line.split(","))) for line in out.strip().splitlines()[1:]]
    times = np.array([r[0] for r in rows])
    ranks = np.array([r[1] for r in rows])
    np.testing.assert_array_equal(ranks, median_ranks(10, 0.3))
    assert np.all(np.diff(times) > 0.0)


def test_generate_sigma_zero_is_exact(capsys):
    code, out, _ = run(capsys, ["generate", "--fn", "sin", "--grid", "0:1:10", "--sigma", "0"])
    assert code == 0
    x, y = zip(*[tuple(map(float, line.split(","))) for line in out.strip().splitlines()[1:]])
    np.testing.assert_array_equal(np.array(y), sin2pi(np.array(x)))


def test_generate_same_seed_byte_identical(capsys):
    argv = ["generate", "--fn", "sqrtexp", "--grid", "0:2:10", "--sigma", "0.1", "--seed", "42"]
    _, first, _ = run(capsys, argv)
    _, second, _ = run(capsys, argv)
    assert first == second


def test_generate_flag_validation(capsys):
    code, _, _ = run(capsys, ["generate", "--fn", "weibull"])
    assert code == 1
    code, _, _ = run(capsys, ["generate", "--fn", "sin"])
    assert code == 1


# -- shared plumbing -----------------------------------------------------------


def test_version_and_help_exit_zero(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    with pytest.raises(SystemExit) as exc:
        main(["fit", "--help"])
    assert exc.value.code == 0
    capsys.readouterr()


def test_point_file_round_trip(tmp_path):
    x = [1.0 / 3.0, 1e-17, 6.02e23, -0.1]
    y = [math.pi, -1e-300, 2.0 ** -52, 0.0]
    path = tmp_path / "rt.csv"
    path.write_text(format_points(x, y))
    rx, ry = read_points(str(path))
    np.testing.assert_array_equal(rx, np.array(x))
    np.testing.assert_array_equal(ry, np.array(y))


def test_point_file_crlf(capsys, tmp_path):
    path = tmp_path / "crlf.csv"
    path.write_bytes(b"x,y\r\n0.0,1.0\r\n1.0,3.0\r\n2.0,5.0\r\n")
    code, out, _ = run(capsys, ["fit", str(path), "--n", "1", "--m", "0"])
    assert code == 0
    assert json.loads(out)["metrics"]["s"] <= 1e-18
