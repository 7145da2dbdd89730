import io
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pdcoreset.cli import main, parse_angle
from pdcoreset.errors import ParseError
from pdcoreset.geometry import PointSet
from pdcoreset.io import read_labeled, read_points, write_labeled, write_points
from pdcoreset.maxmargin import LabeledPointSet


@pytest.fixture
def run(capsys):
    def _run(*argv):
        code = main([str(a) for a in argv])
        out, err = capsys.readouterr()
        return code, out, err

    return _run


def _csv(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return path


finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.lists(finite, min_size=3, max_size=3), min_size=1, max_size=10))
def test_round_trip_bit_identical(rows):
    P = PointSet(rows)
    again = read_points(io.StringIO(write_points(P)))
    assert again.points.tobytes() == P.points.tobytes()


def test_labeled_round_trip():
    L = LabeledPointSet([[0.1, 1 / 3], [-2.5, 1e-300]], [1, -1])
    again = read_labeled(io.StringIO(write_labeled(L)))
    assert again.labels == L.labels
    assert np.array_equal(again.points.points, L.points.points)


def test_header_and_comments():
    P = read_points(io.StringIO("x,y\n# note\n1,2\n\n3,4\n"))
    assert P.points.tolist() == [[1, 2], [3, 4]]


def test_parse_errors_carry_line_numbers():
    with pytest.raises(ParseError, match="line 3"):
        read_points(io.StringIO("1,2\n3,4\n5\n"))
    with pytest.raises(ParseError, match="line 2"):
        read_points(io.StringIO("1,2\n3,abc\n"))
    with pytest.raises(ParseError, match="line 2"):
        read_labeled(io.StringIO("1,2,1\n3,4,0\n"))
    with pytest.raises(ParseError):
        read_points(io.StringIO("x,y\n"))


@pytest.mark.parametrize(
    "text, expected",
    [("pi/3", math.pi / 3), ("pi", math.pi), ("2*pi/5", 2 * math.pi / 5), ("0.5", 0.5), ("1.5707963267948966", math.pi / 2)],
)
def test_parse_angle(text, expected):
    assert parse_angle(text) == pytest.approx(expected, rel=1e-15)


def test_distance_single_point(tmp_path, run):
    code, out, _ = run("distance", _csv(tmp_path, "p.csv", "3,4\n"), "--epsilon", "0.1")
    report = json.loads(out)
    assert code == 0 and report["norm"] == 5.0 and report["coreset_indices"] == [0]


def test_distance_orthogonal(tmp_path, run):
    code, out, _ = run("distance", _csv(tmp_path, "p.csv", "1,0\n0,1\n"), "--epsilon", "1e-6")
    report = json.loads(out)
    assert code == 0
    assert report["norm"] == pytest.approx(math.sqrt(2) / 2, abs=1e-6)
    assert report["size_bound"]["ok"]
    assert report["epsilon_hat"] <= 1e-6


def test_distance_origin_in_hull(tmp_path, run):
    code, _, err = run("distance", _csv(tmp_path, "p.csv", "1,0\n-1,0.5\n0,-1\n"))
    assert code == 3 and "OriginInsideHull" in err


def test_distance_iteration_limit(tmp_path, run):
    text = "1.39,2.74,1.04\n0.72,1.67,-0.09\n2.24,-0.59,-0.94\n2.3,-0.77,-0.78\n2.4,-1.16,-1.42\n"
    code, out, _ = run("distance", _csv(tmp_path, "p.csv", text), "--epsilon", "0.01", "--max-iterations", "1")
    assert code == 4 and json.loads(out)["converged"] is False


def test_distance_parse_error(tmp_path, run):
    code, _, err = run("distance", _csv(tmp_path, "p.csv", "1,0\n2\n"))
    assert code == 2 and "line 2" in err


def test_usage_and_parameter_errors(tmp_path, run):
    assert run("frobnicate")[0] == 1
    assert run("adversarial", "--theorem", "4", "--theta", "1")[0] == 1
    assert run("adversarial", "--theorem", "2", "--theta", "2")[0] == 2
    assert run("distance", _csv(tmp_path, "p.csv", "1,0\n"), "--epsilon", "1.5")[0] == 2
    assert run("stream", _csv(tmp_path, "q.csv", "1,0\n"), "--batch-size", "0")[0] == 2


@pytest.mark.parametrize(
    "theorem, theta, expected",
    [("2", "pi/3", 0.5), ("3", "pi/3", 1 / 3), ("2", "pi/2", 1.0)],
)
def test_adversarial(tmp_path, run, theorem, theta, expected):
    prefix = tmp_path / "inst" / "t"
    code, out, _ = run("adversarial", "--theorem", theorem, "--theta", theta, "--instance-prefix", prefix)
    report = json.loads(out)
    assert code == 0 and report["report"]["all_passed"]
    assert report["report"]["epsilons"]["4"] == pytest.approx(expected, abs=1e-12)
    points = read_points(prefix.with_suffix(".csv"))
    sidecar = json.loads(prefix.with_suffix(".json").read_text())
    assert np.array_equal(points.points, report["instance"]["points"])
    assert sidecar["partition"] == {"P1": [1, 2], "P2": [0]}


def test_stream_single_batch_identity(tmp_path, run):
    path = _csv(tmp_path, "p.csv", "1,0.2\n0.5,1\n2,2\n")
    code, out, _ = run("stream", path, "--batch-size", "10", "--strategy", "full", "--epsilon", "0.01")
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 2
    code2, out2, _ = run("distance", path, "--epsilon", "0.01")
    assert float(lines[1].split(",")[3]) == json.loads(out2)["epsilon_hat"]


def test_stream_json_and_output_file(tmp_path, run):
    path = _csv(tmp_path, "p.csv", "1,0.2\n0.5,1\n2,2\n1,1\n")
    dest = tmp_path / "report.json"
    code, out, _ = run("stream", path, "--batch-size", "2", "--strategy", "min-norm", "--format", "json", "--output", dest)
    assert code == 0 and out == ""
    report = json.loads(dest.read_text())
    assert [r["batch"] for r in report["records"]] == [0, 1]
    for r in report["records"]:
        assert r["measured_epsilon"] <= r["bound"] + 1e-9


def test_margin_commands(tmp_path, run):
    code, out, _ = run("margin", _csv(tmp_path, "a.csv", "0,1,1\n0,-1,-1\n"), "--epsilon", "1e-6")
    report = json.loads(out)
    assert code == 0 and report["margin"] == pytest.approx(1.0) and report["epsilon_hat"] == 0.0

    code, out, _ = run("margin", _csv(tmp_path, "b.csv", "1,1,1\n-1,1,1\n0,-1,-1\n"), "--epsilon", "1e-6")
    assert code == 0 and json.loads(out)["margin"] >= 1 - 1e-6

    code, _, err = run("margin", _csv(tmp_path, "c.csv", "1,0,1\n1,0,-1\n"))
    assert code == 3 and "NotSeparable" in err

    code, out, _ = run("margin", _csv(tmp_path, "d.csv", "4,0,1\n5,1,1\n2,0,-1\n1,1,-1\n"), "--lift", "1")
    report = json.loads(out)
    assert code == 0 and report["lift"]["rho"] == 1.0 and len(report["lift"]["w"]) == 2


def test_generate_is_deterministic(tmp_path, run):
    a = run("generate", "--kind", "separable", "--n", "30", "--dim", "3", "--seed", "11")[1]
    b = run("generate", "--kind", "separable", "--n", "30", "--dim", "3", "--seed", "11")[1]
    c = run("generate", "--kind", "separable", "--n", "30", "--dim", "3", "--seed", "12")[1]
    assert a == b and a != c
    lab = run("generate", "--kind", "labeled", "--n", "10", "--seed", "1")[1]
    assert len(read_labeled(io.StringIO(lab))) == 10


def test_reports_are_byte_identical(tmp_path, run):
    data = run("generate", "--kind", "cone", "--n", "25", "--dim", "3", "--seed", "3")[1]
    path = _csv(tmp_path, "p.csv", data)
    for argv in (
        ("distance", path, "--epsilon", "0.01"),
        ("stream", path, "--batch-size", "5", "--strategy", "rerun"),
        ("stream", path, "--batch-size", "5", "--strategy", "min-norm", "--format", "json"),
    ):
        first = run(*argv)
        assert first[0] == 0
        assert run(*argv) == first
