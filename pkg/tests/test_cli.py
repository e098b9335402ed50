import json

import pytest

from hahnauto import arithmetic as ar
from hahnauto.cli import main
from hahnauto.encoding import AutomaticSeries, from_finite_series
from hahnauto.fields import GF
from hahnauto.parse import OutputSpec, format_dfao, parse_dfao

from _support import loop_down, loop_up, px


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(path, M, field):
    path.write_text(format_dfao(M, OutputSpec(field=field)))
    return str(path)


def test_decide_examples(capsys):
    code, out, _ = run(capsys, "decide", "--p", "2", "--field", "F2", "X^2 - t")
    assert code == 0 and "verdict: YES" in out and "1/2" in out
    code, out, _ = run(capsys, "decide", "--p", "3", "--field", "F3", "X^2 - t")
    assert code == 1 and "verdict: NO" in out and "oracle count: 0" in out
    code, out, _ = run(capsys, "decide", "--p", "3", "--field", "F3", "--m", "2", "X^2 - t^3")
    assert code == 0 and "3/2" in out


def test_decide_value_set(capsys):
    assert run(capsys, "decide", "--p", "3", "--V", "2", "X^2 - t^3")[0] == 0
    assert run(capsys, "decide", "--p", "3", "--V", "", "X^2 - t^3")[0] == 1


def test_undecided_exit_code(capsys):
    code, out, _ = run(capsys, "decide", "--p", "3", "--max-states", "2", "X^3 - X - t")
    assert code == 2 and "cap hit" in out


def test_json_is_deterministic(capsys):
    argv = ["--format", "json", "decide", "--p", "3", "X^3 - X - t"]
    code, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert code == 0 and first == second
    record = json.loads(first)
    assert record["verdict"] == "YES" and record["oracle_count"] == 3 and record["roots_found"] == 3
    assert list(record) == sorted(record)


def test_witness_file_round_trips(tmp_path, capsys):
    path = tmp_path / "w.dfao"
    code, out, _ = run(capsys, "decide", "--p", "2", "--witness", str(path), "X^2 - X - t")
    assert code == 0 and str(path) in out
    M, spec = parse_dfao(path.read_text())
    x = AutomaticSeries(M, spec.field)
    assert format_dfao(M, spec) == path.read_text()
    assert ar.is_zero(ar.evaluate_polynomial(px(spec.field, "X^2 - X - t"), x))


def test_bound_and_envelope(capsys):
    code, out, _ = run(capsys, "bound", "--p", "3", "X^2 - t^3")
    assert code == 0 and out.startswith("m = 2")
    assert run(capsys, "bound", "--p", "2", "X - t")[1].startswith("m = 1")
    code, out, _ = run(capsys, "envelope", "--p", "3", "X^3 - t^3*X")
    assert code == 0 and "breakpoints: 3/2" in out
    code, out, _ = run(capsys, "envelope", "--p", "3", "--ore", "X^2 - t^3")
    assert "breakpoints: 3/2" in out
    code, out, _ = run(capsys, "--format", "json", "ore", "--p", "3", "X^2 - t^3")
    assert json.loads(out)["indices"] == [0, 1]


@pytest.mark.parametrize(
    "argv,code",
    [
        (["decide", "--p", "4", "X - t"], 3),
        (["decide", "--p", "3", "--m", "3", "X - t"], 3),
        (["decide", "--p", "3", "--max-states", "0", "X - t"], 3),
        (["frobnicate"], 3),
        (["decide", "--p", "3", "X^2 + + t"], 4),
        (["decide", "--p", "3", "2X - t"], 4),
        (["envelope", "--p", "3", "X^2 - t"], 3),
        (["decide", "--p", "3", "--base", "F6", "X - t"], 4),
    ],
)
def test_error_exit_codes(capsys, argv, code):
    try:
        got = main(argv)
    except SystemExit as exc:
        got = exc.code
    assert got == code
    assert "error" in capsys.readouterr().err


def test_parse_error_shows_position(capsys):
    code, _, err = run(capsys, "decide", "--p", "3", "X^2 + + t")
    assert code == 4 and "column 7" in err and "^" in err


def test_dfao_algebra(tmp_path, capsys):
    F = GF(3)
    x = from_finite_series([(1, 1), (2, 2)], F, 3)
    y = loop_up(3, F)
    fx, fy = write(tmp_path / "x.dfao", x.dfao, F), write(tmp_path / "y.dfao", y.dfao, F)
    out_path = tmp_path / "sum.dfao"
    assert run(capsys, "dfao", "add", fx, fy, "-o", str(out_path))[0] == 0
    M, spec = parse_dfao(out_path.read_text())
    assert ar.equals(AutomaticSeries(M, spec.field), ar.add(x, y))
    code, out, _ = run(capsys, "dfao", "mul", fx, fy)
    M, spec = parse_dfao(out)
    assert ar.equals(AutomaticSeries(M, spec.field), ar.multiply(x, y))
    assert run(capsys, "dfao", "eq", fx, fx)[:2] == (0, "true\n")
    assert run(capsys, "dfao", "eq", fx, fy)[:2] == (1, "false\n")


def test_dfao_zero_of_difference(tmp_path, capsys):
    F = GF(3)
    x = loop_up(3, F)
    fx = write(tmp_path / "x.dfao", x.dfao, F)
    neg = write(tmp_path / "neg.dfao", ar.scalar_mul(-1, x).dfao, F)
    diff = tmp_path / "d.dfao"
    run(capsys, "dfao", "add", fx, neg, "-o", str(diff))
    assert run(capsys, "dfao", "zero", str(diff))[:2] == (0, "true\n")
    assert run(capsys, "dfao", "zero", fx)[:2] == (1, "false\n")


def test_dfao_support_validate_dot(tmp_path, capsys):
    F = GF(2)
    loop = write(tmp_path / "loop.dfao", loop_up(2, F).dfao, F)
    code, out, _ = run(capsys, "--format", "json", "dfao", "support", "-k", "3", loop)
    assert json.loads(out)["terms"] == [["1/2", "1"], ["3/4", "1"], ["7/8", "1"]]
    down = write(tmp_path / "down.dfao", loop_down(2, F), F)
    code, out, _ = run(capsys, "dfao", "validate", down)
    assert code == 1 and "well-ordered: no" in out and "offending cyclic edge" in out
    assert run(capsys, "dfao", "validate", loop)[0] == 0
    with_err = run(capsys, "dfao", "support", down)
    assert with_err[0] == 4
    code, out, _ = run(capsys, "dfao", "dot", loop)
    assert code == 0 and out.startswith("digraph") and 'label="."' in out


def test_missing_file_is_usage_error(tmp_path, capsys):
    assert run(capsys, "dfao", "zero", str(tmp_path / "nope.dfao"))[0] == 3


def test_extension_base_defaults_to_its_own_field(capsys):
    code, out, _ = run(capsys, "decide", "--p", "3", "--base", "F9", "X - z t")
    assert code == 0 and "over F9" in out
    assert run(capsys, "decide", "--p", "3", "--base", "F9", "--field", "F3", "X - z t")[0] == 3
