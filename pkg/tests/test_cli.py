import json

import pytest

from butfpi.cli import build_parser, dispatch


def run_cli(capsys, *argv):
    code = dispatch(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_run_value(capsys):
    code, out, _ = run_cli(capsys, "run", "-e", "(\\x. x) 5")
    assert code == 0 and out.strip() == "5"


def test_run_trace(capsys):
    code, out, _ = run_cli(capsys, "run", "-e", "(\\x. x + 1) 2", "--trace")
    assert code == 0
    assert "#1 E-BETA" in out and "#2 E-ARITH" in out


def test_run_stuck_exit_one(capsys):
    code, out, _ = run_cli(capsys, "run", "-e", "5[0]")
    assert code == 1 and "stuck" in out


def test_run_json(capsys):
    code, out, _ = run_cli(capsys, "run", "-e", "1 + 2", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data == {"status": "value", "value": "3", "steps": 1, "trace": []}


def test_parse_error_exit_two(capsys):
    code, _, err = run_cli(capsys, "run", "-e", "5 +")
    assert code == 2 and "parse error" in err


def test_usage_error_exit_two(capsys):
    assert dispatch(["run"]) == 2
    capsys.readouterr()
    assert dispatch(["no-such-command"]) == 2
    capsys.readouterr()


def test_translate_number(capsys):
    code, out, _ = run_cli(capsys, "translate", "-e", "5")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("--")  # options header
    assert lines[1] == "o<5>"


def test_simulate_raw_broadcast(capsys):
    code, out, _ = run_cli(capsys, "simulate", "--raw", "c:<1> | c(x).0 | c(y).0")
    assert code == 0
    assert out.count("#") == 1  # exactly one step, atomically


def test_simulate_json_deterministic(capsys):
    args = ("simulate", "-e", "map ((\\x. x), [1, 2])", "--policy", "random",
            "--seed", "3", "--format", "json")
    _, out1, _ = run_cli(capsys, *args)
    _, out2, _ = run_cli(capsys, *args)
    assert out1 == out2
    data = json.loads(out1)
    assert data["status"] == "terminated"
    assert set(data["steps"][0]) == {"idx", "kind", "rule", "channel", "depth"}


def test_check_pass(capsys, tmp_path):
    program = tmp_path / "beta.butf"
    program.write_text("(\\x. x) 5\n")
    code, out, _ = run_cli(capsys, "check", str(program), "--seeds", "5")
    assert code == 0
    assert "value_match: True" in out


def test_check_json(capsys):
    code, out, _ = run_cli(capsys, "check", "-e", "size [1,2]", "--seeds", "2",
                           "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["butf_steps"] == 1
    assert data["adjusted"]["min"] == 1


def test_check_paper_literal_mode(capsys):
    code, out, _ = run_cli(capsys, "check", "-e", "size [1,2]", "--seeds", "2",
                           "--paper-literal", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["important"]["min"] == 0 and data["expected_deficit"] == 1


def test_cost_json(capsys):
    code, out, _ = run_cli(capsys, "cost", "-e", "(\\x. x) 5", "--format", "json")
    assert code == 0
    assert json.loads(out)["work"] == 1


def test_scale_csv_and_exit(capsys):
    code, out, _ = run_cli(capsys, "scale", "--family", "nested-apps",
                           "--sizes", "1,2,3", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "family,n,seed,work,span,admin_steps"


def test_explore_small(capsys):
    code, out, _ = run_cli(capsys, "explore", "-e", "(\\x. x) 5",
                           "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["all_terminals_agree"] is True and data["value"] == "5"


def test_every_subcommand_has_help():
    parser = build_parser()
    subparsers = parser._subparsers._group_actions[0].choices
    assert set(subparsers) == {"run", "translate", "simulate", "check",
                               "cost", "scale", "explore"}
    for name, sub in subparsers.items():
        with pytest.raises(SystemExit) as exc:
            sub.parse_args(["--help"])
        assert exc.value.code == 0


def test_fuel_env_override(capsys, monkeypatch):
    monkeypatch.setenv("BUTFPI_FUEL", "10")
    code, out, _ = run_cli(capsys, "run", "-e", "(\\x. x x) (\\x. x x)")
    assert code == 1 and "10 steps" in out
