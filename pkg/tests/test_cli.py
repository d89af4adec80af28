import io
import json
import subprocess
import sys

import pytest

from pseudoval.cli import main

E1 = {"field": "dyadic-q", "kind": "convergent", "base": "0", "gauge": {"target": "1", "rule": "dyadic-step"}}
E2 = dict(E1, base="t^(1/4)")
SPACE = {"a": "0", "b": "1", "lambda": [{"value": "1/2", "index": 1}, {"value": "1/4", "index": 2}, {"value": "3/4", "index": 3}]}
HALVES = "1/2,1/4,1/8,1/16,1/32"


def run(*argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out=out)
    reports = [json.loads(line) for line in out.getvalue().splitlines()]
    return code, reports, out.getvalue()


def js(doc):
    return json.dumps(doc)


# ---- documented examples --------------------------------------------------------

def test_dist_example():
    code, [rep], _ = run("dist", "--field", "dyadic-q", "--e1", js(E1), "--e2", js(E2))
    assert code == 0
    v = rep["verdicts"]
    assert (v["eta"], v["delta"], v["zero"]) == ("1/4", "1", False)
    assert rep["provenance"] == "exact"


def test_dist_with_raw_window_witness():
    code, [rep], _ = run("dist", "--e1", js(E1), "--e2", js(E2), "--raw")
    assert code == 0 and rep["witnesses"]["rawWindow"]["eta"] == "1/4"


def test_lambda_ball_example():
    code, [rep], _ = run("lambda-ball", "--space", js(SPACE), "--x", "3/5", "--rho", "9/10")
    assert code == 0 and rep["verdicts"] == {"y": "1/2", "z": "1"}


def test_suite_metrics_all_pass():
    code, reps, _ = run("suite", "--module", "metrics", "--seed", 7)
    assert code == 0
    summary = reps[-1]
    assert summary["verdicts"]["allPassed"] and summary["verdicts"]["summary"] == "5/5 passed"
    assert summary["verdicts"]["checks"] > 0 and summary["seed"] == 7
    assert all(r["verdicts"]["count"] > 0 for r in reps[:-1])


# ---- other subcommands -------------------------------------------------------------

def test_classify_breadth_limits():
    code, [rep], _ = run("classify", "--field", "dyadic-q", "--terms", "t; t^(1/2); t^(1/4); t^(1/8)")
    assert code == 0 and rep["verdicts"]["kind"] == "divergent"
    code, [rep], _ = run("breadth", "--spec", js(dict(E1, gauge={"target": "1/3", "rule": "binary-truncation"})))
    assert rep["verdicts"]["breadth"] == "1/3"
    code, [rep], _ = run("limits", "--spec", js(E1), "--x", "t^(5/4)")
    assert rep["verdicts"]["isPseudoLimit"] and rep["verdicts"]["windowCheck"]
    assert rep["verdicts"]["ball"] == {"boundary": "closed", "center": "0", "radiusExp": "1"}


def test_member_and_we():
    code, [rep], _ = run("member", "--spec", js(E1), "--phi", "t^(-1/2) * X")
    assert code == 0 and rep["verdicts"]["contains"] is True
    assert rep["witnesses"]["windowVerdict"] is True
    code, [rep], _ = run("we", "--spec", js(E1), "--phi", "(X - t^(1/2))")
    assert rep["verdicts"]["wE"] == "1/2"


def test_omega_simil_invert_sigma():
    assert run("omega", "--spec", js(E1), "--s", "t^(1/4)", "--gamma", "1/2")[1][0]["verdicts"]["contains"]
    code, [rep], _ = run("simil", "--spec", js(E1), "--c", "t")
    assert rep["verdicts"]["breadth"] == "2"
    div = {"field": "dyadic-q", "kind": "divergent", "base": "0", "gauge": {"target": "0"}}
    code, [rep], _ = run("invert", "--spec", js(div), "--phi", "(X - t^(1/2))^2")
    assert rep["verdicts"]["kind"] == "convergent"
    dual = rep["witnesses"]["duality"]
    assert dual["inE"] == dual["inInverse"]
    code, [rep], _ = run("sigma", "--field", "dyadic-q", "--beta", "1 + t", "--delta", "1/3")
    assert rep["verdicts"]["breadth"] == "1/3"


def test_lambda_dist_flags_gap():
    code, [rep], _ = run("lambda-dist", "--space", js(SPACE), "--x", "3/5", "--y", "7/10")
    assert rep["verdicts"] == {"d": "0", "degenerate": "Lambda-gap"}
    code, [rep], _ = run("lambda-dist", "--space", js(SPACE), "--x", "3/10", "--y", "3/5")
    assert rep["verdicts"] == {"d": "1"}


def test_cover_witness():
    space = {"a": "0", "b": "1", "lambda": []}
    code, [rep], _ = run("cover-witness", "--space", js(space), "--gammas", HALVES, "--chosen", "1,2")
    assert rep["verdicts"]["uncovered"] == "1/8" and rep["witnesses"]["covered"] is False


def test_zar_subcommands():
    code, [rep], _ = run("zar", "member", "--p", 5, "--point", "inf", "--psi", "[1] / [0, 1]")
    assert code == 0 and rep["verdicts"]["contains"] is True
    code, [rep], _ = run("zar", "isolated", "--p", 5, "--point", "[2, 0, 1]")
    assert rep["verdicts"] == {"degreeBound": 3, "pointsChecked": 57, "unique": True}
    code, [rep], _ = run("zar", "generic", "--p", 5, "--psi", "[0, 1];[1] / [4, 1]")
    assert rep["verdicts"]["wholeInAll"] is True
    code, [rep], _ = run("zar", "xad", "--field", "dyadic-f5", "--alpha", "0", "--c", "t", "--marker", "2", "--psi", "[3, 1]")
    assert rep["verdicts"]["point"] == "[3, 1]"
    assert rep["witnesses"]["inRing"] == rep["witnesses"]["inPoint"]


def test_xad_command():
    code, [rep], _ = run("xad", "--field", "dyadic-q", "--alpha", "1", "--c", "t", "--marker", "F", "--psi", "[0, 1] / [1, 1]")
    assert code == 0 and rep["verdicts"]["point"] == "whole"
    assert rep["witnesses"]["inRing"] is True


# ---- exit codes ----------------------------------------------------------------------

def test_parse_error_reports_position():
    code, [rep], _ = run("limits", "--spec", js(E1), "--x", "t^(1/3)")
    assert code == 1 and rep["error"]["type"] == "parse" and rep["error"]["position"] > 0
    code, [rep], _ = run("dist", "--e1", '{"field": ', "--e2", js(E2))
    assert code == 1 and rep["error"]["position"] == 10


def test_domain_errors_exit_one():
    code, [rep], _ = run("dist", "--e1", js(E1), "--e2", js(dict(E2, gauge={"target": "2"})))
    assert code == 1 and "breadth" in rep["error"]["message"]
    code, [rep], _ = run("zar", "isolated", "--point", "whole")
    assert code == 1
    code, [rep], _ = run("sigma", "--field", "padic-5", "--beta", "1", "--delta", "1")
    assert code == 1


def test_heuristic_indecision_exits_two():
    code, [rep], _ = run("member", "--spec", js(E1), "--phi", "[0, 1] / [1]")
    assert code == 2
    assert rep["error"]["type"] == "heuristic-indecision" and rep["provenance"] == "heuristic"


def test_heuristic_verdicts_are_flagged():
    code, [rep], _ = run("we", "--spec", js(E1), "--phi", "[1, 0, 1] / [1, 1]")
    assert code == 0 and rep["provenance"] == "heuristic" and rep["verdicts"]["wE"] == "0"
    code, [rep], _ = run("we", "--spec", js(E1), "--phi", "(X - t)")
    assert rep["provenance"] == "exact"


# ---- determinism, seeds and files ------------------------------------------------------

def test_byte_identical_reports():
    argv = ("suite", "--module", "lambda_topology", "--seed", 3)
    assert run(*argv)[2] == run(*argv)[2]
    argv = ("dist", "--e1", js(E1), "--e2", js(E2))
    assert _text(*argv)[1].getvalue() == _text(*argv)[1].getvalue()


def test_seed_from_environment(monkeypatch):
    monkeypatch.setenv("PSEUDOVAL_SEED", "41")
    assert run("lambda-dist", "--space", js(SPACE), "--x", "1/2", "--y", "1")[1][0]["seed"] == 41
    assert run("lambda-dist", "--space", js(SPACE), "--x", "1/2", "--y", "1", "--seed", 2)[1][0]["seed"] == 2


def test_input_file(tmp_path):
    path = tmp_path / "args.json"
    path.write_text(json.dumps({"space": SPACE, "x": "3/5", "rho": "9/10"}))
    code, [rep], _ = run("lambda-ball", "--in", path)
    assert code == 0 and rep["verdicts"] == {"y": "1/2", "z": "1"}
    path.write_text(json.dumps({"nonsense": 1}))
    assert run("lambda-ball", "--in", path)[0] == 1


def test_text_format():
    code, out = _text("dist", "--e1", js(E1), "--e2", js(E2))
    text = out.getvalue()
    assert code == 0
    assert "verdicts.eta: 1/4" in text and "provenance: exact" in text


def _text(*argv):
    out = io.StringIO()
    return main(list(argv) + ["--format", "text"], out=out), out


def test_timing_is_opt_in():
    assert "elapsedSeconds" not in run("lambda-dist", "--space", js(SPACE), "--x", "1/2", "--y", "1")[1][0]
    assert "elapsedSeconds" in run("lambda-dist", "--space", js(SPACE), "--x", "1/2", "--y", "1", "--timing")[1][0]


# ---- round trip ------------------------------------------------------------------------------

ROUND_TRIP = [
    ("dist", {"e1": E1, "e2": E2}),
    ("dist", {"field": "padic-5", "beta1": "3/5", "beta2": "28/5", "delta": "inf"}),
    ("member", {"spec": dict(E1, unit="2 + t", coeffs=["1", "-3"], perturbation={"coeff": "2", "gap": "1/2"}), "phi": "t * (X - (1 + t))^-2"}),
    ("we", {"spec": E1, "phi": "[1, 0, 1] / [t^(-1), 1]"}),
    ("limits", {"spec": E2, "x": "t^(1/4) + 5*t^2"}),
    ("lambda-ball", {"space": SPACE, "x": "3/5", "rho": "9/10"}),
    ("cover-witness", {"space": {"a": "0", "b": "1", "lambda": []}, "gammas": ["1/2", "1/4", "1/8"], "chosen": [1, 3]}),
]


def _argv(command, inputs):
    argv = [command]
    for key, value in inputs.items():
        if isinstance(value, dict):
            value = json.dumps(value)
        elif isinstance(value, list):
            value = ",".join(str(v) for v in value)
        argv += ["--" + key, str(value)]
    return argv


@pytest.mark.parametrize("command,inputs", ROUND_TRIP)
def test_canonical_inputs_reparse(command, inputs):
    code, [first], _ = run(*_argv(command, inputs))
    assert code == 0, first
    code, [second], _ = run(*_argv(command, first["inputs"]))
    assert code == 0
    assert second["inputs"] == first["inputs"]
    assert second["verdicts"] == first["verdicts"]


def test_zar_inputs_reparse():
    code, [first], _ = run("zar", "member", "--p", 5, "--point", "[3, 0, 1]", "--psi", "[4, 1, 2] / [0, 0, 1]")
    i = first["inputs"]
    code, [second], _ = run("zar", "member", "--p", i["p"], "--point", i["point"], "--psi", i["psi"])
    assert second == first


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "pseudoval", "lambda-ball", "--space", js(SPACE), "--x", "3/5", "--rho", "9/10"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["verdicts"] == {"y": "1/2", "z": "1"}
