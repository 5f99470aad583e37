"""The command-line interface: subcommands, exit codes, JSON output purity,
and the budget environment variable."""

import json
import subprocess
import sys

import pytest

from modalkit.cli import (EXIT_FOUND, EXIT_HOLDS, EXIT_LIMIT, EXIT_USAGE,
                          main)

PROP_MODEL = {
    "worlds": ["w0", "w1"],
    "access": [["w0", "w1"], ["w1", "w1"]],
    "valuation": {"g": ["w1"]},
}

FO_MODEL = {
    "worlds": ["w0", "w1"],
    "access": [["w0", "w1"]],
    "valuation": {},
    "domain": ["a", "b"],
    "mode": "constant",
    "exists_in": {"w0": ["a", "b"], "w1": ["a", "b"]},
    "flexible_preds": {
        "alive": {"arity": 1,
                  "extension": {"w0": [["a"]], "w1": [["a"], ["b"]]}}},
    "rigid_preds": {},
    "rigid_consts": {"c": "a"},
}

TOTAL_FRAME = {"worlds": ["a", "b"],
               "access": [["a", "a"], ["a", "b"], ["b", "a"], ["b", "b"]]}
NONREFL_FRAME = {"worlds": ["a", "b"], "access": [["a", "b"], ["b", "b"]]}
SHRINK_DFRAME = {"worlds": ["w0", "w1"], "access": [["w0", "w1"]],
                 "domain": ["a"], "exists_in": {"w0": ["a"], "w1": []}}


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCheck:
    def test_world_true(self, capsys, write_json):
        path = write_json("m.json", PROP_MODEL)
        code, out, err = run(capsys, "check", "--model", path,
                             "--formula", "<>g", "--world", "w0")
        assert (code, out, err) == (EXIT_HOLDS, "true\n", "")

    def test_world_false(self, capsys, write_json):
        path = write_json("m.json", PROP_MODEL)
        code, out, _ = run(capsys, "check", "--model", path,
                           "--formula", "g", "--world", "w0")
        assert (code, out) == (EXIT_FOUND, "false\n")

    def test_all_worlds_valid(self, capsys, write_json):
        path = write_json("m.json", PROP_MODEL)
        code, out, _ = run(capsys, "check", "--model", path,
                           "--formula", "<>g")
        assert (code, out) == (EXIT_HOLDS, "valid\n")

    def test_all_worlds_invalid_names_witness(self, capsys, write_json):
        path = write_json("m.json", PROP_MODEL)
        code, out, _ = run(capsys, "check", "--model", path,
                           "--formula", "g")
        assert (code, out) == (EXIT_FOUND, "invalid at w0\n")

    def test_json_document(self, capsys, write_json):
        path = write_json("m.json", PROP_MODEL)
        code, out, err = run(capsys, "check", "--model", path,
                             "--formula", "g", "--json")
        doc = json.loads(out)
        assert doc == {"command": "check", "formula": "g", "valid": False,
                       "witness": {"world": "w0"}}
        assert err == ""

    def test_env_binds_variables(self, capsys, write_json):
        path = write_json("fo.json", FO_MODEL)
        code, out, _ = run(capsys, "check", "--model", path,
                           "--formula", "alive(x)", "--world", "w0",
                           "--env", "x=a")
        assert (code, out) == (EXIT_HOLDS, "true\n")
        code, out, _ = run(capsys, "check", "--model", path,
                           "--formula", "alive(x)", "--world", "w0",
                           "--env", "x=b")
        assert (code, out) == (EXIT_FOUND, "false\n")

    def test_unknown_world(self, capsys, write_json):
        path = write_json("m.json", PROP_MODEL)
        code, _, err = run(capsys, "check", "--model", path,
                           "--formula", "g", "--world", "zz")
        assert code == EXIT_USAGE
        assert "unknown world" in err

    def test_parse_error(self, capsys, write_json):
        path = write_json("m.json", PROP_MODEL)
        code, _, err = run(capsys, "check", "--model", path,
                           "--formula", "g &")
        assert code == EXIT_USAGE
        assert err.startswith("error: ")

    def test_parse_error_json_has_span(self, capsys, write_json):
        path = write_json("m.json", PROP_MODEL)
        code, out, err = run(capsys, "check", "--model", path,
                             "--formula", "g &", "--json")
        assert code == EXIT_USAGE
        doc = json.loads(out)
        assert doc["error"]["kind"] == "parse"
        # the missing operand is noticed at end of input
        assert doc["error"]["span"] == {"start": 3, "end": 3}
        assert err != ""

    def test_model_error_reports_path(self, capsys, write_json):
        bad = dict(PROP_MODEL, access=[["w0", "nope"]])
        path = write_json("bad.json", bad)
        code, out, err = run(capsys, "check", "--model", path,
                             "--formula", "g", "--json")
        assert code == EXIT_USAGE
        doc = json.loads(out)
        assert doc["error"]["kind"] == "model"
        assert doc["error"]["path"] == "$.access[0][1]"
        assert "unknown world 'nope'" in doc["error"]["message"]


class TestFrameValid:
    def test_holds(self, capsys, write_json):
        path = write_json("f.json", TOTAL_FRAME)
        code, out, _ = run(capsys, "frame-valid", "--frame", path,
                           "--scheme", "[]P => P")
        assert (code, out) == (EXIT_HOLDS, "frame-valid\n")

    def test_refuted_with_valuation(self, capsys, write_json):
        path = write_json("f.json", NONREFL_FRAME)
        code, out, _ = run(capsys, "frame-valid", "--frame", path,
                           "--scheme", "[]P => P")
        assert code == EXIT_FOUND
        assert out == "refuted at a\n  P = {b}\n"

    def test_json_has_witness(self, capsys, write_json):
        path = write_json("f.json", NONREFL_FRAME)
        code, out, _ = run(capsys, "frame-valid", "--frame", path,
                           "--scheme", "[]P => P", "--json")
        doc = json.loads(out)
        assert doc["holds"] is False
        assert doc["witness"] == {"world": "a", "assignment": {"P": ["b"]}}

    def test_rejects_model_file(self, capsys, write_json):
        path = write_json("m.json", PROP_MODEL)
        code, _, err = run(capsys, "frame-valid", "--frame", path,
                           "--scheme", "[]P => P")
        assert code == EXIT_USAGE


class TestCorrespond:
    def test_equivalence_frame_all_hold(self, capsys, write_json):
        path = write_json("f.json", TOTAL_FRAME)
        code, out, _ = run(capsys, "correspond", "--frame", path)
        assert code == EXIT_HOLDS
        assert "T: holds (reflexive=yes)" in out
        assert "K: holds" in out and "N: holds" in out

    def test_nonreflexive_frame(self, capsys, write_json):
        path = write_json("f.json", NONREFL_FRAME)
        code, out, _ = run(capsys, "correspond", "--frame", path)
        assert code == EXIT_FOUND
        assert "T: fails (reflexive=no)" in out
        assert "INCONSISTENT" not in out

    def test_json_shape(self, capsys, write_json):
        path = write_json("f.json", NONREFL_FRAME)
        code, out, _ = run(capsys, "correspond", "--frame", path, "--json")
        doc = json.loads(out)
        assert doc["command"] == "correspond"
        assert set(doc["axioms"]) == {"K", "T", "4", "B", "D", "5", "N"}
        assert all(e["consistent"] for e in doc["axioms"].values())


class TestBarcan:
    def test_shrinking_domains(self, capsys, write_json):
        path = write_json("df.json", SHRINK_DFRAME)
        code, out, _ = run(capsys, "barcan", "--dframe", path)
        assert code == EXIT_FOUND
        assert "BF: holds" in out
        assert "CBF: fails" in out
        assert "nonincreasing=yes" in out

    def test_constant_domains(self, capsys, write_json):
        df = {"worlds": ["w0", "w1"], "access": [["w0", "w1"]],
              "domain": ["a"],
              "exists_in": {"w0": ["a"], "w1": ["a"]}}
        path = write_json("df.json", df)
        code, out, _ = run(capsys, "barcan", "--dframe", path)
        assert code == EXIT_HOLDS
        assert "BF: holds" in out and "CBF: holds" in out

    def test_json_consistent(self, capsys, write_json):
        path = write_json("df.json", SHRINK_DFRAME)
        code, out, _ = run(capsys, "barcan", "--dframe", path, "--json")
        doc = json.loads(out)
        assert doc["axioms"]["BF"]["consistent"]
        assert doc["axioms"]["CBF"]["consistent"]
        assert doc["bf_iff_cbf_on_symmetric"] is True


class TestCountermodel:
    def test_found_propositional(self, capsys):
        code, out, _ = run(capsys, "countermodel",
                           "--conclusion", "[]P => P")
        assert code == EXIT_FOUND
        assert out.startswith("countermodel found:\n")
        payload = json.loads(out.split("\n", 1)[1])
        assert payload["certificate"]["worlds"] == 1

    def test_none_under_constraint(self, capsys):
        code, out, _ = run(capsys, "countermodel",
                           "--conclusion", "[]P => P",
                           "--require", "reflexive")
        assert (code, out) == (EXIT_HOLDS, "no countermodel up to 3 worlds\n")

    def test_premises_and_schemes(self, capsys):
        code, out, _ = run(capsys, "countermodel",
                           "--conclusion", "g",
                           "--premise", "<>g",
                           "--scheme-premise", "P => []P",
                           "--require", "symmetric")
        assert (code, out) == (EXIT_HOLDS, "no countermodel up to 3 worlds\n")

    def test_quantified_search(self, capsys):
        code, out, _ = run(capsys, "countermodel",
                           "--conclusion",
                           "[](forall x. P(x)) => forall x. []P(x)",
                           "--max-worlds", "2", "--max-domain", "1",
                           "--mode", "varying", "--json")
        assert code == EXIT_FOUND
        doc = json.loads(out)
        assert doc["found"] is True
        assert doc["certificate"]["exists_mask"] == 1

    def test_quantified_needs_max_domain(self, capsys):
        code, _, err = run(capsys, "countermodel",
                           "--conclusion", "forall x. P(x)")
        assert code == EXIT_USAGE
        assert "--max-domain" in err

    def test_meta_reading(self, capsys):
        code, out, _ = run(capsys, "countermodel",
                           "--conclusion", "(P => Q) => ([]~Q => []~P)",
                           "--reading", "meta")
        assert (code, out) == (EXIT_HOLDS, "no countermodel up to 3 worlds\n")

    def test_budget_env_var(self, capsys, monkeypatch):
        monkeypatch.setenv("MODALKIT_BUDGET", "60")
        code, out, err = run(capsys, "countermodel",
                             "--conclusion", "(P => Q) => ([]~Q => []~P)",
                             "--json")
        assert code == EXIT_LIMIT
        doc = json.loads(out)
        assert doc["error"]["kind"] == "resource-limit"
        assert doc["error"]["frontier"] == {"worlds": 2}

    def test_jobs_do_not_change_output(self, capsys):
        outputs = []
        for jobs in ("1", "2"):
            code, out, _ = run(capsys, "countermodel",
                               "--conclusion", "(P => Q) => ([]~Q => []~P)",
                               "--jobs", jobs, "--json")
            assert code == EXIT_FOUND
            outputs.append(out)
        assert outputs[0] == outputs[1]


class TestRender:
    @pytest.mark.parametrize("text,fmt,expect", [
        ("~<>(P & ~Q)", "unicode", "¬◇(P ∧ ¬Q)"),
        ("[]P => P", "latex", r"\Box P \supset P"),
        ("P |> Q", "latex", r"P \strictif Q"),
        ("□P ⊃ P", "ascii", "[]P => P"),
    ])
    def test_pins(self, capsys, text, fmt, expect):
        code, out, _ = run(capsys, "render", "--formula", text,
                           "--format", fmt)
        assert (code, out) == (EXIT_HOLDS, expect + "\n")

    def test_default_format_is_unicode(self, capsys):
        # the unicode table keeps the implication family in ASCII
        code, out, _ = run(capsys, "render", "--formula", "[]P => P")
        assert (code, out) == (EXIT_HOLDS, "□P => P\n")


class TestUsage:
    def test_no_subcommand(self, capsys):
        assert run(capsys, )[0] == EXIT_USAGE

    def test_unknown_subcommand(self, capsys):
        assert run(capsys, "frobnicate")[0] == EXIT_USAGE

    def test_missing_required_flag(self, capsys):
        assert run(capsys, "check", "--formula", "p")[0] == EXIT_USAGE

    def test_missing_model_file(self, capsys):
        code, _, err = run(capsys, "check", "--model", "/no/such.json",
                           "--formula", "p")
        assert code == EXIT_USAGE

    def test_entry_point_subprocess(self):
        out = subprocess.run(["modalkit", "render", "--formula", "[]P => P",
                              "--format", "ascii"],
                             capture_output=True, text=True)
        assert out.returncode == 0
        assert out.stdout == "[]P => P\n"
        mod = subprocess.run([sys.executable, "-m", "modalkit", "render",
                              "--formula", "[]P => P", "--format", "ascii"],
                             capture_output=True, text=True)
        assert mod.returncode == 0
        assert mod.stdout == "[]P => P\n"
