import json

import pytest

from padic_potts.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse(out):
    doc = json.loads(out)
    assert out.endswith("\n")
    return doc


class TestVerify:
    def test_exp_log_suite(self, capsys):
        code, out, err = run(
            capsys, "verify", "--suite", "exp-log", "--checks", "60", "--p", "3"
        )
        assert code == 0
        doc = parse(out)
        assert doc["ok"] is True
        assert doc["suites"][0]["checks"] == 60
        assert doc["suites"][0]["passed"] == 60

    def test_product_distance_suite(self, capsys):
        code, out, _ = run(
            capsys, "verify", "--suite", "product-distance", "--checks", "40"
        )
        assert code == 0
        assert parse(out)["ok"] is True

    def test_contraction_suite(self, capsys):
        code, out, _ = run(capsys, "verify", "--suite", "contraction", "--checks", "4")
        assert code == 0
        assert parse(out)["ok"] is True

    def test_contraction_refuses_divisible_q(self, capsys):
        code, _, err = run(
            capsys, "verify", "--suite", "contraction", "--q", "3", "--p", "3"
        )
        assert code == 1
        assert "config error" in err

    def test_compat_suite(self, capsys):
        code, out, _ = run(capsys, "verify", "--suite", "compat")
        assert code == 0
        doc = parse(out)
        suite = doc["suites"][0]
        assert suite["checks"] == 2
        assert suite["passed"] == 2

    def test_deterministic_bytes(self, capsys):
        args = ("verify", "--suite", "exp-log", "--checks", "30", "--seed", "7")
        _, first, _ = run(capsys, *args)
        _, second, _ = run(capsys, *args)
        assert first == second

    def test_seed_changes_draws(self, capsys):
        _, a, _ = run(capsys, "verify", "--suite", "exp-log", "--checks", "30")
        _, b, _ = run(
            capsys, "verify", "--suite", "exp-log", "--checks", "30", "--seed", "5"
        )
        da, db = parse(a), parse(b)
        assert da["ok"] and db["ok"]
        assert da["seed"] != db["seed"]

    def test_unknown_suite_is_a_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["verify", "--suite", "no-such-suite"])
        assert exc.value.code == 2


class TestClassify:
    def test_default_run(self, capsys):
        code, out, _ = run(capsys, "classify")
        assert code == 0
        doc = parse(out)
        assert doc["p"] == 3 and doc["q"] == 3 and doc["k"] == 2
        assert doc["report"]["verdict"] == "multiple_translation_invariant"

    def test_unit_q(self, capsys):
        code, out, _ = run(capsys, "classify", "--q", "2")
        assert code == 0
        assert parse(out)["report"]["verdict"] == "unique_by_contraction"

    def test_deterministic_bytes(self, capsys):
        _, first, _ = run(capsys, "classify")
        _, second, _ = run(capsys, "classify")
        assert first == second

    def test_composite_modulus_rejected(self, capsys):
        code, _, err = run(capsys, "classify", "--p", "4")
        assert code == 1
        assert "not prime" in err

    def test_inline_and_file_couplings_agree(self, capsys, tmp_path):
        doc = {"pattern": "homogeneous", "p": 3, "q": 3, "values": {"J": "3"}}
        text = json.dumps(doc)
        path = tmp_path / "couplings.json"
        path.write_text(text)
        _, inline_out, _ = run(capsys, "classify", "--couplings", text)
        _, file_out, _ = run(capsys, "classify", "--couplings", str(path))
        assert inline_out == file_out

    def test_coupling_flag_disagreement(self, capsys):
        doc = json.dumps(
            {"pattern": "homogeneous", "p": 3, "q": 3, "values": {"J": "3"}}
        )
        code, _, err = run(capsys, "classify", "--couplings", doc, "--p", "5")
        assert code == 1
        assert "config error" in err

    def test_out_file(self, capsys, tmp_path):
        target = tmp_path / "report.json"
        code, out, _ = run(capsys, "classify", "--out", str(target))
        assert code == 0
        assert out == ""
        doc = json.loads(target.read_text())
        assert doc["command"] == "classify"


class TestCompatCheck:
    def test_zero_field_holds(self, capsys):
        code, out, _ = run(capsys, "compat-check", "--n", "1")
        assert code == 0
        doc = parse(out)
        assert doc["holds"] is True
        assert doc["terms"] == 81

    def test_alternating_field_fails(self, capsys, tmp_path):
        # root carries a nonzero vector, unlisted vertices default to zero
        field = tmp_path / "field.json"
        field.write_text(json.dumps({"": ["3", "0"]}))
        code, out, _ = run(
            capsys, "compat-check", "--k", "1", "--n", "1", "--field", str(field)
        )
        assert code == 1
        doc = parse(out)
        assert doc["holds"] is False
        assert doc["resolved"] is True
        assert doc["max_discrepancy_valuation"] == "-3"

    def test_guard_exit_code(self, capsys):
        code, _, err = run(capsys, "compat-check", "--n", "5")
        assert code == 4
        assert "guard" in err

    def test_inadmissible_field_is_domain_error(self, capsys, tmp_path):
        field = tmp_path / "field.json"
        field.write_text(json.dumps({"": ["1", "0"]}))
        code, _, err = run(capsys, "compat-check", "--n", "1", "--field", str(field))
        assert code == 2
        assert "domain violation" in err


class TestNormProfile:
    def test_three_states_unbounded(self, capsys):
        code, out, _ = run(capsys, "norm-profile", "--n", "2")
        assert code == 0
        doc = parse(out)
        assert doc["bounded_so_far"] is False
        assert [r["min_valuation"] for r in doc["rows"]] == ["-1", "-4", "-10"]

    def test_two_states_bounded(self, capsys):
        code, out, _ = run(capsys, "norm-profile", "--q", "2", "--n", "2")
        assert code == 0
        doc = parse(out)
        assert doc["bounded_so_far"] is True
        assert all(r["min_valuation"] == "0" for r in doc["rows"])

    def test_deterministic_bytes(self, capsys):
        _, first, _ = run(capsys, "norm-profile", "--n", "1")
        _, second, _ = run(capsys, "norm-profile", "--n", "1")
        assert first == second


class TestFlagValidation:
    def test_precision_floor(self, capsys):
        code, _, err = run(capsys, "classify", "--precision", "4")
        assert code == 1
        assert "config error" in err

    def test_negative_depth(self, capsys):
        code, _, err = run(capsys, "norm-profile", "--n", "-1")
        assert code == 1
        assert "config error" in err
