import json

import pytest

from collindiag import cli, cns, design_matrix, fixture, ols_fit, response_vector, vif
from collindiag.cli import THRESHOLDS_ENV, main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    return code, json.loads(out), err


class TestDataSourceFlags:
    def test_requires_data_or_fixture(self, capsys):
        code, _, err = run(capsys, "vif")
        assert code == 2
        assert "exactly one of --data or --fixture" in err

    def test_both_data_and_fixture_rejected(self, capsys, tmp_path):
        path = tmp_path / "x.csv"
        path.write_text("a\n1\n2\n", encoding="utf-8")
        code, _, err = run(capsys, "vif", "--data", str(path), "--fixture", "theil")
        assert code == 2

    def test_unknown_fixture_rejected_by_parser(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["vif", "--fixture", "foo"])
        assert exc.value.code == 2

    def test_fixture_error_message_lists_names(self):
        with pytest.raises(ValueError, match="theil"):
            fixture("foo")

    def test_role_flags_only_for_data(self, capsys):
        code, _, err = run(capsys, "vif", "--fixture", "theil", "--response", "x")
        assert code == 2
        assert "apply only to --data" in err

    def test_missing_data_file(self, capsys):
        code, _, err = run(capsys, "vif", "--data", "/nonexistent/file.csv")
        assert code == 2
        assert "not found" in err


class TestCsvPath:
    @pytest.fixture()
    def theil_csv(self, tmp_path, theil_dataset):
        from test_dataset import write_theil_csv

        return write_theil_csv(tmp_path, theil_dataset)

    def test_csv_matches_fixture(self, capsys, theil_csv):
        code, payload, _ = run_json(
            capsys, "vif", "--data", str(theil_csv),
            "--response", "consumption", "--dummy", "twenties")
        assert code == 0
        values = [entry["value"] for entry in payload["result"]["vif"]]
        fixture_values = [v for _, v in vif(design_matrix(fixture("theil")))]
        assert values == fixture_values

    def test_quant_flag_restricts_columns(self, capsys, theil_csv):
        code, payload, _ = run_json(
            capsys, "cv", "--data", str(theil_csv),
            "--response", "consumption", "--dummy", "twenties",
            "--quant", "income")
        assert code == 0
        assert [e["label"] for e in payload["result"]["cv"]] == ["income"]

    def test_unknown_role_label(self, capsys, theil_csv):
        code, _, err = run(capsys, "vif", "--data", str(theil_csv),
                           "--response", "nope")
        assert code == 2
        assert "nope" in err


class TestReports:
    def test_rdetr_kg_verdict_line(self, capsys):
        code, out, _ = run(capsys, "rdetr", "--fixture", "kg")
        assert code == 0
        assert "PROBLEMATIC: det(R)=0.03713592 < threshold 0.06098764" in out

    def test_rdetr_theil_ok(self, capsys):
        code, out, _ = run(capsys, "rdetr", "--fixture", "theil")
        assert "OK: det(R)=0.9680139 >= threshold 0.07508642" in out
        assert "0.1788467" in out

    def test_vif_json_values(self, capsys):
        code, payload, _ = run_json(capsys, "vif", "--fixture", "theil")
        assert code == 0
        values = [e["value"] for e in payload["result"]["vif"]]
        assert values == pytest.approx([1.033043, 1.033043], rel=1e-5)

    def test_cns_kg_json(self, capsys):
        code, payload, _ = run_json(capsys, "cns", "--fixture", "kg")
        result = payload["result"]
        assert result["without"] == pytest.approx(30.2987, rel=1e-4)
        assert result["with"] == pytest.approx(35.88644, rel=1e-4)
        assert result["increase_pct"] == pytest.approx(15.57062, rel=1e-4)

    def test_cn_text(self, capsys):
        code, out, _ = run(capsys, "cn", "--fixture", "theil")
        assert "53.39671" in out
        assert "PROBLEMATIC: CN=53.39671 > 30" in out

    def test_ki_text_labels(self, capsys):
        code, out, _ = run(capsys, "ki", "--fixture", "theil")
        assert "Stewart index" in out
        assert "essential collinearity" in out
        assert "403.2096" in out

    def test_cv_flags_income(self, capsys):
        code, out, _ = run(capsys, "cv", "--fixture", "theil")
        assert "PROBLEMATIC: CV(income)=0.04993766 < threshold 0.1002506" in out

    def test_slm_needs_two_columns(self, capsys):
        code, _, err = run(capsys, "slm", "--fixture", "kg")
        assert code == 2
        assert "Only 2 independent variables are needed (including the intercept)" in err

    def test_multicol_theil_sections(self, capsys):
        code, out, _ = run(capsys, "multicol", "--fixture", "theil")
        assert code == 0
        for section in ("Coefficients of Variation",
                        "Proportion of ones in the dummy variable",
                        "Correlation matrix's determinant",
                        "Variance Inflation Factors",
                        "Condition Number without intercept",
                        "Condition Number with intercept",
                        "Increase (in percentage)",
                        "Stewart index"):
            assert section in out

    def test_multicol_kg_guidance_message(self, capsys):
        code, out, _ = run(capsys, "multicol", "--fixture", "kg")
        assert "At least one qualitative independent variable is needed" in out

    def test_ols_table(self, capsys):
        code, out, _ = run(capsys, "ols", "--fixture", "theil")
        assert "126.1695" in out
        assert "Residual standard error: 5.676363 on 13 degrees of freedom" in out
        assert "OK: no apparent contradiction" in out

    def test_ols_kg_contradiction_exit(self, capsys):
        code, out, _ = run(capsys, "ols", "--fixture", "kg", "--fail-on-problematic")
        assert code == 1
        assert "PROBLEMATIC: joint F test is significant" in out


class TestExitCodes:
    def test_ok_is_zero(self, capsys):
        code, _, _ = run(capsys, "vif", "--fixture", "theil", "--fail-on-problematic")
        assert code == 0

    def test_problematic_without_flag_is_zero(self, capsys):
        code, _, _ = run(capsys, "rdetr", "--fixture", "kg")
        assert code == 0

    def test_problematic_with_flag_is_one(self, capsys):
        code, _, _ = run(capsys, "rdetr", "--fixture", "kg", "--fail-on-problematic")
        assert code == 1

    def test_usage_error_is_two(self, capsys):
        code, _, err = run(capsys, "ki", "--fixture", "theil", "--no-intercept",
                           "--response", "x")
        assert code == 2
        assert err.startswith("error:")


class TestJsonTextAgreement:
    @pytest.mark.parametrize("command", ["rdetr", "vif", "cn", "cns", "ki", "cv",
                                         "multicol", "ols"])
    def test_same_numbers_in_both_modes(self, capsys, command):
        code, payload, _ = run_json(capsys, command, "--fixture", "kg")
        assert code == 0
        code, text, _ = run(capsys, command, "--fixture", "kg")
        assert code == 0

        def walk(node):
            if isinstance(node, dict):
                for v in node.values():
                    yield from walk(v)
            elif isinstance(node, list):
                for v in node:
                    yield from walk(v)
            elif isinstance(node, float):
                yield node

        for value in walk(payload["result"]):
            assert format(value, ".7g") in text

    def test_json_envelope(self, capsys):
        _, payload, _ = run_json(capsys, "cns", "--fixture", "theil")
        assert payload["schema_version"] == 1
        assert payload["command"] == "cns"
        assert payload["dataset"] == "theil"
        assert isinstance(payload["problematic"], bool)

    def test_ols_json_matches_library(self, capsys, kg_design, kg_y):
        _, payload, _ = run_json(capsys, "ols", "--fixture", "kg")
        fit = ols_fit(kg_y, kg_design)
        assert payload["result"]["beta"] == [float(b) for b in fit.beta]
        assert payload["result"]["f_p"] == fit.f_p

    def test_cns_json_matches_library(self, capsys, theil_design):
        _, payload, _ = run_json(capsys, "cns", "--fixture", "theil")
        rep = cns(theil_design)
        assert payload["result"]["with"] == rep.cn_with
        assert payload["result"]["without"] == rep.cn_without


class TestReproducibility:
    def test_same_seed_byte_identical(self, capsys):
        args = ("perturb", "--fixture", "theil", "--iterations", "30", "--seed", "11")
        code1, out1, _ = run(capsys, *args)
        code2, out2, _ = run(capsys, *args)
        assert code1 == code2 == 0
        assert out1 == out2

    def test_deterministic_commands_byte_identical(self, capsys):
        code1, out1, _ = run(capsys, "multicol", "--fixture", "kg", "--format", "json")
        code2, out2, _ = run(capsys, "multicol", "--fixture", "kg", "--format", "json")
        assert out1 == out2


class TestPerturbCommand:
    def test_summary_text(self, capsys):
        code, out, _ = run(capsys, "perturb", "--fixture", "theil",
                           "--iterations", "25", "--seed", "5")
        assert code == 0
        assert "achieved_pct" in out and "change_pct" in out
        assert "Perturbed regressors: income, relprice" in out

    def test_pos_override_warns(self, capsys):
        code, _, err = run(capsys, "perturb", "--fixture", "theil",
                           "--iterations", "5", "--seed", "1", "--pos", "1")
        assert code == 0
        assert "overrides the role-derived positions" in err

    def test_pos_matching_roles_does_not_warn(self, capsys):
        code, _, err = run(capsys, "perturb", "--fixture", "theil",
                           "--iterations", "5", "--seed", "1", "--pos", "1,2")
        assert code == 0
        assert err == ""

    def test_dummy_pos_is_an_error(self, capsys):
        code, _, err = run(capsys, "perturb", "--fixture", "theil",
                           "--iterations", "5", "--pos", "3")
        assert code == 2
        assert "quantitative" in err

    def test_bad_pos_syntax(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["perturb", "--fixture", "theil", "--pos", "1;2"])
        assert exc.value.code == 2

    def test_achieved_mean_in_json(self, capsys):
        _, payload, _ = run_json(capsys, "perturb", "--fixture", "kg",
                                 "--iterations", "20", "--seed", "2")
        assert payload["result"]["achieved_pct"]["mean"] == pytest.approx(1.0, abs=1e-9)
        assert payload["result"]["achieved_pct"]["sd"] <= 1e-12


class TestThresholdOverrides:
    def test_env_file_changes_verdict(self, capsys, tmp_path, monkeypatch):
        override = tmp_path / "thresholds.cfg"
        override.write_text("vif_limit = 1.01\n# comment line\n", encoding="utf-8")
        monkeypatch.setenv(THRESHOLDS_ENV, str(override))
        code, out, _ = run(capsys, "vif", "--fixture", "theil", "--fail-on-problematic")
        assert code == 1
        assert "PROBLEMATIC: VIF(income)=1.033043 > limit 1.01" in out

    def test_unknown_key_rejected(self, capsys, tmp_path, monkeypatch):
        override = tmp_path / "thresholds.cfg"
        override.write_text("bogus = 3\n", encoding="utf-8")
        monkeypatch.setenv(THRESHOLDS_ENV, str(override))
        code, _, err = run(capsys, "vif", "--fixture", "theil")
        assert code == 2
        assert "unknown threshold" in err

    def test_bad_number_rejected(self, capsys, tmp_path, monkeypatch):
        override = tmp_path / "thresholds.cfg"
        override.write_text("vif_limit = ten\n", encoding="utf-8")
        monkeypatch.setenv(THRESHOLDS_ENV, str(override))
        code, _, err = run(capsys, "vif", "--fixture", "theil")
        assert code == 2
        assert "not a number" in err

    def test_missing_override_file(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv(THRESHOLDS_ENV, str(tmp_path / "gone.cfg"))
        code, _, err = run(capsys, "vif", "--fixture", "theil")
        assert code == 2
