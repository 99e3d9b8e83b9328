# ==============================================================================
# ARCHITECTURE: FUNCTIONAL TEST (USER FLOWS)
# ------------------------------------------------------------------------------
# GOAL: Verify the command line: subcommands, output formats, exit codes and
#       saving reports.
# CONSTRAINTS:
#   1. ENTRY POINT: Call 'run(argv)' directly; no subprocesses.
#   2. I/O: Reports go to a pytest tmp_path.
# ==============================================================================
import argparse
import json

import pytest

from src.config import PipelineConfig
from src.orbifold.presentation.cli import EXIT_ERROR, EXIT_OK, parse_keep, run


class TestParseKeep:
    @pytest.mark.parametrize(
        "value, expected",
        [("none", []), ("", []), ("ALL", list(range(1, 9))), ("1,3,4", [1, 3, 4]), (" 2 ", [2])],
    )
    def test_values(self, value, expected):
        assert parse_keep(value) == expected

    def test_garbage_is_an_argument_error(self):
        with pytest.raises(argparse.ArgumentTypeError):
            parse_keep("one,two")


class TestFlatCommand:
    def test_text_output(self, capsys):
        code = run(["flat", "--kind", "1", "--n", "5"])

        out = capsys.readouterr().out
        assert code == EXIT_OK
        assert "flip -> BC2" in out

    def test_json_output(self, capsys):
        code = run(["flat", "--kind", "2", "--n", "4", "--format", "json"])

        payload = json.loads(capsys.readouterr().out)
        assert code == EXIT_OK
        assert payload["monodromy"] == "trivial"
        assert payload["torus_group_order"] == 8

    def test_bad_order_exits_with_error(self, capsys):
        code = run(["flat", "--kind", "1", "--n", "0"])

        assert code == EXIT_ERROR
        assert "error:" in capsys.readouterr().err


class TestBuildCommand:
    def test_keep_sets_from_flags(self, capsys):
        """
        Scenario: build kind 1 keeping A1 in the first block.
        Expectation: exit 0 and the component listed in the text report.
        """
        code = run(["build", "--kind", "1", "--keep1", "1", "--keep2", "none"])

        out = capsys.readouterr().out
        assert code == EXIT_OK
        assert "E8_1: A1 on nodes 1" in out
        assert "b2=15" in out

    def test_flat_comparison_flag(self, capsys):
        """
        Scenario: build kind 1 keeping A2 and ask for the flat-model comparison.
        Expectation: the Z3 flat model flips and agrees with the extended reading.
        """
        code = run(["build", "--kind", "1", "--keep1", "1,3", "--keep2", "none", "--flat-comparison"])

        out = capsys.readouterr().out
        assert code == EXIT_OK
        assert "flat model n=3: flip (agrees)" in out
        assert "flat model n=3: flip (differs)" in out

    def test_request_from_config_file(self, tmp_path, capsys):
        config = tmp_path / "request.json"
        config.write_text(json.dumps({"kind": 2, "keep1": [1, 3], "keep2": []}), encoding="utf-8")

        code = run(["build", "--config", str(config), "--format", "json"])

        payload = json.loads(capsys.readouterr().out)
        assert code == EXIT_OK
        assert payload["kind"] == 2
        assert [s["label"] for s in payload["singularities"]] == ["A2"]

    def test_unknown_node_exits_with_error(self, capsys):
        code = run(["build", "--kind", "1", "--keep1", "9"])

        assert code == EXIT_ERROR
        assert "unknown E8 nodes" in capsys.readouterr().err

    def test_missing_kind_exits_with_error(self):
        assert run(["build"]) == EXIT_ERROR

    def test_unknown_kind_is_a_usage_error(self):
        with pytest.raises(SystemExit):
            run(["build", "--kind", "3"])

    def test_save_writes_the_report(self, tmp_path, monkeypatch, capsys):
        monkeypatch.setattr(PipelineConfig, "REPORT_DIR", str(tmp_path))

        code = run(["build", "--kind", "1", "--keep1", "1,3", "--save", "a2"])

        capsys.readouterr()
        saved = json.loads((tmp_path / "a2.json").read_text(encoding="utf-8"))
        assert code == EXIT_OK
        assert saved["keep1"] == [1, 3]
