from __future__ import annotations

import json

import pytest

from siteselect import fixtures
from siteselect.cli import run
from siteselect.fixtures import write_checklist_criteria
from siteselect.query import ChecklistCriterion


def _run(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestWhere:
    def test_csv_ranking(self, fixture_bundle, capsys):
        code, out, _ = _run(
            capsys,
            "where", str(fixture_bundle),
            "--level", "county", "--scope", fixtures.NRW, "--t", "2016-01",
            "--rank-by", "population:desc", "--format", "csv",
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert len(lines) == 4
        assert lines[0] == "Unna,416679"

    def test_predicates_screen_districts(self, fixture_bundle, capsys):
        code, out, _ = _run(
            capsys,
            "where", str(fixture_bundle),
            "--level", "district", "--scope", fixtures.GUETERSLOH, "--t", "2016-01",
            "--predicate", "population>=2500", "--predicate", "supermarket_count=0",
            "--format", "csv",
        )
        assert code == 0
        assert out.strip().splitlines() == ["Herzebrock-Clarholz,15969,0"]

    def test_json_round_trips_engine_numbers(self, fixture_bundle, capsys):
        code, out, _ = _run(
            capsys,
            "where", str(fixture_bundle),
            "--level", "county", "--t", "2016-01", "--rank-by", "population:desc", "--format", "json",
        )
        assert code == 0
        doc = json.loads(out)
        values = [m["values"]["population"]["value"] for m in doc["matches"]]
        assert values == [416679.0, 353944.0, 306131.0, 220662.0]

    def test_bad_predicate_is_data_error(self, fixture_bundle, capsys):
        code, _, err = _run(
            capsys, "where", str(fixture_bundle), "--level", "county", "--predicate", "population !! 3"
        )
        assert code == 2
        assert "bad_predicate" in err


class TestWhen:
    def test_interval_output(self, fixture_bundle, capsys):
        code, out, _ = _run(
            capsys,
            "when", str(fixture_bundle),
            "--site", fixtures.HAMBURG, "--factor", "unemployment_rate", "--predicate", "<7",
        )
        assert code == 0
        assert out.strip() == "2016-06..2016-06"

    def test_between_predicate(self, fixture_bundle, capsys):
        code, out, _ = _run(
            capsys,
            "when", str(fixture_bundle),
            "--site", fixtures.HAMBURG, "--factor", "unemployment_rate", "--predicate", "between 7.0 7.3",
        )
        assert code == 0
        assert out.strip().splitlines() == ["2016-05..2016-05", "2016-07..2016-07"]


class TestWhat:
    def test_table_output(self, fixture_bundle, capsys):
        code, out, _ = _run(
            capsys,
            "what", str(fixture_bundle),
            "--site", fixtures.GUETERSLOH, "--factors", "population,income_per_household", "--t", "2016-01",
        )
        assert code == 0
        assert "population  353944" in out
        assert "income_per_household  18102" in out

    def test_unknown_site_is_data_error(self, fixture_bundle, capsys):
        code, _, err = _run(capsys, "what", str(fixture_bundle), "--site", "nope", "--factors", "population")
        assert code == 2
        assert "unknown_site" in err

    def test_csv_round_trips_fractional_values_exactly(self, fixture_bundle, capsys):
        code, out, _ = _run(
            capsys,
            "what", str(fixture_bundle),
            "--site", fixtures.HAMBURG, "--factors", "unemployment_rate", "--t", "2016-06",
            "--format", "csv",
        )
        assert code == 0
        _, text = out.strip().split(",")
        assert float(text) == 6.9  # no formatting loss


class TestChecklist:
    def test_scores_from_criteria_file(self, fixture_bundle, tmp_path, capsys):
        criteria_path = tmp_path / "criteria.json"
        write_checklist_criteria(
            criteria_path,
            [
                ChecklistCriterion("population", 1.0, 2500.0, 1000.0),
                ChecklistCriterion("supermarket_count", 2.0, 0.0, 2.0, direction="lower_is_better"),
            ],
        )
        code, out, _ = _run(
            capsys,
            "checklist", str(fixture_bundle),
            "--criteria", str(criteria_path),
            "--sites", f"{fixtures.HERZEBROCK_CLARHOLZ},{fixtures.RHEDA_WIEDENBRUECK},{fixtures.LANGENBERG}",
            "--t", "2016-01", "--format", "csv",
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0].startswith(f"{fixtures.HERZEBROCK_CLARHOLZ},3")


class TestChoropleth:
    def test_writes_svg(self, fixture_bundle, tmp_path, capsys):
        out_path = tmp_path / "map.svg"
        code, _, _ = _run(
            capsys,
            "choropleth", str(fixture_bundle),
            "--parent", fixtures.NRW, "--factor", "population", "--t", "2016-01", "--out", str(out_path),
        )
        assert code == 0
        text = out_path.read_text()
        assert text.startswith("<svg") and text.count("<path ") == 4


class TestValidate:
    def test_valid_bundle(self, fixture_bundle, capsys):
        code, out, _ = _run(capsys, "validate", str(fixture_bundle))
        assert code == 0
        assert out.startswith("ok:")

    def test_broken_bundle_lists_errors(self, tmp_path, capsys):
        fixtures.write_fixture_bundle(tmp_path)
        sites = tmp_path / "sites.csv"
        text = sites.read_text().replace(f"{fixtures.UNNA},Unna,county,{fixtures.NRW}", f"{fixtures.UNNA},Unna,county,ghost")
        sites.write_text(text, encoding="utf-8")
        code, _, err = _run(capsys, "validate", str(tmp_path))
        assert code == 2
        assert "unresolved_parent" in err


class TestSynth:
    def test_deterministic_bundles(self, tmp_path, capsys):
        code_a, _, _ = _run(capsys, "synth", "--seed", "5", "--out", str(tmp_path / "a"))
        code_b, _, _ = _run(capsys, "synth", "--seed", "5", "--out", str(tmp_path / "b"))
        assert code_a == code_b == 0
        assert (tmp_path / "a" / "values.csv").read_bytes() == (tmp_path / "b" / "values.csv").read_bytes()

    def test_synth_output_is_loadable(self, tmp_path, capsys):
        code, _, _ = _run(capsys, "synth", "--seed", "1", "--out", str(tmp_path / "s"), "--levels", "1,2,4")
        assert code == 0
        code, out, _ = _run(capsys, "validate", str(tmp_path / "s"))
        assert code == 0


class TestUsageErrors:
    def test_unknown_flag_exits_one(self, fixture_bundle):
        with pytest.raises(SystemExit) as exc:
            run(["validate", str(fixture_bundle), "--frobnicate"])
        assert exc.value.code == 1

    def test_unknown_subcommand_exits_one(self):
        with pytest.raises(SystemExit) as exc:
            run(["conquer"])
        assert exc.value.code == 1

    def test_missing_required_flag_exits_one(self, fixture_bundle):
        with pytest.raises(SystemExit) as exc:
            run(["when", str(fixture_bundle), "--site", "x"])
        assert exc.value.code == 1
