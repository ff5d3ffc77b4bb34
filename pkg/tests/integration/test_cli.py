"""End-to-end runs of the ``bicap`` command line."""

import csv
import json
from pathlib import Path

import pytest

from bicap.cli import EXIT_INPUT, EXIT_OK, EXIT_VIOLATION, SuiteResult, main
from bicap.cli._src import main as cli_main
from bicap.io import dump_json, load_json


def _read_csv(path: Path) -> list[dict[str, str]]:
    with path.open(encoding="utf-8", newline="") as f:
        return list(csv.DictReader(f))


class TestCap:
    def test_single_corner(self, tmp_path: Path) -> None:
        setfile = dump_json({"depth": 1, "nodes": [[[1, 0], [1, 0]]]}, tmp_path / "set.json")
        out = tmp_path / "cap.json"
        assert main(["cap", str(setfile), "--out", str(out)]) == EXIT_OK
        record = load_json(out)
        assert record["cap"] == pytest.approx(0.25, rel=1e-8)
        assert record["certified"] is True

    def test_empty_set(self, tmp_path: Path) -> None:
        setfile = dump_json({"depth": 2, "nodes": []}, tmp_path / "empty.json")
        out = tmp_path / "cap.csv"
        assert main(["cap", str(setfile), "--out", str(out)]) == EXIT_OK
        (row,) = _read_csv(out)
        assert float(row["cap"]) == 0.0

    def test_stdout(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        setfile = dump_json({"nodes": [[0, 0]], "ndim": 1}, tmp_path / "root.json")
        assert main(["cap", str(setfile), "--depth", "3"]) == EXIT_OK
        assert json.loads(capsys.readouterr().out)["cap"] == pytest.approx(1.0, rel=1e-8)

    @pytest.mark.parametrize("content", ["not json", '{"nodes": [[1, 2, 3]]}', '{"depth": 1}'])
    def test_bad_input(self, tmp_path: Path, content: str) -> None:
        setfile = tmp_path / "bad.json"
        setfile.write_text(content, encoding="utf-8")
        assert main(["cap", str(setfile)]) == EXIT_INPUT

    def test_missing_file(self, tmp_path: Path) -> None:
        assert main(["cap", str(tmp_path / "nowhere.json")]) == EXIT_INPUT


class TestSuite:
    def test_oracles(self, tmp_path: Path) -> None:
        out = tmp_path / "oracles.json"
        code = main(["suite", "oracles", "--count", "1", "--depth", "2", "--out", str(out)])
        assert code == EXIT_OK
        record = load_json(out)
        assert record["suite"] == "oracles"
        assert record["violations"] == []
        assert record["config"]["seed"] == 0

    def test_sci_csv_has_one_row_per_level(self, tmp_path: Path) -> None:
        out = tmp_path / "sci.csv"
        assert main(["suite", "sci", "--count", "2", "--depth", "2", "--out", str(out)]) == EXIT_OK
        with out.open(encoding="utf-8", newline="") as f:
            header = next(csv.reader(f))
        assert header == [
            "instance",
            "L",
            "k",
            "cap_Ek",
            "term",
            "cumulative",
            "norm_sq_f",
            "ratio",
        ]
        rows = _read_csv(out)
        assert {r["instance"] for r in rows} == {"0", "1"}
        for instance in ("0", "1"):
            levels = [r for r in rows if r["instance"] == instance]
            ks = [int(r["k"]) for r in levels]
            assert ks == sorted(ks)
            assert len(set(ks)) == len(ks)
            # the last cumulative term over |f|^2 is the ratio
            last = levels[-1]
            ratio = float(last["cumulative"]) / float(last["norm_sq_f"])
            assert ratio == pytest.approx(float(last["ratio"]), rel=1e-9)

    def test_needs_a_name(self) -> None:
        assert main(["suite"]) == EXIT_INPUT

    def test_violation_writes_a_replay(self, tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
        def failing(config):
            return SuiteResult(
                name=config.suite,
                rows=({"instance": 0},),
                violations=({"check": "forced", "instance": 0},),
                uncertified=0,
                summary={"rows": 1, "violations": 1},
            )

        monkeypatch.setattr(cli_main, "run_suite", failing)
        out = tmp_path / "run.json"
        code = main(["suite", "sci", "--seed", "7", "--count", "1", "--out", str(out)])
        assert code == EXIT_VIOLATION
        replay = Path(f"{out}.replay.json")
        stored = load_json(replay)
        assert stored["violation"]["check"] == "forced"
        assert stored["config"]["seed"] == 7

        # the replay re-runs the stored configuration
        seen = {}

        def recording(config):
            seen["config"] = config
            return SuiteResult(config.suite, (), (), 0, {"rows": 0, "violations": 0})

        monkeypatch.setattr(cli_main, "run_suite", recording)
        assert main(["suite", "--replay", str(replay), "--out", str(tmp_path / "again.json")]) == EXIT_OK
        assert (seen["config"].suite, seen["config"].seed) == ("sci", 7)


class TestMerge:
    @pytest.fixture
    def reports(self, tmp_path: Path) -> list[Path]:
        paths = []
        for i in range(2):
            path = tmp_path / f"r{i}.csv"
            path.write_text(f"a,b\n{i},x\n{i},y\n", encoding="utf-8")
            paths.append(path)
        return paths

    def test_provenance(self, tmp_path: Path, reports: list[Path]) -> None:
        out = tmp_path / "merged.csv"
        assert main(["merge", *map(str, reports), "--out", str(out)]) == EXIT_OK
        rows = _read_csv(out)
        assert list(rows[0]) == ["source", "source_row", "a", "b"]
        assert [(r["source"], r["source_row"]) for r in rows] == [
            (str(reports[0]), "0"),
            (str(reports[0]), "1"),
            (str(reports[1]), "0"),
            (str(reports[1]), "1"),
        ]

    def test_schema_mismatch(self, tmp_path: Path, reports: list[Path]) -> None:
        other = tmp_path / "other.csv"
        other.write_text("a,c\n1,2\n", encoding="utf-8")
        assert main(["merge", str(reports[0]), str(other)]) == EXIT_INPUT


def test_counterexample_report(tmp_path: Path) -> None:
    out = tmp_path / "stairs.csv"
    assert main(["counterexample", "--report", str(out)]) == EXIT_OK
    rows = _read_csv(out)
    assert [(r["level_x"], r["level_y"]) for r in rows] == [("3", "0"), ("1", "1"), ("0", "3")]
    assert max(float(r["potential"]) for r in rows) == pytest.approx(1.0, rel=1e-9)
