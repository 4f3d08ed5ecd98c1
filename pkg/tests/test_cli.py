import json

import pytest

from lexitag.cli import main

from conftest import entity_line


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestInitAndIndex:
    def test_init_creates_layout(self, tmp_path, capsys):
        root = tmp_path / "proj"
        code, out, _ = run(capsys, "init", str(root), "--lang", "et")
        assert code == 0
        assert (root / "config.json").exists()
        assert (root / "lexicons").is_dir()

    def test_index_prints_and_caches(self, tmp_path, capsys):
        dump = tmp_path / "dump.json"
        dump.write_text(
            "\n".join(
                [
                    entity_line("Q5", labels={"en": "human"}),
                    entity_line("Q1", instance_of=["Q5"]),
                    entity_line("Q2", instance_of=["Q5"]),
                ]
            ),
            encoding="utf-8",
        )
        cache = tmp_path / "cache"
        code, out, _ = run(
            capsys, "index", str(dump), "--lang", "en", "--cache-dir", str(cache)
        )
        assert code == 0
        assert "Q5\t2\thuman" in out
        assert list(cache.glob("*.json"))

    def test_index_query(self, tmp_path, capsys):
        dump = tmp_path / "dump.json"
        dump.write_text(
            "\n".join(
                [
                    entity_line("Q5", labels={"en": "human"}),
                    entity_line("Q1", instance_of=["Q5"]),
                ]
            ),
            encoding="utf-8",
        )
        code, out, _ = run(
            capsys, "index", str(dump), "--lang", "en", "--query", "hum", "--json"
        )
        assert code == 0
        assert json.loads(out)[0]["label"] == "human"


class TestExtract:
    def test_unknown_class_warns_exit_zero(self, tmp_path, capsys):
        dump = tmp_path / "dump.json"
        dump.write_text(entity_line("Q1", labels={"en": "x"}), encoding="utf-8")
        out_path = tmp_path / "lex.json"
        code, _, err = run(
            capsys,
            "extract",
            str(dump),
            "--class-id",
            "Q999",
            "--lang",
            "en",
            "--label",
            "X",
            "--out",
            str(out_path),
        )
        assert code == 0
        assert "warning" in err
        assert json.loads(out_path.read_text())["entries"] == []


class TestAnnotate:
    def test_empty_corpus(self, fixture_project, tmp_path, capsys):
        empty = tmp_path / "empty.conll"
        empty.write_text("", encoding="utf-8")
        out_path = tmp_path / "out.conll"
        code, _, _ = run(
            capsys,
            "annotate",
            str(fixture_project.root),
            str(empty),
            "--out",
            str(out_path),
        )
        assert code == 0
        assert out_path.read_text() == ""

    def test_annotates_fixture(self, fixture_project, tmp_path, capsys):
        corpus = fixture_project.corpus_dir / "demo.conll"
        code, out, _ = run(capsys, "annotate", str(fixture_project.root), str(corpus))
        assert code == 0
        assert "United B-COUNTRY" in out
        assert "Arab I-COUNTRY" in out

    def test_idempotent_byte_identical(self, fixture_project, tmp_path, capsys):
        corpus = fixture_project.corpus_dir / "demo.conll"
        out1, out2 = tmp_path / "a.conll", tmp_path / "b.conll"
        for out_path in (out1, out2):
            code, _, _ = run(
                capsys,
                "annotate",
                str(fixture_project.root),
                str(corpus),
                "--out",
                str(out_path),
            )
            assert code == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_project_from_environment(self, fixture_project, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv("LEXITAG_PROJECT", str(fixture_project.root))
        corpus = fixture_project.corpus_dir / "demo.conll"
        code, out, _ = run(capsys, "annotate", str(corpus))
        assert code == 0
        assert "B-COUNTRY" in out


class TestEval:
    def write_pair(self, tmp_path):
        gold = tmp_path / "gold.conll"
        pred = tmp_path / "pred.conll"
        gold.write_text("w1 B-X\nw2 B-X\nw3 O\nw4 B-X\n", encoding="utf-8")
        pred.write_text("w1 B-X\nw2 B-X\nw3 B-X\nw4 O\n", encoding="utf-8")
        return pred, gold

    def test_prints_one_decimal_percentages(self, fixture_project, tmp_path, capsys):
        pred, gold = self.write_pair(tmp_path)
        code, out, _ = run(
            capsys, "eval", str(fixture_project.root), str(pred), str(gold)
        )
        assert code == 0
        row = next(line for line in out.splitlines() if line.startswith("X"))
        assert row.split()[1:4] == ["66.7", "66.7", "66.7"]

    def test_json_output(self, fixture_project, tmp_path, capsys):
        pred, gold = self.write_pair(tmp_path)
        code, out, _ = run(
            capsys, "eval", str(fixture_project.root), str(pred), str(gold), "--json"
        )
        assert code == 0
        data = json.loads(out)
        assert data["per_label"]["X"]["tp"] == 2

    def test_record_appends_history(self, fixture_project, tmp_path, capsys):
        pred, gold = self.write_pair(tmp_path)
        code, _, _ = run(
            capsys,
            "eval",
            str(fixture_project.root),
            str(pred),
            str(gold),
            "--record",
            "baseline",
        )
        assert code == 0
        history = fixture_project.history()
        assert history[-1].description == "baseline"
        assert history[-1].metrics["labels"]["X"]["precision"] == pytest.approx(2 / 3)


class TestReport:
    def test_writes_tsv_and_figures(self, fixture_project, tmp_path, capsys):
        gold = tmp_path / "gold.conll"
        pred = tmp_path / "pred.conll"
        gold.write_text("Of O\nTallinn B-LOC\n", encoding="utf-8")
        pred.write_text("Of B-LOC\nTallinn B-LOC\n", encoding="utf-8")
        out_dir = tmp_path / "report"
        code, out, _ = run(
            capsys,
            "report",
            str(fixture_project.root),
            str(pred),
            str(gold),
            "--out-dir",
            str(out_dir),
        )
        assert code == 0
        assert (out_dir / "metrics.tsv").exists()
        assert (out_dir / "errors.tsv").exists()
        assert (out_dir / "metrics.png").stat().st_size > 0
        metrics = (out_dir / "metrics.tsv").read_text().splitlines()
        assert metrics[0].startswith("label\t")
        assert any(line.startswith("LOC\t0.5") for line in metrics)

    def test_report_deterministic(self, fixture_project, tmp_path, capsys):
        gold = tmp_path / "gold.conll"
        pred = tmp_path / "pred.conll"
        gold.write_text("a B-X\n", encoding="utf-8")
        pred.write_text("a B-X\n", encoding="utf-8")
        dirs = [tmp_path / "r1", tmp_path / "r2"]
        for out_dir in dirs:
            code, _, _ = run(
                capsys,
                "report",
                str(fixture_project.root),
                str(pred),
                str(gold),
                "--out-dir",
                str(out_dir),
            )
            assert code == 0
        assert (dirs[0] / "metrics.png").read_bytes() == (dirs[1] / "metrics.png").read_bytes()


class TestExitCodes:
    def test_usage_error_is_one(self, capsys):
        with pytest.raises(SystemExit) as exc_info:
            main(["extract"])  # missing required options
        assert exc_info.value.code == 1

    def test_data_error_is_two(self, fixture_project, tmp_path, capsys):
        bad = tmp_path / "bad.conll"
        bad.write_text("token NOT_A_TAG\n", encoding="utf-8")
        code, _, err = run(
            capsys, "eval", str(fixture_project.root), str(bad), str(bad)
        )
        assert code == 2
        assert "error" in err

    def test_missing_file_is_two(self, fixture_project, capsys):
        code, _, _ = run(
            capsys, "eval", str(fixture_project.root), "nope.conll", "nope.conll"
        )
        assert code == 2
