import json
import math

import pytest

from edmfit import ClassId, FitConfig, PoolingRule, fit_mle
from edmfit.cli import main
from edmfit.datasets import BUILTINS
from edmfit.report import ModelRow, ReportDocument, StatsBlock, write_svg_histogram
from edmfit.reproduce import run_reproduction


class TestReportRoundTrip:
    def test_fit_document(self):
        fit = fit_mle(
            ClassId.ABM, 2, BUILTINS["set4"].data,
            FitConfig(pooling=PoolingRule(explicit_cut=7)),
        )
        doc = ReportDocument(
            kind="fit",
            dataset="set4",
            observed=BUILTINS["set4"].data.frequencies,
            models=(ModelRow.from_fit("abm(r=2)", fit),),
            pooling="explicit_cut=7",
        )
        assert ReportDocument.from_json(doc.to_json()) == doc

    def test_reproduction_document(self):
        doc = run_reproduction(6)
        assert ReportDocument.from_json(doc.to_json()) == doc
        text = doc.to_text()
        assert "RESULT" in text and "set6" in text

    def test_stats_document(self):
        doc = ReportDocument(
            kind="stats",
            dataset="d",
            stats=StatsBlock(10, 1.5, 2.25, 0.1, 0.03, 1.5, 0.4),
        )
        assert ReportDocument.from_json(doc.to_json()) == doc


class TestSvg:
    def test_writes_bar_chart(self, tmp_path):
        path = tmp_path / "h.svg"
        write_svg_histogram([0.5, 0.3, 0.2], path, title="demo")
        text = path.read_text()
        assert text.startswith("<svg")
        assert text.count("<rect") >= 4  # background + one bar per value


class TestCli:
    def test_stats_builtin(self, capsys):
        assert main(["stats", "--builtin", "set1"]) == 0
        out = capsys.readouterr().out
        assert "0.86526" in out  # zero fraction
        assert "1.15583" in out  # dispersion index

    def test_stats_bad_file(self, tmp_path, capsys):
        path = tmp_path / "empty.csv"
        path.write_text("# nothing\n")
        assert main(["stats", "--file", str(path)]) == 2
        assert "error:" in capsys.readouterr().err

    def test_pmf_values(self, capsys):
        assert main(["pmf", "--class", "abm", "-r", "2", "-p", "1", "-m", "1", "-N", "3"]) == 0
        out = capsys.readouterr().out
        assert "0.60653066" in out
        assert "0.18393972" in out
        assert "0.08367381" in out
        assert "0.04511176" in out

    def test_pmf_lmns_poisson_limit(self, capsys):
        assert main(
            ["pmf", "--class", "lmns", "-r", "1", "-p", "1000000", "-m", "1", "-N", "2"]
        ) == 0
        out = capsys.readouterr().out
        assert f"{math.exp(-1):.4f}"[:6] in out

    def test_pmf_requires_parameters(self, capsys):
        assert main(["pmf", "--class", "abm", "-m", "1"]) == 2

    def test_pmf_svg_and_json(self, tmp_path, capsys):
        svg = tmp_path / "pmf.svg"
        js = tmp_path / "pmf.json"
        rc = main([
            "pmf", "--class", "poisson", "-m", "0.5", "-N", "5",
            "--svg", str(svg), "--json", str(js),
        ])
        assert rc == 0
        assert svg.read_text().startswith("<svg")
        payload = json.loads(js.read_text())
        assert payload["probs"][0] == pytest.approx(math.exp(-0.5))

    def test_fit_single_power(self, tmp_path, capsys):
        js = tmp_path / "fit.json"
        rc = main(["fit", "--class", "abm", "-r", "9", "--builtin", "set2", "--json", str(js)])
        assert rc == 0
        doc = ReportDocument.from_json(js.read_text())
        assert doc.models[0].rmse == pytest.approx(0.7212, abs=0.05)

    def test_fit_select(self, capsys):
        rc = main(["fit", "--class", "lmns", "--select", "--builtin", "set1"])
        assert rc == 0
        out = capsys.readouterr().out
        assert "r=1" in out and "8.15" in out

    def test_fit_lms_open_tail(self, capsys):
        rc = main(["fit", "--class", "lms", "-r", "3", "--builtin", "set6"])
        assert rc == 0
        assert "-969.06" in capsys.readouterr().out

    def test_fit_baselines(self, capsys):
        assert main(["fit", "--class", "poisson", "--builtin", "set4"]) == 0
        assert main(["fit", "--class", "nb", "--builtin", "set4"]) == 0

    def test_fit_needs_mode(self, capsys):
        assert main(["fit", "--class", "abm", "--builtin", "set4"]) == 2

    def test_reproduce_unknown_table(self, capsys):
        assert main(["reproduce", "7"]) == 2
        assert "unknown table" in capsys.readouterr().err

    def test_reproduce_six_passes(self, tmp_path, capsys):
        js = tmp_path / "t6.json"
        rc = main(["reproduce", "6", "--json", str(js)])
        out = capsys.readouterr().out
        assert "RESULT: PASS" in out
        assert rc == 0
        doc = ReportDocument.from_json(js.read_text())
        assert doc.passed is True

    def test_selfcheck(self, capsys):
        assert main(["selfcheck"]) == 0
        assert "ok" in capsys.readouterr().out

    def test_json_round_trips_printed_values(self, tmp_path, capsys):
        js = tmp_path / "stats.json"
        assert main(["stats", "--builtin", "set2", "--json", str(js)]) == 0
        doc = ReportDocument.from_json(js.read_text())
        assert doc.stats.zero_fraction == pytest.approx(0.929750, abs=1e-6)
        assert ReportDocument.from_json(doc.to_json()) == doc
