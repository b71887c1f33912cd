"""Command-line surface: exit codes, report shapes, CSV output."""

import json

import numpy as np
import pytest

from clenshaw_gnn.cli import main


def write_two_cliques(tmp_path):
    edges = tmp_path / "edges.txt"
    edges.write_text("0 1\n1 2\n0 2\n3 4\n4 5\n3 5\n")
    labels = tmp_path / "labels.txt"
    labels.write_text("0\n0\n0\n1\n1\n1\n")
    return edges, labels


class TestVerifyCommand:
    def test_clenshaw_suite_passes(self, tmp_path, capsys):
        out = tmp_path / "report.json"
        code = main(["verify", "--suite", "clenshaw-scalar", "--seed", "3", "--trials", "200", "--out", str(out)])
        assert code == 0
        report = json.loads(out.read_text())
        assert report["passed"] is True
        names = {c["name"] for c in report["checks"]}
        assert "clenshaw-vs-direct" in names
        assert "gaussian-elimination-witness" in names
        assert (tmp_path / "report.json.manifest.json").exists()

    def test_unknown_suite_exits_2(self):
        with pytest.raises(SystemExit) as err:
            main(["verify", "--suite", "nonsense"])
        assert err.value.code == 2

    def test_report_is_deterministic(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        main(["verify", "--suite", "gcnii-unfold", "--seed", "5", "--out", str(a)])
        main(["verify", "--suite", "gcnii-unfold", "--seed", "5", "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_env_var_supplies_default_seed(self, tmp_path, monkeypatch):
        monkeypatch.setenv("CLENSHAW_SEED", "11")
        out = tmp_path / "seeded.json"
        main(["verify", "--suite", "gcnii-unfold", "--out", str(out)])
        assert json.loads(out.read_text())["seed"] == 11

    def test_manifest_round_trip(self, tmp_path):
        first = tmp_path / "first.json"
        main(["verify", "--suite", "clenshaw-scalar", "--seed", "11", "--trials", "50", "--out", str(first)])
        manifest = json.loads((tmp_path / "first.json.manifest.json").read_text())
        again = tmp_path / "again.json"
        rerun = manifest["args"]
        code = main([
            "verify", "--suite", rerun["suite"], "--seed", str(rerun["seed"]),
            "--trials", str(rerun["trials"]), "--out", str(again),
        ])
        assert code == 0
        assert again.read_bytes() == first.read_bytes()


class TestFilterResponseCommand:
    def test_constant_filter(self, tmp_path):
        out = tmp_path / "resp.csv"
        code = main(["filter-response", "--alphas", "1", "--basis", "monomial", "--grid", "5", "--out", str(out)])
        assert code == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "mu,h"
        assert all(line.split(",")[1] == "1" for line in lines[1:])

    def test_identity_init_curve(self, tmp_path):
        # layer-ordered (0,...,0,1) reversed onto the Chebyshev basis is U_0
        out = tmp_path / "resp.csv"
        main(["filter-response", "--alphas", "0,0,0,1", "--basis", "chebyshev-u", "--grid", "7", "--out", str(out)])
        values = [float(line.split(",")[1]) for line in out.read_text().strip().splitlines()[1:]]
        np.testing.assert_allclose(values, 1.0)

    def test_alphas_from_file(self, tmp_path):
        spec = tmp_path / "alphas.txt"
        spec.write_text("0.5\n0.5\n")
        out = tmp_path / "resp.csv"
        assert main(["filter-response", "--alphas", str(spec), "--grid", "3", "--out", str(out)]) == 0

    def test_bad_alphas_exit_2(self):
        assert main(["filter-response", "--alphas", "zero,one"]) == 2


class TestHomophilyCommand:
    def test_two_cliques(self, tmp_path):
        edges, labels = write_two_cliques(tmp_path)
        out = tmp_path / "h.json"
        code = main(["homophily", "--edges", str(edges), "--labels", str(labels), "--out", str(out)])
        assert code == 0
        assert json.loads(out.read_text())["homophily"] == 1.0

    def test_missing_file_exit_2(self, tmp_path):
        assert main(["homophily", "--edges", str(tmp_path / "nope"), "--labels", str(tmp_path / "nah")]) == 2


class TestSpectrumCommand:
    def test_edgeless_graph_all_ones(self, tmp_path):
        edges = tmp_path / "edges.txt"
        edges.write_text("# no edges\n")
        out = tmp_path / "mu.csv"
        code = main(["spectrum", "--edges", str(edges), "--n", "3", "--out", str(out)])
        assert code == 0
        values = [float(v) for v in out.read_text().strip().splitlines()[1:]]
        np.testing.assert_allclose(values, [1.0, 1.0, 1.0])

    def test_triangle_spectrum(self, tmp_path):
        edges = tmp_path / "edges.txt"
        edges.write_text("0 1\n1 2\n0 2\n")
        out = tmp_path / "mu.csv"
        main(["spectrum", "--edges", str(edges), "--out", str(out)])
        values = [float(v) for v in out.read_text().strip().splitlines()[1:]]
        np.testing.assert_allclose(values, [0.0, 0.0, 1.0], atol=1e-12)
        assert values == sorted(values)

    def test_over_limit_exit_2(self, tmp_path):
        edges = tmp_path / "edges.txt"
        edges.write_text("0 1\n1 2\n2 3\n3 4\n")
        assert main(["spectrum", "--edges", str(edges), "--dense-limit", "3"]) == 2


class TestTrainCommand:
    def test_sbm_smoke_run(self, tmp_path):
        out = tmp_path / "run"
        code = main([
            "train", "--sbm", "hetero-default", "--sbm-n-per-block", "15",
            "--sbm-p-in", "0.1", "--sbm-p-out", "0.5",
            "--variant", "clenshaw", "--k", "2", "--hidden", "8",
            "--seeds", "0..1", "--max-epochs", "5", "--patience", "5",
            "--out", str(out),
        ])
        assert code == 0
        results = json.loads((out / "results.json").read_text())
        assert len(results["runs"]) == 2
        assert results["mean_test_acc"] is not None
        assert (out / "checkpoint_seed0.json").exists()
        assert (out / "results.json.manifest.json").exists()

    def test_missing_label_file_exit_2(self, tmp_path):
        code = main([
            "train", "--edges", str(tmp_path / "e.txt"), "--features", str(tmp_path / "x.csv"),
            "--labels", str(tmp_path / "y.txt"), "--seeds", "0",
        ])
        assert code == 2

    def test_fixed_param_echoes_fixed_alphas(self, tmp_path):
        out = tmp_path / "run"
        code = main([
            "train", "--sbm", "homo-default", "--sbm-n-per-block", "15",
            "--variant", "fixed-param", "--fixed-alpha", "0.3", "--k", "2", "--hidden", "8",
            "--seeds", "0", "--max-epochs", "4", "--patience", "4", "--out", str(out),
        ])
        assert code == 0
        results = json.loads((out / "results.json").read_text())
        alphas = results["runs"][0]["alphas"]
        np.testing.assert_allclose(sum(alphas), 1.0)

    def test_checkpoint_feeds_filter_response(self, tmp_path):
        out = tmp_path / "run"
        main([
            "train", "--sbm", "homo-default", "--sbm-n-per-block", "10",
            "--variant", "clenshaw", "--k", "2", "--hidden", "8",
            "--seeds", "0", "--max-epochs", "3", "--patience", "3", "--out", str(out),
        ])
        resp = tmp_path / "resp.csv"
        code = main([
            "filter-response", "--alphas", str(out / "checkpoint_seed0.json"),
            "--basis", "chebyshev-u", "--grid", "5", "--out", str(resp),
        ])
        assert code == 0
        assert len(resp.read_text().strip().splitlines()) == 6
