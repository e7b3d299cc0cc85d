import json

import pytest

from sparselab.cli import main
from sparselab.graph import WeightedGraph, make_clique, make_cycle, read_edge_list, write_edge_list


@pytest.fixture
def graph_files(tmp_path):
    h = tmp_path / "h.edges"
    g = tmp_path / "g.edges"
    write_edge_list(make_cycle(4, 1.5), h)
    write_edge_list(make_clique(4, 1.0), g)
    return h, g


def run_cli(args):
    return main([str(a) for a in args])


class TestGenerate:
    def test_writes_valid_edge_list(self, tmp_path):
        out = tmp_path / "g.edges"
        assert run_cli(["generate", "--n", "10", "--d", "4", "--seed", "3", "--out", out]) == 0
        g = read_edge_list(out)
        assert g.n == 10 and g.total_weight == 20.0

    def test_odd_n_exits_2(self, tmp_path):
        assert run_cli(["generate", "--n", "9", "--d", "2", "--out", tmp_path / "x"]) == 2

    def test_stdout_mode(self, capsys):
        assert run_cli(["generate", "--n", "4", "--d", "1", "--seed", "1"]) == 0
        out = capsys.readouterr().out
        assert out.startswith("n 4")


class TestCutError:
    def test_exhaustive_c4_vs_k4(self, graph_files, tmp_path, capsys):
        h, g = graph_files
        out = tmp_path / "rep.json"
        code = run_cli(["cut-error", "--h-file", h, "--g-file", g, "--exhaustive", "--out", out])
        assert code == 0
        rep = json.loads(out.read_text())
        assert rep["epsilon"] == pytest.approx(0.5)
        assert rep["witness"] == [0, 2]

    def test_size_cap_exits_3(self, tmp_path):
        big = tmp_path / "big.edges"
        write_edge_list(make_clique(32, 1.0), big)
        assert run_cli(["cut-error", "--h-file", big, "--g-file", big, "--exhaustive"]) == 3

    def test_degenerate_reference_exits_4(self, tmp_path):
        h = tmp_path / "h.edges"
        g = tmp_path / "g.edges"
        write_edge_list(make_clique(4, 1.0), h)
        write_edge_list(WeightedGraph(4, [(0, 1, 1.0), (2, 3, 1.0)]), g)
        assert run_cli(["cut-error", "--h-file", h, "--g-file", g, "--exhaustive"]) == 4

    def test_parse_error_exits_2(self, tmp_path):
        bad = tmp_path / "bad.edges"
        bad.write_text("not a header\n")
        ok = tmp_path / "ok.edges"
        write_edge_list(make_clique(4, 1.0), ok)
        assert run_cli(["cut-error", "--h-file", bad, "--g-file", ok]) == 2


class TestSpectralAndCertify:
    def test_spectral_error_json(self, graph_files, tmp_path):
        h, g = graph_files
        out = tmp_path / "spectral.json"
        assert run_cli(["spectral-error", "--h-file", h, "--g-file", g, "--out", out]) == 0
        rep = json.loads(out.read_text())
        assert rep["epsilon"] == pytest.approx(0.5)
        assert rep["kernel_ok"] is True

    def test_not_comparable_exits_4(self, tmp_path):
        h = tmp_path / "h.edges"
        g = tmp_path / "g.edges"
        write_edge_list(make_clique(4, 1.0), h)
        write_edge_list(WeightedGraph(4, [(0, 1, 1.0), (2, 3, 1.0)]), g)
        assert run_cli(["spectral-error", "--h-file", h, "--g-file", g]) == 4

    def test_certify_emits_products(self, tmp_path):
        h = tmp_path / "h.edges"
        write_edge_list(make_cycle(50, 0.5), h)
        out = tmp_path / "cert.json"
        assert run_cli(["certify", "--h-file", h, "--g", "4", "--d", "2", "--out", out]) == 0
        rep = json.loads(out.read_text())
        assert rep["epsilon_lb"] > 0.0
        assert set(rep["products"]) == {"x_dot_lh", "x_dot_lk", "y_dot_lh", "y_dot_lk", "y_dot_dh", "ymx_dot_ah"}

    def test_certify_disconnected_exits_2(self, tmp_path):
        h = tmp_path / "h.edges"
        write_edge_list(WeightedGraph(6, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0), (3, 4, 1.0), (4, 5, 1.0), (3, 5, 1.0)]), h)
        assert run_cli(["certify", "--h-file", h, "--g", "2", "--d", "2"]) == 2


class TestBoundsCli:
    def test_alpha_csv(self, tmp_path):
        out = tmp_path / "t.csv"
        assert run_cli(["bounds", "--alphas", "0.1,0.5,0.9", "--out", out]) == 0
        lines = out.read_text().strip().splitlines()
        assert len(lines) == 4
        assert lines[0].split(",")[0] == "kind"

    def test_empty_grid_header_only(self, capsys):
        assert run_cli(["bounds"]) == 0
        out = capsys.readouterr().out.strip().splitlines()
        assert len(out) == 1

    def test_tail_grid(self, tmp_path):
        out = tmp_path / "t.csv"
        assert run_cli(["bounds", "--tail-grid", "2000,10,16;5000,25,64", "--out", out]) == 0
        assert len(out.read_text().strip().splitlines()) == 3

    def test_bad_grid_exits_2(self):
        assert run_cli(["bounds", "--tail-grid", "10,5,4"]) == 2  # k = n/2 out of domain


class TestMartingaleCli:
    def test_summary_and_trace(self, tmp_path):
        out = tmp_path / "m.json"
        trace = tmp_path / "trace.csv"
        code = run_cli([
            "martingale", "--n", "40", "--k", "10", "--d", "3", "--seed", "2",
            "--trials", "200", "--delta", "1.0", "--out", out, "--trace-out", trace,
        ])
        assert code == 0
        rep = json.loads(out.read_text())
        assert rep["trace_summary"]["steps"] == 27
        assert "empirical_tail" in rep
        lines = trace.read_text().strip().splitlines()
        assert lines[0] == "ell,z,w,x,y,a,b,quad_char"
        assert len(lines) == 28

    def test_bad_domain_exits_2(self):
        assert run_cli(["martingale", "--n", "9", "--k", "2", "--d", "1"]) == 2


class TestExperimentsCli:
    def test_clique_sparsify_json(self, tmp_path):
        out = tmp_path / "cs.json"
        assert run_cli(["clique-sparsify", "--n", "12", "--d", "4", "--seeds", "2", "--out", out]) == 0
        rep = json.loads(out.read_text())
        assert len(rep["records"]) == 2

    def test_clique_sparsify_csv(self, tmp_path):
        out = tmp_path / "cs.csv"
        assert run_cli(["clique-sparsify", "--n", "12", "--d", "4", "--format", "csv", "--out", out]) == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "seed,k,alpha,max_dev,min_dev,mode,samples"
        assert len(lines) == 7  # one seed, six sizes

    def test_separation_smoke(self, tmp_path):
        out = tmp_path / "sep.json"
        code = run_cli([
            "separation", "--n", "20", "--big-degree", "8", "--d", "8",
            "--seeds", "1", "--g", "2", "--target", "parent", "--out", out,
        ])
        assert code == 0
        rep = json.loads(out.read_text())
        assert rep["records"][0]["eps_cut"] == pytest.approx(0.0, abs=1e-12)

    def test_concentration_smoke(self, tmp_path):
        out = tmp_path / "c.json"
        code = run_cli(["concentration", "--n", "16", "--alphas", "0.5", "--d", "4", "--seeds", "4", "--out", out])
        assert code == 0
        rep = json.loads(out.read_text())
        assert rep["per_alpha"][0]["k"] == 8


class TestReplayDeterminism:
    def test_byte_identical_modulo_timestamp(self, tmp_path):
        outs = []
        for name in ("a.json", "b.json"):
            out = tmp_path / name
            assert run_cli([
                "clique-sparsify", "--n", "12", "--d", "4", "--seeds", "2", "--seed", "7", "--out", out,
            ]) == 0
            data = json.loads(out.read_text())
            del data["generated_at"]
            outs.append(json.dumps(data, sort_keys=True))
        assert outs[0] == outs[1]
