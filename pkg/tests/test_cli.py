import json

import numpy as np
import pytest

from castree.cli import main
from castree.graph import load_edge_list, parse_report_file, write_report_file
from castree.reconstruct import read_tree
from castree.simulate import read_cascade, sample_reports


def run_cli(*args):
    return main(list(args))


@pytest.fixture
def graph_file(tmp_path):
    path = tmp_path / "g.txt"
    assert run_cli("gen-graph", "--nodes", "60", "--attach", "2",
                   "--seed", "7", "--out", str(path)) == 0
    return path


class TestGenGraph:
    def test_writes_loadable_graph(self, graph_file):
        g = load_edge_list(graph_file)
        assert g.node_count == 60
        assert g.edge_count == 2 * 58
        assert graph_file.read_text().startswith("# nodes: 60\n")

    def test_bad_parameters_exit_2(self, tmp_path):
        assert run_cli("gen-graph", "--nodes", "2", "--attach", "5",
                       "--out", str(tmp_path / "x")) == 2


class TestPipeline:
    def test_simulate_reconstruct_evaluate(self, tmp_path, graph_file, capsys):
        cascade_file = tmp_path / "c.tsv"
        assert run_cli("simulate", "--graph", str(graph_file), "--model", "sp",
                       "--stop", "1.0", "--source", "0", "--seed", "1",
                       "--out", str(cascade_file)) == 0
        g = load_edge_list(graph_file)
        cascade = read_cascade(cascade_file.read_text(), g.node_count)
        assert cascade.infected_count == 60

        reports = sample_reports(cascade, 0.3, np.random.default_rng(5))
        reports_file = tmp_path / "r.tsv"
        with open(reports_file, "w") as f:
            write_report_file(reports, f)

        for algo in ("closure", "greedy", "delayed-bfs", "steiner"):
            tree_file = tmp_path / f"t-{algo}.tsv"
            assert run_cli("reconstruct", "--graph", str(graph_file),
                           "--reports", str(reports_file), "--algo", algo,
                           "--out", str(tree_file)) == 0
            tree = read_tree(tree_file.read_text())
            assert reports.node_set <= tree.node_set

            capsys.readouterr()
            assert run_cli("evaluate", "--tree", str(tree_file),
                           "--cascade", str(cascade_file),
                           "--graph", str(graph_file)) == 0
            payload = json.loads(capsys.readouterr().out)
            assert payload["precision"] == 1.0  # full cascade: no wrong nodes
            assert set(payload) == {"tree_size", "precision", "recall",
                                    "order_accuracy"}

    def test_infeasible_reports_exit_3(self, tmp_path):
        graph_file = tmp_path / "p.txt"
        graph_file.write_text("0 1\n1 2\n")
        reports_file = tmp_path / "r.tsv"
        reports_file.write_text("0\t0.0\n1\t2.0\n2\t1.0\n")
        tree_file = tmp_path / "t.tsv"
        assert run_cli("reconstruct", "--graph", str(graph_file),
                       "--reports", str(reports_file), "--algo", "greedy",
                       "--out", str(tree_file)) == 3

    def test_missing_graph_exit_2(self, tmp_path):
        assert run_cli("simulate", "--graph", str(tmp_path / "nope.txt"),
                       "--model", "sp", "--out", str(tmp_path / "c.tsv")) == 2


class TestExperimentCommand:
    def test_flags_only_run(self, tmp_path):
        out = tmp_path / "rows.csv"
        code = run_cli("experiment", "--ba-nodes", "60", "--ba-attach", "2",
                       "--model", "sp", "--stop", "1.0", "--q", "0.3",
                       "--q", "0.6", "--algo", "greedy", "--algo", "steiner",
                       "--runs", "2", "--seed", "11", "--out", str(out))
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0].startswith("graph,model,algo,q,run")
        assert len(lines) == 1 + 2 * 2 * 2

    def test_rerun_is_byte_identical(self, tmp_path):
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["experiment", "--ba-nodes", "50", "--ba-attach", "2",
                "--model", "si", "--p", "0.5", "--q", "0.2",
                "--algo", "closure", "--runs", "3", "--seed", "123"]
        assert run_cli(*args, "--out", str(out1)) == 0
        assert run_cli(*args, "--out", str(out2)) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_config_file_with_flag_override(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({
            "model": "sp", "ba_nodes": 40, "ba_attach": 2,
            "stop_fraction": 1.0, "q_list": [0.5], "runs": 1,
            "master_seed": 9, "algorithms": ["greedy"],
        }))
        out = tmp_path / "o.csv"
        assert run_cli("experiment", "--config", str(cfg), "--runs", "2",
                       "--out", str(out)) == 0
        assert len(out.read_text().splitlines()) == 3

    def test_missing_out_exit_2(self):
        assert run_cli("experiment", "--ba-nodes", "40", "--ba-attach", "2",
                       "--model", "sp") == 2

    def test_bad_config_exit_2(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text("not json")
        assert run_cli("experiment", "--config", str(cfg),
                       "--out", str(tmp_path / "o.csv")) == 2
