import csv
import json
import subprocess
import sys

import pytest

from modclust.bench import (
    CSV_HEADER,
    ManifestEntry,
    RunConfig,
    read_configs,
    read_manifest,
    run_benchmark,
    run_config,
)
from modclust.cli import main
from modclust.coarsening import single_step_greedy
from modclust.datasets import bundled_path, load_bundled
from modclust.graph import modularity
from modclust.io import read_clustering, read_graph

KARATE = str(bundled_path("karate"))


def write_manifest(tmp_path, lines):
    path = tmp_path / "manifest.txt"
    path.write_text("\n".join(lines) + "\n")
    return path


def write_configs(tmp_path, configs):
    path = tmp_path / "configs.json"
    path.write_text(json.dumps(configs))
    return path


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


class TestRunConfig:
    def test_merge_fraction_iff_multi_step(self):
        with pytest.raises(ValueError):
            RunConfig(coarsener="ms")
        with pytest.raises(ValueError):
            RunConfig(coarsener="ss", merge_fraction=5)
        assert RunConfig(coarsener="ms", merge_fraction=5).label == "MS5-sig+fast@50"

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"coarsener": "xx"},
            {"prioritizer": "zz"},
            {"refiner": "slow"},
            {"reduction_factor": 0},
            {"coarsener": "ms", "merge_fraction": 150},
        ],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            RunConfig(**kwargs)

    def test_unknown_keys(self):
        with pytest.raises(ValueError, match="unknown"):
            RunConfig.from_mapping({"coarsener": "ss", "seed": 3})

    def test_reported_q_matches_recomputation(self):
        g = load_bundled("lesmis")
        result = run_config(g, RunConfig(prioritizer="da", refiner="kl"))
        assert result.clustering.quality() == pytest.approx(modularity(g, result.clustering), abs=1e-9)
        assert result.levels >= 2 and result.runtime_ms > 0


class TestManifest:
    def test_formats_flags_and_relative_paths(self, tmp_path):
        (tmp_path / "sub").mkdir()
        (tmp_path / "sub" / "g.txt").write_text("0 1\n")
        path = write_manifest(
            tmp_path,
            ["# comment", "a sub/g.txt", "b sub/g.txt edgelist uw", f"k {KARATE}", "", "c x.net unweighted"],
        )
        entries = read_manifest(path)
        assert [e.name for e in entries] == ["a", "b", "k", "c"]
        assert entries[0].path == str(tmp_path / "sub" / "g.txt")
        assert (entries[1].format, entries[1].unweighted) == ("edgelist", True)
        assert entries[2].format == "pajek"
        assert (entries[3].format, entries[3].unweighted) == ("pajek", True)

    @pytest.mark.parametrize("line", ["only", "a b c d e", "a b yaml", "a b edgelist extra"])
    def test_malformed(self, tmp_path, line):
        with pytest.raises(ValueError):
            read_manifest(write_manifest(tmp_path, [line]))

    def test_duplicate_names(self, tmp_path):
        with pytest.raises(ValueError, match="duplicate"):
            read_manifest(write_manifest(tmp_path, ["a x", "a y"]))

    def test_configs_must_be_list(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text('{"coarsener": "ss"}')
        with pytest.raises(ValueError):
            read_configs(path)


class TestBenchmark:
    CONFIGS = [RunConfig(refiner="fast", reduction_factor=100), RunConfig(refiner="fast", reduction_factor=50)]

    def entries(self, tmp_path):
        return [
            ManifestEntry("karate", KARATE, "pajek", True),
            ManifestEntry("missing", str(tmp_path / "nope.txt")),
            ManifestEntry("lesmis", str(bundled_path("lesmis")), "pajek"),
        ]

    def test_rows_and_error_rows(self, tmp_path):
        report = run_benchmark(self.entries(tmp_path), self.CONFIGS)
        assert [(r.graph, r.config.reduction_factor) for r in report.rows] == [
            ("karate", 100),
            ("karate", 50),
            ("missing", 100),
            ("missing", 50),
            ("lesmis", 100),
            ("lesmis", 50),
        ]
        assert [r.graph for r in report.failures] == ["missing", "missing"]
        karate = report.rows[1]
        assert (karate.n, karate.m, karate.clusters) == (34, 78, 4)
        assert karate.modularity == pytest.approx(0.4197, abs=0.003)

    def test_csv(self, tmp_path):
        report = run_benchmark(self.entries(tmp_path), self.CONFIGS)
        report.write_csv(tmp_path / "out.csv")
        rows = read_rows(tmp_path / "out.csv")
        assert tuple(rows[0]) == CSV_HEADER
        assert ",".join(rows[0]) == "graph,coarsener,merge_fraction,prioritizer,refiner,reduction_factor,n,m,modularity,runtime_ms,clusters"
        assert rows[1][:8] == ["karate", "ss", "", "sig", "fast", "100", "34", "78"]
        assert rows[3][8] == "error"
        assert len(rows) == 7

    def test_means_skip_failures(self, tmp_path):
        report = run_benchmark(self.entries(tmp_path), self.CONFIGS)
        means = report.mean_modularity()
        for config in self.CONFIGS:
            qs = [r.modularity for r in report.rows if r.config == config and r.error is None]
            assert means[config] == pytest.approx(sum(qs) / 2)

    def test_parallel_matches_serial(self, tmp_path):
        serial = run_benchmark(self.entries(tmp_path), self.CONFIGS)
        parallel = run_benchmark(self.entries(tmp_path), self.CONFIGS, jobs=2, warmup=True)
        strip = lambda rep: [(r.graph, r.config, r.modularity, r.clusters, r.error is None) for r in rep.rows]
        assert strip(serial) == strip(parallel)

    def test_empty(self):
        report = run_benchmark([], self.CONFIGS)
        assert report.rows == [] and report.mean_modularity() == {}


class TestCli:
    def test_cluster(self, tmp_path, capsys):
        out = tmp_path / "clusters.txt"
        code = main(
            ["cluster", "--input", KARATE, "--format", "pajek", "--coarsen", "ss", "--prioritizer", "sig",
             "--refine", "fast", "--reduction-factor", "50", "--output", str(out)]
        )
        assert code == 0
        lines = dict(line.split() for line in capsys.readouterr().out.splitlines())
        q = float(lines["modularity"])
        assert len(lines["modularity"].split(".")[1]) == 9
        assert q == pytest.approx(0.4197, abs=0.003)
        assert int(lines["clusters"]) == 4
        assert float(lines["runtime_ms"]) > 0
        g = read_graph(KARATE)
        assert modularity(g, read_clustering(out, g)) == pytest.approx(q, abs=1e-9)

    def test_cluster_pure_coarsening(self, capsys):
        assert main(["cluster", "--input", KARATE, "--refine", "none", "--reduction-factor", "100"]) == 0
        q = float(capsys.readouterr().out.split()[1])
        g = read_graph(KARATE)
        assert q == pytest.approx(modularity(g, single_step_greedy(g, "sig")), abs=1e-9)

    def test_multi_step(self, capsys):
        assert main(["cluster", "--input", KARATE, "--coarsen", "ms", "--merge-fraction", "10"]) == 0

    @pytest.mark.parametrize(
        "argv",
        [
            ["cluster", "--input", KARATE, "--coarsen", "ms"],
            ["cluster", "--input", KARATE, "--merge-fraction", "5"],
            ["cluster", "--input", KARATE, "--prioritizer", "xx"],
            ["cluster", "--input", KARATE, "--reduction-factor", "0"],
            ["cluster"],
            ["frobnicate"],
            [],
            ["benchmark", "--manifest", "m", "--configs", "c", "--out", "o", "--jobs", "0"],
        ],
    )
    def test_usage_errors_exit_1(self, argv, capsys):
        try:
            code = main(argv)
        except SystemExit as exc:
            code = exc.code
        assert code == 1
        assert "error" in capsys.readouterr().err

    def test_runtime_errors_exit_2(self, tmp_path, capsys):
        assert main(["cluster", "--input", str(tmp_path / "none.txt")]) == 2
        bad = tmp_path / "bad.txt"
        bad.write_text("0 1\n1 2 -4\n")
        assert main(["cluster", "--input", str(bad)]) == 2
        assert "bad.txt:2" in capsys.readouterr().err
        empty = tmp_path / "empty.txt"
        empty.write_text("")
        assert main(["cluster", "--input", str(empty)]) == 2

    def test_oracle(self, tmp_path, capsys):
        path = tmp_path / "g.txt"
        path.write_text("0 1\n1 2\n2 0\n3 4\n4 5\n5 3\n2 3\n")
        assert main(["oracle", "--input", str(path)]) == 0
        out = capsys.readouterr().out
        assert out.splitlines()[0] == f"modularity {5 / 14:.9f}"

    def test_oracle_too_large(self, capsys):
        assert main(["oracle", "--input", KARATE]) == 2

    def test_benchmark(self, tmp_path, capsys):
        manifest = write_manifest(tmp_path, [f"karate {KARATE} pajek uw", "gone nothing.txt"])
        configs = write_configs(
            tmp_path,
            [{"coarsener": "ss", "prioritizer": "sig", "refiner": "fast", "reduction_factor": rf} for rf in (100, 50)],
        )
        out = tmp_path / "res.csv"
        assert main(["benchmark", "--manifest", str(manifest), "--configs", str(configs), "--out", str(out)]) == 0
        rows = read_rows(out)
        assert len(rows) == 5 and rows[3][8] == "error"
        summary = read_rows(tmp_path / "res_summary.csv")
        assert summary[0] == ["config", "graphs", "mean_modularity"]
        assert len(summary) == 3
        assert "FAILED gone" in capsys.readouterr().out

    def test_benchmark_empty_manifest(self, tmp_path):
        manifest = write_manifest(tmp_path, ["# nothing"])
        configs = write_configs(tmp_path, [{"coarsener": "ss"}])
        out = tmp_path / "res.csv"
        assert main(["benchmark", "--manifest", str(manifest), "--configs", str(configs), "--out", str(out)]) == 0
        assert read_rows(out) == [list(CSV_HEADER)]

    def test_benchmark_bad_config_file(self, tmp_path):
        manifest = write_manifest(tmp_path, [])
        configs = write_configs(tmp_path, [{"coarsener": "ms"}])
        assert main(["benchmark", "--manifest", str(manifest), "--configs", str(configs), "--out", str(tmp_path / "o.csv")]) == 2

    def test_module_entry_point(self):
        proc = subprocess.run(
            [sys.executable, "-m", "modclust", "cluster", "--input", KARATE, "--coarsen", "ms"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 1
        proc = subprocess.run([sys.executable, "-m", "modclust", "cluster", "--input", KARATE], capture_output=True, text=True)
        assert proc.returncode == 0 and proc.stdout.startswith("modularity 0.4")
