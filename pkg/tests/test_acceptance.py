"""Acceptance criteria, each checked at its stated tolerance and runtime.

Run alone with ``pytest tests/test_acceptance.py -v``; a PASS/FAIL line per
criterion is printed in the terminal summary.
"""
import io
import json
import math
import shutil
from contextlib import redirect_stderr, redirect_stdout
from fractions import Fraction

import numpy as np
import pytest

from acceptance_log import criterion
from grapheff.cli import main
from grapheff.dataio import mutag_published_records, read_tu, write_results, write_tu
from grapheff.graph import PROPERTY_NAMES, Graph, average_clustering, cycle_counts
from grapheff.harness import measure_gaps
from grapheff.kernels import sp_kernel, wl_kernel
from grapheff.metrics import (complexity_factor, effectiveness_term, pearson,
                              report_from_records, spearman)
from grapheff.regression import regress_effectiveness, subset_samples
from grapheff.sampler import three_property_spec, generate_correlated_table, sample_latents
from grapheff.synth import SYN_CC, SYN_DEGREE, GeneratorConfig, build_synthetic_dataset
from oracles import (brute_avg_clustering, brute_cycles, random_adj, trace_cyc3,
                     trace_cyc4)

pytestmark = pytest.mark.slow

R_SWEEP = [round(0.1 * i, 1) for i in range(1, 10)]


def test_criterion_1_metric_fidelity():
    with criterion(1, "MUTAG effectiveness", 1.0) as info:
        rep = report_from_records(mutag_published_records(), 2)[0]
        # independent rational evaluation of the two terms
        terms = []
        for delta, r in (("0.0037", "0.8370"), ("0.0753", "0.7918")):
            d, r = Fraction(delta), Fraction(r)
            terms.append(d / r * (1 - r) / Fraction(1, 2))
        oracle = float(sum(terms))
        info["E"] = f"{rep.total_effectiveness:.6f}"
        info["oracle"] = f"{oracle:.6f}"
        assert abs(oracle - 0.0410) <= 5e-4
        assert abs(rep.total_effectiveness - 0.0410) <= 5e-4
        assert rep.total_effectiveness == pytest.approx(oracle, abs=1e-9)


def test_criterion_2_lambda_properties():
    with criterion(2, "complexity factor properties", 1.0) as info:
        deltas = np.round(np.arange(0.01, 0.30 + 1e-9, 0.01), 10)
        checked = 0
        for c in range(2, 11):
            r = np.round(np.arange(1 / c, 0.95 + 1e-9, 0.05), 10)
            lam = np.array([complexity_factor(v, c) for v in r])
            assert np.all(np.diff(lam) < 0)
            assert np.allclose(np.diff(lam) / np.diff(r), -c / (c - 1))
            e = np.array([[effectiveness_term(d, v, c) for d in deltas] for v in r])
            assert np.all(np.diff(e, axis=1) > 0)
            assert np.all(np.diff(e, axis=0) < 0)
            if c < 10:
                e_next = np.array([[effectiveness_term(d, v, c + 1) for d in deltas]
                                   for v in r])
                assert np.all(e_next < e)
            checked += e.size
        info["grid_points"] = checked


def test_criterion_3_sampler():
    with criterion(3, "correlated sampler, three-property configuration", 10.0) as info:
        spec = three_property_spec()
        assert spec.sample_count == 4096 and tuple(spec.targets) == (-0.7, 0.1, 0.7)
        good, worst_latent, worst_dev = 0, 0.0, 0.0
        for seed in range(20):
            t = generate_correlated_table(spec, seed)
            dev = max(abs(pearson(t.property_targets[k], t.continuous_label) - r)
                      for k, r in enumerate(spec.targets))
            worst_dev = max(worst_dev, dev)
            good += dev <= 0.05
            lat = sample_latents(spec, seed)
            c = np.corrcoef(lat)
            worst_latent = max(worst_latent, np.abs(c[np.triu_indices_from(c, 1)]).max())
        info["seeds_within_0.05"] = f"{good}/20"
        info["max_dev"] = f"{worst_dev:.4f}"
        info["max_latent_corr"] = f"{worst_latent:.4f}"
        assert good >= 19
        assert worst_latent <= 0.05


def test_criterion_4_property_oracles():
    with criterion(4, "cycle and clustering oracles", 30.0) as info:
        rng = np.random.default_rng(2024)
        for _ in range(200):
            a = random_adj(rng, int(rng.integers(1, 9)), float(rng.random()))
            g = Graph.from_adjacency(a)
            counts = cycle_counts(g)
            for k in (3, 4, 5, 6):
                assert counts[k] == brute_cycles(a, k)
            assert counts[3] == trace_cyc3(a)
            assert counts[4] == trace_cyc4(a)
            assert average_clustering(g) == brute_avg_clustering(a)
        info["graphs"] = 200


def sweep_gaps(kind):
    base, gap = [], []
    for r in R_SWEEP:
        ds = build_synthetic_dataset(kind, r, 1024, 2, GeneratorConfig(seed=0))
        g = measure_gaps(ds.graphs, ds.labels, k=10, seed=0).gap("S")
        base.append(g.baseline.mean)
        gap.append(g.delta)
    return np.array(base), np.array(gap)


def test_criterion_5_controllable_gap():
    with criterion(5, "Syn-CC / Syn-Degree gap sweeps", 600.0) as info:
        cc_base, cc_gap = sweep_gaps(SYN_CC)
        deg_base, deg_gap = sweep_gaps(SYN_DEGREE)
        rho = spearman(R_SWEEP, cc_gap)
        info["cc_gap_spearman"] = f"{rho:.3f}"
        info["cc_baseline_range"] = f"[{cc_base.min():.3f}, {cc_base.max():.3f}]"
        info["deg_baseline"] = "/".join(f"{b:.3f}" for b in deg_base)
        info["deg_max_abs_gap"] = f"{np.abs(deg_gap).max():.3f}"
        assert rho >= 0.9
        assert np.all((cc_base >= 0.45) & (cc_base <= 0.58))
        assert np.all(np.diff(deg_base) > 0)
        assert np.all(np.abs(deg_gap) <= 0.05)


def test_criterion_6_regression():
    with criterion(6, "effectiveness regression", 900.0) as info:
        samples = []
        for r in R_SWEEP:
            ds = build_synthetic_dataset(SYN_CC, r, 4096, 2, GeneratorConfig(seed=0))
            props = np.column_stack([ds.realized_properties[p] for p in PROPERTY_NAMES])
            samples += subset_samples(ds.name, ds.graphs, ds.labels, parts=10, seed=0,
                                      props=props, k=10)
        run = regress_effectiveness(samples, repeats=10, test_fraction=0.3, alpha=1.0,
                                    seed=0, n_perm=10_000)
        s = run.summary()
        info["samples"] = s["samples"]
        info["pearson"] = f"{s['pearson_mean']:.3f}+-{s['pearson_std']:.3f}"
        info["p_mean"] = f"{s['p_value_mean']:.2g}"
        assert s["samples"] == 90
        assert s["pearson_mean"] >= 0.7
        assert s["p_value_mean"] <= 0.01


def test_criterion_7_tu_io(tmp_path, mutag_dir):
    with criterion(7, "TU round trip and MUTAG counts", 5.0) as info:
        rng = np.random.default_rng(7)
        for i in range(50):
            count = int(rng.integers(5, 30))
            graphs = [Graph.from_adjacency(random_adj(rng, int(rng.integers(1, 20)),
                                                      float(rng.uniform(0, 0.5))))
                      for _ in range(count)]
            classes = int(rng.integers(2, 5))
            labels = np.r_[np.arange(classes), rng.integers(0, classes, count - classes)]
            first = write_tu(graphs, labels, tmp_path / f"a{i}" / "DS")
            back = read_tu(tmp_path / f"a{i}")
            assert back.graphs == graphs
            assert np.array_equal(back.labels, labels)
            again = write_tu(back.graphs, back.labels, tmp_path / f"b{i}" / "DS", back.manifest)
            assert [p.read_bytes() for p in first] == [p.read_bytes() for p in again]
        graphs, labels, man = read_tu(mutag_dir)
        info["mutag"] = f"{len(graphs)} graphs, {man.class_count} classes"
        assert len(graphs) == 188 and man.class_count == 2


def test_criterion_8_kernels():
    with criterion(8, "kernel sanity", 30.0) as info:
        rng = np.random.default_rng(8)
        worst = 0.0
        for _ in range(5):
            graphs = [Graph.from_adjacency(random_adj(rng, int(rng.integers(2, 20)),
                                                      float(rng.uniform(0.05, 0.6))))
                      for _ in range(64)]
            for k in (wl_kernel(graphs, 3), sp_kernel(graphs)):
                assert np.array_equal(k, k.T)
                worst = min(worst, np.linalg.eigvalsh(k).min())
        c6 = Graph(6, [(i, (i + 1) % 6) for i in range(6)])
        two_k3 = Graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
        k = wl_kernel([c6, two_k3] + graphs[:20], 3)
        info["min_eigenvalue"] = f"{worst:.2e}"
        assert worst >= -1e-8
        assert np.array_equal(k[0], k[1])


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main([str(a) for a in argv])
    assert code == 0, err.getvalue()
    assert "seed:" in err.getvalue()
    return out.getvalue()


def snapshot(root):
    return {p.relative_to(root).as_posix(): p.read_bytes()
            for p in sorted(root.rglob("*")) if p.is_file()}


def test_criterion_9_cli_determinism(tmp_path):
    with criterion(9, "CLI determinism across reruns and --jobs", 300.0) as info:
        data, work = tmp_path / "data", tmp_path / "work"
        results = {}
        for jobs in (1, 2):
            for d in (data, work):
                shutil.rmtree(d, ignore_errors=True)
            work.mkdir(parents=True)
            outs = [cli("generate", "--kind", "syn-cc", "--r-list", "0.3:0.9:0.3", "--n", 500,
                        "--seed", 5, "--out", data, "--jobs", jobs, "--json")]
            ds = data / "syn-cc-r0.90"
            outs.append(cli("corr", ds, "--seed", 5, "--json", "--jobs", jobs))
            outs.append(cli("evaluate", ds, "--k", 3, "--seed", 5, "--jobs", jobs, "--json",
                            "--out", work / "res.json"))
            outs.append(cli("effectiveness", "--results", work / "res.json", "--classes", 2,
                            "--seed", 5, "--json", "--jobs", jobs))
            outs.append(cli("regress", "--datasets", data, "--k", 3, "--repeats", 2,
                            "--permutations", 500, "--seed", 5, "--jobs", jobs, "--json",
                            "--out-csv", work / "reg.csv", "--out-json", work / "reg.json"))
            results[jobs] = (outs, snapshot(data), snapshot(work))
        info["subcommands"] = 5
        info["files"] = len(results[1][1]) + len(results[1][2])
        assert results[1] == results[2]
