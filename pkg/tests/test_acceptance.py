"""Acceptance suite. Each test prints one PASS/FAIL line for its criterion."""

import time
from itertools import combinations, permutations

import numpy as np
import pytest
from scipy.optimize import Bounds, LinearConstraint, milp

from tame.cli import main
from tame.graph import enumerate_triangles, product_tensor_footprint
from tame.kernel import contract_cubic, explicit_contract_oracle, explicit_ttv_oracle, imp_ttv
from tame.matching import (Matching, greedy_b_matching, max_weight_matching, random_matching,
                           score_triangles)
from tame.metrics import node_correctness, tgs3
from tame.pipeline import align, seqsim
from tame.postprocess import RefineLog, refine, seq_similarity, topo_similarity
from tame.similarity import SimilarityMatrix
from tame.solver import BETA_GRID, SolverConfig, profile_config, select_beta, tame
from tame.synthgen import GenConfig, generate, write_pair

from conftest import random_graph


@pytest.fixture
def verdict(capsys):
    def emit(number, ok, detail, seconds=None):
        took = f" ({seconds:.1f}s)" if seconds is not None else ""
        with capsys.disabled():
            print(f"\nAC{number:02d} {'PASS' if ok else 'FAIL'}: {detail}{took}")
        return ok
    return emit


def test_ac01_kernel_oracle_equivalence(verdict):
    rng = np.random.default_rng(101)
    start = time.perf_counter()
    worst = 0.0
    ok = True
    for _ in range(200):
        nG, nH = rng.integers(3, 13, size=2)
        g = random_graph(int(nG), rng.uniform(0.3, 0.9), rng)
        h = random_graph(int(nH), rng.uniform(0.3, 0.9), rng)
        tG, tH = enumerate_triangles(g), enumerate_triangles(h)
        X = rng.random((nG, nH))
        fast, slow = imp_ttv(tG, tH, X), explicit_ttv_oracle(tG, tH, X)
        scale = np.maximum(np.abs(slow), 1e-300)
        rel = float(np.max(np.abs(fast - slow) / scale, initial=0.0))
        worst = max(worst, rel)
        c_fast, c_slow = contract_cubic(tG, tH, X), explicit_contract_oracle(tG, tH, X)
        ok &= rel <= 1e-10 and abs(c_fast - c_slow) <= 1e-10 * max(abs(c_slow), 1e-300)
        ok &= bool(np.all((slow == 0) == (fast == 0)))
    took = time.perf_counter() - start
    ok &= took < 30
    assert verdict(1, ok, f"200 pairs, worst relative error {worst:.2e}", took)


def test_ac02_memory_blowup(verdict):
    f = product_tensor_footprint(347079, 407650, 4)
    ok = abs(f.full_terabytes - 55.5) <= 0.02 * 55.5 and abs(f.reduced_terabytes - 1.5) <= 0.05 * 1.5
    assert verdict(2, ok, f"full {f.full_terabytes:.2f} TB, reduced {f.reduced_terabytes:.3f} TB")


def exhaustive_assignment(W):
    n, m = W.shape
    if n <= m:
        return max(sum(W[i, p[i]] for i in range(n)) for p in permutations(range(m), n))
    return exhaustive_assignment(W.T)


def test_ac03_matching_optimality(verdict):
    rng = np.random.default_rng(303)
    start = time.perf_counter()
    mismatches = 0
    for _ in range(100):
        n, m = rng.integers(1, 9, size=2)
        # integer weights keep every sum exact
        W = rng.integers(0, 50, size=(n, m)).astype(float)
        got = sum(W[i, j] for i, j in max_weight_matching(W).pairs)
        mismatches += got != exhaustive_assignment(W)
    took = time.perf_counter() - start
    assert verdict(3, mismatches == 0 and took < 10, f"{mismatches} of 100 differ from exhaustive", took)


def optimal_b_matching(W, b):
    """Exact optimum as a 0/1 program over all positive edges."""
    rows, cols = np.nonzero(W > 0)
    if rows.size == 0:
        return 0.0
    n, m = W.shape
    A = np.zeros((n + m, rows.size))
    A[rows, np.arange(rows.size)] = 1
    A[n + cols, np.arange(rows.size)] = 1
    res = milp(-W[rows, cols], constraints=LinearConstraint(A, 0, b),
               integrality=np.ones(rows.size), bounds=Bounds(0, 1))
    return -res.fun


def brute_b_matching(W, b):
    edges = [(i, j) for i in range(W.shape[0]) for j in range(W.shape[1]) if W[i, j] > 0]
    best = 0.0
    for r in range(len(edges) + 1):
        for sub in combinations(edges, r):
            deg_r, deg_c = np.zeros(W.shape[0]), np.zeros(W.shape[1])
            for i, j in sub:
                deg_r[i] += 1
                deg_c[j] += 1
            if deg_r.max(initial=0) <= b and deg_c.max(initial=0) <= b:
                best = max(best, sum(W[i, j] for i, j in sub))
    return best


def test_ac04_b_matching_half_approximation(verdict):
    rng = np.random.default_rng(404)
    start = time.perf_counter()
    worst = np.inf
    for t in range(100):
        if t < 20:
            n, m = rng.integers(1, 4, size=2)
        else:
            n, m = rng.integers(1, 8, size=2)
        W = rng.random((n, m)) * (rng.random((n, m)) < 0.8)
        b = int(rng.integers(1, 4))
        opt = brute_b_matching(W, b) if t < 20 else optimal_b_matching(W, b)
        got = greedy_b_matching(W, b).weight_total
        if opt > 0:
            worst = min(worst, got / opt)
    took = time.perf_counter() - start
    ok = worst >= 0.5 - 1e-12 and took < 60
    assert verdict(4, ok, f"worst greedy/optimum ratio {worst:.3f}", took)


def test_ac05_self_alignment(verdict):
    start = time.perf_counter()
    g = generate(GenConfig(ancestor_size=50, size_a=50, size_b=50, seed=5)).graph_a
    t = enumerate_triangles(g)
    w = SimilarityMatrix.from_dense(np.eye(g.node_count))
    r = align(g, g, w, SolverConfig(), triangles=(t, t)).report
    took = time.perf_counter() - start
    ok = r.gs3 == 1 and r.tgs3 == 1 and len(t) > 0 and took < 60
    assert verdict(5, ok, f"{len(t)} triangles, gs3 {r.gs3}, tgs3 {r.tgs3}", took)


def test_ac06_monotone_shifted_iteration(verdict):
    start = time.perf_counter()
    worst = 0.0
    rng = np.random.default_rng(606)
    for seed in range(20):
        na, nb = (int(x) for x in rng.integers(30, 101, size=2))
        p = generate(GenConfig(ancestor_size=min(na, nb) * 2 // 3, size_a=na, size_b=nb, seed=seed))
        tG, tH = enumerate_triangles(p.graph_a), enumerate_triangles(p.graph_b)
        _, trace = tame(tG, tH, p.sim, SolverConfig(beta=1e3, max_iters=30, lambda_tol=1e-300,
                                                     score_every_iter=False))
        lams = trace.lambdas
        worst = max([worst] + [a - b for a, b in zip(lams, lams[1:])])
    took = time.perf_counter() - start
    ok = worst <= 1e-9 and took < 300
    assert verdict(6, ok, f"largest lambda decrease {max(worst, 0.0):.2e}", took)


def test_ac07_postprocess_soundness(verdict):
    start = time.perf_counter()
    failures = []
    swaps = 0
    for s in range(50):
        rng = np.random.default_rng(7000 + s)
        n = int(rng.integers(20, 50))
        m = n + int(rng.integers(0, 15))
        cfg = GenConfig(ancestor_size=int(rng.integers(10, n)), size_a=n, size_b=m, seed=s,
                        noise_pairs_per_node=float(rng.uniform(0, 3)))
        p = generate(cfg)
        tG, tH = enumerate_triangles(p.graph_a), enumerate_triangles(p.graph_b)
        X = rng.random((n, m)) ** 3
        m0 = max_weight_matching(X)
        log = RefineLog()
        # verify=True recomputes the objective from scratch after every accepted swap
        mm = refine(m0, X, p.sim, p.graph_a, p.graph_b, tG, tH, rounds=3, b_topo=10, b_seq=5,
                    log=log, verify=True)
        swaps += log.swaps
        objs = log.objectives
        lex = all(b.topo > a.topo + 1e-12 or (abs(b.topo - a.topo) <= 1e-12 and b.seq > a.seq)
                  for a, b in zip(objs, objs[1:]))
        final_ok = (abs(objs[-1].topo - topo_similarity(mm, tG, tH, p.sim)) <= 1e-9
                    and abs(objs[-1].seq - seq_similarity(mm, p.sim)) <= 1e-9)
        tri_ok = score_triangles(mm, tG, tH) >= score_triangles(m0, tG, tH)
        if not (lex and final_ok and tri_ok):
            failures.append(s)
    took = time.perf_counter() - start
    ok = not failures and took < 300
    assert verdict(7, ok, f"50 instances, {swaps} swaps, failing {failures}", took)


@pytest.mark.slow
def test_ac08_benchmark_trend(verdict):
    start = time.perf_counter()
    scores = {"seqsim": [], "tame": [], "ctame": [], "random": []}
    chosen = {"tame": [], "ctame": []}
    for seed in range(10):
        p = generate(GenConfig(ancestor_size=200, size_a=300, size_b=400, seed=seed))
        tri = (enumerate_triangles(p.graph_a), enumerate_triangles(p.graph_b))
        scores["seqsim"].append(node_correctness(seqsim(p.sim), p.truth).f_nc)
        rng = np.random.default_rng(seed)
        scores["random"].append(np.mean([
            node_correctness(random_matching(300, 400, rng), p.truth).f_nc for _ in range(100)]))
        for name, constrained in (("tame", False), ("ctame", True)):
            # shift tuned per pair over the log grid by conserved triangles
            runs = {}
            for beta in BETA_GRID:
                cfg = profile_config("paper", constrained=constrained, beta=beta)
                runs[beta] = align(p.graph_a, p.graph_b, p.sim, cfg, truth=p.truth, triangles=tri).report
            best = select_beta({b: r.conserved_triangles for b, r in runs.items()})
            chosen[name].append(best)
            scores[name].append(runs[best].f_nc)
    took = time.perf_counter() - start
    mean = {k: float(np.mean(v)) for k, v in scores.items()}
    ok = (mean["tame"] >= 5 * mean["random"] and mean["ctame"] >= 5 * mean["random"]
          and mean["ctame"] >= mean["tame"] - 0.05 and took < 1800)
    detail = (f"F-NC seqsim {mean['seqsim']:.3f}, TAME {mean['tame']:.3f}, cTAME {mean['ctame']:.3f}, "
              f"random {mean['random']:.4f}; betas TAME {chosen['tame']} cTAME {chosen['ctame']}")
    assert verdict(8, ok, detail, took)


def test_ac09_cross_module_identity(verdict):
    rng = np.random.default_rng(909)
    start = time.perf_counter()
    bad = 0
    for _ in range(100):
        nG, nH = (int(x) for x in rng.integers(4, 25, size=2))
        g = random_graph(nG, rng.uniform(0.2, 0.8), rng)
        h = random_graph(nH, rng.uniform(0.2, 0.8), rng)
        tG, tH = enumerate_triangles(g), enumerate_triangles(h)
        m = random_matching(nG, nH, rng)
        m = Matching(m.pairs[: int(rng.integers(0, len(m) + 1))])
        c = contract_cubic(tG, tH, m.indicator(nG, nH))
        bad += not (isinstance(c, (int, np.integer)) and c % 6 == 0
                    and tgs3(m, tG, tH).conserved == score_triangles(m, tG, tH) == c // 6)
    took = time.perf_counter() - start
    assert verdict(9, bad == 0 and took < 60, f"{bad} of 100 disagree", took)


def _snapshot(out):
    files = {name: (out / name).read_bytes() for name in ("alignment.tsv", "metrics.txt")}
    files["trace.tsv"] = b"\n".join(b"\t".join(line.split(b"\t")[:3])
                                    for line in (out / "trace.tsv").read_bytes().splitlines())
    manifest = (out / "manifest.txt").read_text().split("[run]")[0]
    files["manifest.txt"] = "\n".join(line for line in manifest.splitlines()
                                      if not line.startswith("trace.tsv:")).encode()
    return files


def test_ac10_determinism(tmp_path, verdict):
    start = time.perf_counter()
    write_pair(generate(GenConfig(ancestor_size=60, size_a=90, size_b=110, seed=10)), tmp_path)
    out = tmp_path / "run"
    args = ["align", "--graph-a", str(tmp_path / "graph_a.txt"), "--graph-b",
            str(tmp_path / "graph_b.txt"), "--sim", str(tmp_path / "sim.tsv"), "--truth",
            str(tmp_path / "truth.tsv"), "--out", str(out), "--threads", "1", "--seed", "0"]
    assert main(args) == 0
    first = _snapshot(out)
    assert main(args) == 0
    second = _snapshot(out)
    took = time.perf_counter() - start
    differ = [name for name in first if first[name] != second[name]]
    ok = not differ and took < 120
    assert verdict(10, ok, f"compared {sorted(first)}, differing {differ}", took)
