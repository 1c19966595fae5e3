"""Experiment sweeps, lemma checks and the conjecture probe."""

from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from datetime import datetime, timezone
from itertools import combinations

import numpy as np

from .cliques import DEFAULT_CLIQUE_CAP, maximal_cliques
from .coloring import (
    DEFAULT_NODE_BUDGET,
    dominating_set_coloring,
    exact_clique_chromatic,
    greedy_proper_coloring,
    is_valid_clique_coloring,
)
from .constructive_bounds import (
    build_Gi,
    color_low_p,
    color_mid_p,
    compute_thresholds,
    gi_max_degree_report,
    lambda_excess,
    partition_vertices,
)
from .exceptions import BudgetExceeded, InapplicableRegime, NoValidK
from .graph_core import Graph, Seed, generate_coupled, generate_gnp
from .lowerbound_stats import concentration_experiment, count_stats, expected_XS
from .theory import best_k, predicted_main1, predicted_main2, regime_classify

__all__ = [
    "ALGORITHMS",
    "CSV_HEADER",
    "SweepConfig",
    "ResultRow",
    "run_sweep",
    "write_csv",
    "default_sweep_config",
    "LEMMAS",
    "LemmaReport",
    "verify_lemma",
    "probe_conjecture",
]

ALGORITHMS = ("exact", "greedy", "dominating", "low_p", "mid_p")
CSV_HEADER = ("n", "p", "x_exponent", "seed", "algorithm", "palette", "valid", "repairs",
              "runtime_ms", "predicted_main1", "predicted_main2", "regime", "ratio", "error")


@dataclass
class SweepConfig:
    """One sweep. Give ``p`` (explicit probabilities) or ``x`` (p = n^-x), not both.

    ``exact`` runs whenever n <= ``exact_max_n``, listed or not. Wall-clock
    times are only written when ``timing`` is set, so default output is a
    pure function of the config.
    """

    n: list[int]
    algorithms: list[str]
    p: list[float] | None = None
    x: list[float] | None = None
    trials: int = 1
    seed: int = 0
    exact_max_n: int = 64
    node_budget: int = DEFAULT_NODE_BUDGET
    clique_cap: int = DEFAULT_CLIQUE_CAP
    workers: int = 1
    timing: bool = False
    output: str | None = None

    def __post_init__(self):
        self.validate()

    def validate(self):
        if not self.n:
            raise ValueError("n grid is empty")
        if any(int(v) != v or v < 1 for v in self.n):
            raise ValueError("every n must be a positive integer")
        if (self.p is None) == (self.x is None):
            raise ValueError("give exactly one of p or x")
        grid = self.p if self.p is not None else self.x
        if not grid:
            raise ValueError("probability grid is empty")
        if self.p is not None and any(not 0.0 <= v <= 1.0 for v in self.p):
            raise ValueError("p values must lie in [0, 1]")
        if self.x is not None and any(v < 0 for v in self.x):
            raise ValueError("x values must be non-negative")
        if not self.algorithms:
            raise ValueError("algorithm list is empty")
        unknown = [a for a in self.algorithms if a not in ALGORITHMS]
        if unknown:
            raise ValueError(f"unknown algorithms {unknown}; known: {list(ALGORITHMS)}")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")

    @classmethod
    def from_dict(cls, d: dict) -> "SweepConfig":
        known = {f.name for f in fields(cls)}
        extra = set(d) - known
        if extra:
            raise ValueError(f"unknown config keys {sorted(extra)}")
        return cls(**d)

    @classmethod
    def from_json(cls, text: str) -> "SweepConfig":
        return cls.from_dict(json.loads(text))

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)

    def points(self) -> list[tuple[int, float, float]]:
        """Grid points (n, p, x) in canonical order."""
        out = []
        for n in self.n:
            if self.p is not None:
                for p in self.p:
                    x = -math.log(p) / math.log(n) if 0 < p and n > 1 else float("nan")
                    out.append((int(n), float(p), x))
            else:
                for x in self.x:
                    out.append((int(n), float(n) ** -x, float(x)))
        return out


def default_sweep_config() -> SweepConfig:
    """About 1100 colorings over all four constructive/baseline colorers."""
    return SweepConfig(
        n=[200, 1000, 3000],
        x=[0.35, 0.40, 0.45, 0.50, 0.55, 0.60],
        algorithms=["greedy", "dominating", "low_p", "mid_p"],
        trials=20,
        seed=20240601,
    )


@dataclass(frozen=True)
class ResultRow:
    n: int
    p: float
    x_exponent: float
    seed: int
    algorithm: str
    palette: int | None
    valid: bool
    repairs: int | None
    runtime_ms: float | None
    predicted_main1: float | None
    predicted_main2: float | None
    regime: str
    ratio: float | None
    error: str = ""

    def csv_fields(self) -> list[str]:
        return [str(self.n), _fmt(self.p), _fmt(self.x_exponent), str(self.seed),
                self.algorithm, "" if self.palette is None else str(self.palette),
                "true" if self.valid else "false",
                "" if self.repairs is None else str(self.repairs),
                _fmt(self.runtime_ms), _fmt(self.predicted_main1), _fmt(self.predicted_main2),
                self.regime, _fmt(self.ratio), self.error]


def _fmt(v) -> str:
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return ""
    return format(float(v), ".10g")


def _predictions(n, p):
    try:
        m1 = predicted_main1(n, p)
    except ValueError:
        m1 = None
    try:
        m2 = predicted_main2(n, p)
    except ValueError:
        m2 = None
    try:
        regime = regime_classify(n, p)[0] if n > math.e and 0 < p <= 1 else ""
    except ValueError:
        regime = ""
    return m1, m2, regime


def _mid_applicable(n, p):
    return 0 < p <= 0.5 and n >= 3 and compute_thresholds(n, p).xi is not None


def _run_point(args) -> list[ResultRow]:
    config, n, p, x, trial = args
    graph_seed = Seed(config.seed).derive("graph", n, p, trial)
    algos = list(config.algorithms)
    if n <= config.exact_max_n and "exact" not in algos:
        algos.insert(0, "exact")
    elif n > config.exact_max_n and "exact" in algos:
        algos.remove("exact")
    use_mid = "mid_p" in algos and _mid_applicable(n, p)
    if not use_mid and "mid_p" in algos:
        algos.remove("mid_p")
    if use_mid:
        G, G_high = generate_coupled(n, p, graph_seed)
    else:
        G, G_high = generate_gnp(n, p, graph_seed), None
    m1, m2, regime = _predictions(n, p)
    rows = []
    for algo in algos:
        alg_seed = graph_seed.derive(algo)
        t0 = time.perf_counter()
        error = ""
        try:
            if algo == "exact":
                _, coloring = exact_clique_chromatic(G, budget=config.node_budget,
                                                     clique_cap=config.clique_cap)
            elif algo == "greedy":
                coloring = greedy_proper_coloring(G)
            elif algo == "dominating":
                coloring = dominating_set_coloring(G)
            elif algo == "low_p":
                coloring, _ = color_low_p(G, p, alg_seed) if 0 < p < 1 else (greedy_proper_coloring(G), None)
            else:
                coloring, _ = color_mid_p(G, G_high, p, alg_seed)
        except BudgetExceeded as exc:
            coloring = exc.certificate
            error = "budget_exceeded"
        elapsed = (time.perf_counter() - t0) * 1000.0
        valid = is_valid_clique_coloring(G, coloring).valid
        if not valid:
            error = error or "invalid_coloring"
        rows.append(ResultRow(
            n=n, p=p, x_exponent=x, seed=graph_seed.stream, algorithm=algo,
            palette=coloring.palette, valid=valid, repairs=coloring.repairs,
            runtime_ms=elapsed if config.timing else None,
            predicted_main1=m1, predicted_main2=m2, regime=regime,
            ratio=coloring.palette / m2 if m2 else None, error=error,
        ))
    return rows


def run_sweep(config: SweepConfig, out=None) -> list[ResultRow]:
    """Run every (grid point, trial); rows come back in canonical order.

    ``out`` may be a path or text stream; ``config.output`` is used otherwise.
    """
    config.validate()
    tasks = [(config, n, p, x, t) for (n, p, x) in config.points() for t in range(config.trials)]
    if config.workers == 1:
        chunks = [_run_point(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            chunks = list(pool.map(_run_point, tasks))
    rows = [r for chunk in chunks for r in chunk]
    target = out if out is not None else config.output
    if target is not None:
        write_csv(rows, target, config)
    return rows


def write_csv(rows, target, config: SweepConfig | None = None):
    """Write a timestamp comment line, the fixed header, then one line per row."""
    buf = io.StringIO()
    stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    seed = "" if config is None else f" seed={config.seed}"
    buf.write(f"# cliquechrom sweep{seed} generated={stamp}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow(r.csv_fields())
    text = buf.getvalue()
    if isinstance(target, str):
        with open(target, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        target.write(text)
    return text


# -- lemma checks --------------------------------------------------------------

LEMMAS = ("xs-dominates", "crux", "gi-maxdeg", "lambda-edges", "xs-expectation", "xs-concentration")


@dataclass
class LemmaReport:
    """``checked`` units examined, ``failures`` among them, ``passed`` against ``threshold``.

    Deterministic checks use threshold 0 (no failure allowed).
    """

    name: str
    checked: int
    failures: int
    threshold: float
    passed: bool
    details: dict = field(default_factory=dict)

    @property
    def rate(self) -> float:
        return self.failures / self.checked if self.checked else 0.0

    def as_dict(self) -> dict:
        return {"name": self.name, "checked": self.checked, "failures": self.failures,
                "rate": self.rate, "threshold": self.threshold, "passed": self.passed,
                "details": self.details}


def _graph_from_mask(n, pairs, mask):
    return Graph.from_edges(n, [pairs[i] for i in range(len(pairs)) if mask >> i & 1])


def _check_xs_dominates(params, seed):
    n = params.get("n", 6)
    s = params.get("s", 4)
    k = params.get("k", 2)
    xs = params.get("x", [1, 2, 4])
    random_instances = params.get("random", 10_000)
    pairs = list(combinations(range(n), 2))
    checked = failures = 0
    subsets = list(combinations(range(n), s))
    for mask in range(1 << len(pairs)):
        G = _graph_from_mask(n, pairs, mask)
        for S in subsets:
            for x in xs:
                st = count_stats(G, S, k, x)
                checked += 1
                failures += st.Xprime_S < st.X_S
    exhaustive = checked
    rng = seed.derive("xs-dominates").rng()
    for _ in range(random_instances):
        m = int(rng.integers(7, 41))
        G = generate_gnp(m, float(rng.uniform(0.05, 0.9)), Seed(seed.master, int(rng.integers(2**63))))
        S = rng.choice(m, size=int(rng.integers(2, m)), replace=False)
        kk = int(rng.integers(2, min(4, S.size) + 1))
        st = count_stats(G, S, kk, int(rng.integers(1, 9)))
        checked += 1
        failures += st.Xprime_S < st.X_S
    return checked, failures, 0.0, {"exhaustive_cases": exhaustive, "random_cases": random_instances}


def _check_crux(params, seed):
    n = params.get("n", 40)
    p = params.get("p", 0.3)
    r = params.get("r", 4)
    graphs = params.get("graphs", 100)
    checked = failures = 0
    for g in range(graphs):
        G = generate_gnp(n, p, seed.derive("crux", g))
        plan = partition_vertices(n, r, seed.derive("plan", g))
        cliques = maximal_cliques(G).cliques
        for part in plan.parts:
            H, mapping = build_Gi(G, part)
            local = {int(v): i for i, v in enumerate(mapping)}
            in_h = set(maximal_cliques(H).cliques)
            for Q in cliques:
                if all(int(v) in local for v in Q):
                    checked += 1
                    failures += tuple(sorted(local[v] for v in Q)) not in in_h
    return checked, failures, 0.0, {"graphs": graphs}


def _check_gi_maxdeg(params, seed):
    n = params.get("n", 10_000)
    p = params.get("p", 0.01)
    seeds = params.get("seeds", 50)
    th = compute_thresholds(n, p)
    r = params.get("r", th.r)
    checked = failures = bound_violations = 0
    worst = 0
    for t in range(seeds):
        G = generate_gnp(n, p, seed.derive("gi-maxdeg", t))
        rep = gi_max_degree_report(G, partition_vertices(n, r, seed.derive("plan", t)), th)
        checked += r
        failures += rep.parts_over_limit
        bound_violations += rep.bound_violations
        worst = max(worst, max(rep.max_degrees))
    return checked, failures, params.get("threshold", 0.02), {
        "r": r, "Gamma": th.Gamma, "limit": 42 * th.Gamma, "max_degree_seen": worst,
        "decomposition_violations": bound_violations}


def _window_p(n):
    L = math.log(n)
    return 1.05 * math.sqrt((L / 2 + math.log(L)) / n)


def _check_lambda(params, seed):
    n = params.get("n", 50_000)
    p = params.get("p", _window_p(n))
    seeds = params.get("seeds", 20)
    th = compute_thresholds(n, p)
    if th.lam is None:
        raise InapplicableRegime("xi <= 0 at the requested (n, p)")
    failing = 0
    over = []
    for t in range(seeds):
        cnt = lambda_excess(generate_gnp(n, p, seed.derive("lambda", t)), th.lam)
        over.append(cnt)
        failing += cnt > 0
    return seeds, failing, params.get("threshold", 0.05), {
        "p": p, "xi": th.xi, "lambda": th.lam, "vertices_over_lambda": over}


def _check_xs_expectation(params, seed):
    n, s, k, p = params.get("n", 60), params.get("s", 12), params.get("k", 2), params.get("p", 0.15)
    trials = params.get("trials", 2000)
    summ = concentration_experiment(n, p, k, s, trials, 1, seed.derive("xs-expectation"),
                                    x=params.get("x", s), fixed_set=True)
    expect = expected_XS(n, s, p, k)
    dev = abs(summ.mean_X - expect)
    ok = dev <= 3 * summ.stderr_X
    return 1, int(not ok), 0.0, {"mean": summ.mean_X, "stderr": summ.stderr_X,
                                 "expected": expect, "z": dev / summ.stderr_X if summ.stderr_X else math.inf}


def _check_xs_concentration(params, seed):
    n = params.get("n", 3000)
    p = params.get("p", n ** -0.5)
    k, s = params.get("k", 2), params.get("s", 200)
    summ = concentration_experiment(n, p, k, s, params.get("trials", 50), params.get("sets", 20),
                                    seed.derive("xs-concentration"), delta=params.get("delta", 0.5))
    below = int(np.sum(summ.X < summ.delta * summ.expected_XS))
    return summ.X.size, below, params.get("threshold", 0.05), summ.as_dict()


_CHECKS = {
    "xs-dominates": _check_xs_dominates,
    "crux": _check_crux,
    "gi-maxdeg": _check_gi_maxdeg,
    "lambda-edges": _check_lambda,
    "xs-expectation": _check_xs_expectation,
    "xs-concentration": _check_xs_concentration,
}


def verify_lemma(name: str, params: dict | None = None, seed=0) -> LemmaReport:
    if name not in _CHECKS:
        raise ValueError(f"unknown lemma {name!r}; known: {list(LEMMAS)}")
    seed = seed if isinstance(seed, Seed) else Seed(int(seed))
    checked, failures, threshold, details = _CHECKS[name](dict(params or {}), seed)
    rate = failures / checked if checked else 0.0
    passed = failures == 0 if threshold == 0 else rate <= threshold
    return LemmaReport(name, checked, failures, threshold, passed, details)


# -- conjecture probe ------------------------------------------------------------

def probe_conjecture(n: int, p_grid, seed=0) -> list[dict]:
    """Dominating-set palette against log(n)/p and the best lower bound, per p."""
    p_grid = list(p_grid)
    if not p_grid:
        raise ValueError("p grid is empty")
    seed = seed if isinstance(seed, Seed) else Seed(int(seed))
    L = math.log(n)
    low_edge = L ** 0.6 * n ** -0.4
    out = []
    for p in p_grid:
        if not 0.0 < p < 1.0:
            raise ValueError("p values must lie in (0, 1)")
        G = generate_gnp(n, p, seed.derive("probe", n, p))
        c = dominating_set_coloring(G)
        scale = L / p
        try:
            k, lb = best_k(n, p)
        except NoValidK:
            k, lb = None, None
        out.append({
            "n": n, "p": p, "in_window": p > low_edge, "palette": c.palette,
            "repairs": c.repairs, "log_n_over_p": scale, "ratio_scale": c.palette / scale,
            "best_k": k, "lower_bound": lb,
            "ratio_lower": c.palette / lb if lb else None,
        })
    return out
