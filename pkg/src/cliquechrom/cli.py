"""Command-line entry point: ``cliquechrom <subcommand> ...``."""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys

from . import harness, theory
from .coloring import (
    dominating_set_coloring,
    exact_clique_chromatic,
    greedy_proper_coloring,
    is_valid_clique_coloring,
    serialize_coloring,
)
from .constructive_bounds import color_low_p, color_mid_p, compute_thresholds
from .exceptions import CliqueChromError, NoValidK
from .graph_core import Seed, generate_coupled, generate_gnp, parse_edge_list, serialize_edge_list
from .lowerbound_stats import concentration_experiment


def _write(text: str, path: str | None):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _read_graph(path: str):
    with open(path, encoding="utf-8") as fh:
        return parse_edge_list(fh.read())


def _json(obj) -> str:
    return json.dumps(obj, indent=2, default=lambda o: None if o is None else str(o)) + "\n"


def cmd_gen(a):
    seed = Seed(a.seed)
    if a.coupled:
        low, high = generate_coupled(a.n, a.p, seed)
        _write(serialize_edge_list(low), a.out)
        _write(serialize_edge_list(high), a.out_high)
    else:
        _write(serialize_edge_list(generate_gnp(a.n, a.p, seed)), a.out)
    return 0


def cmd_color(a):
    seed = Seed(a.seed)
    G_high = None
    if a.input:
        G = _read_graph(a.input)
        if a.high:
            G_high = _read_graph(a.high)
    else:
        if a.n is None or a.p is None:
            raise SystemExit("give --in FILE or both --n and --p")
        if a.algo == "mid_p":
            G, G_high = generate_coupled(a.n, a.p, seed.derive("graph"))
        else:
            G = generate_gnp(a.n, a.p, seed.derive("graph"))
    p = a.p if a.p is not None else (2 * G.m / (G.n * (G.n - 1)) if G.n > 1 else 0.0)
    diag: dict = {}
    if a.algo == "greedy":
        c = greedy_proper_coloring(G)
    elif a.algo == "dominating":
        c = dominating_set_coloring(G)
    elif a.algo == "exact":
        value, c = exact_clique_chromatic(G, budget=a.budget)
        diag["value"] = value
    elif a.algo == "low_p":
        c, diag = color_low_p(G, p, seed.derive("low_p"))
    else:
        if G_high is None:
            raise SystemExit("mid_p on a file needs --high FILE (the coupled denser graph)")
        c, diag = color_mid_p(G, G_high, p, seed.derive("mid_p"))
    diag = {**diag, "n": G.n, "m": G.m, "palette": c.palette, "repairs": c.repairs,
            "valid": is_valid_clique_coloring(G, c).valid}
    _write(serialize_coloring(c), a.out)
    sys.stderr.write(json.dumps(diag) + "\n")
    return 0


def predict_report(n: float, p: float, C: float = math.e, tau: float = 0.4, k: int | None = None) -> dict:
    """Every closed-form quantity at (n, p) that is defined there."""
    out: dict = {"n": n, "p": p, "C": C, "tau": tau}
    if n * p > 1:
        out["np_exponent"] = math.log(n * p) / math.log(n)
        if 0 < out["np_exponent"] < 1:
            out["f_exponent"] = theory.f_exponent(out["np_exponent"])
        out["predicted_main1"] = theory.predicted_main1(n, p)
    out["predicted_main2"] = theory.predicted_main2(n, p)
    out["regime"], out["dominant_term"] = theory.regime_classify(n, p)
    out["thresholds"] = theory.thresholds(n, C).as_dict()
    if 0 < p < 1 and n >= 2:
        out["degree_thresholds"] = compute_thresholds(int(n), p).as_dict()
    if 0 < p < 1:
        th = theory.thresholds(n, C)
        if th.p2 <= p:
            out["canonical_k"] = theory.canonical_k(n, p)
        try:
            out["best_k"], out["best_lower_bound"] = theory.best_k(n, p, C, tau)
        except NoValidK:
            out["best_k"] = None
        kk = k if k is not None else (out.get("best_k") or 2)
        out["bound_params"] = theory.bound_params(n, p, kk, C, tau).as_dict()
    return out


def cmd_predict(a):
    _write(_json(predict_report(a.n, a.p, a.C, a.tau, a.k)), None)
    return 0


def cmd_stats(a):
    summ = concentration_experiment(a.n, a.p, a.k, a.s, a.trials, a.sets, Seed(a.seed), x=a.x)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["sample", "n", "p", "k", "s", "x", "X_S", "Xprime_S", "Y_S", "expected_XS"])
    for i, (X, Xp, Y) in enumerate(zip(summ.X, summ.Xprime, summ.Y)):
        w.writerow([i, a.n, format(a.p, ".10g"), a.k, a.s, summ.x, int(X), int(Xp), int(Y),
                    format(summ.expected_XS, ".10g")])
    return 0


def _parse_params(items):
    params = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise SystemExit(f"--param expects key=value, got {item!r}")
        params[key] = json.loads(value)
    return params


def cmd_verify(a):
    rep = harness.verify_lemma(a.name, _parse_params(a.param), a.seed)
    _write(_json(rep.as_dict()), None)
    return 0 if rep.passed else 1


def cmd_sweep(a):
    with open(a.config, encoding="utf-8") as fh:
        cfg = harness.SweepConfig.from_json(fh.read())
    if a.workers is not None:
        cfg.workers = a.workers
    out = a.out or cfg.output or "-"
    rows = harness.run_sweep(cfg, out=sys.stdout if out == "-" else out)
    invalid = sum(not r.valid for r in rows)
    sys.stderr.write(f"{len(rows)} rows, {invalid} invalid\n")
    return 0 if invalid == 0 else 1


def cmd_probe(a):
    rows = harness.probe_conjecture(a.n, a.p, a.seed)
    w = csv.DictWriter(sys.stdout, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cliquechrom",
                                 description="Clique colorings of random graphs G(n, p).")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="sample G(n, p) as an edge list")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--p", type=float, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", default=None)
    g.add_argument("--coupled", action="store_true", help="also emit the coupled G(n, 2p)")
    g.add_argument("--out-high", default=None)
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("color", help="clique-color a graph from a file or freshly sampled")
    c.add_argument("--in", dest="input", default=None)
    c.add_argument("--high", default=None, help="coupled denser graph for mid_p")
    c.add_argument("--n", type=int)
    c.add_argument("--p", type=float)
    c.add_argument("--algo", choices=harness.ALGORITHMS, default="greedy")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--budget", type=int, default=10**8)
    c.add_argument("--out", default=None)
    c.set_defaults(func=cmd_color)

    pr = sub.add_parser("predict", help="closed-form predictions as JSON")
    pr.add_argument("--n", type=float, required=True)
    pr.add_argument("--p", type=float, required=True)
    pr.add_argument("--C", type=float, default=math.e)
    pr.add_argument("--tau", type=float, default=0.4)
    pr.add_argument("--k", type=int, default=None)
    pr.set_defaults(func=cmd_predict)

    st = sub.add_parser("stats", help="sample X_S, X'_S, Y_S as CSV")
    st.add_argument("--n", type=int, required=True)
    st.add_argument("--p", type=float, required=True)
    st.add_argument("--k", type=int, default=2)
    st.add_argument("--s", type=int, required=True)
    st.add_argument("--x", type=int, default=None)
    st.add_argument("--trials", type=int, default=10)
    st.add_argument("--sets", type=int, default=10)
    st.add_argument("--seed", type=int, default=0)
    st.set_defaults(func=cmd_stats)

    v = sub.add_parser("verify", help="run a lemma check; exit 1 on failure")
    v.add_argument("name", choices=harness.LEMMAS)
    v.add_argument("--param", action="append", metavar="KEY=JSON")
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=cmd_verify)

    sw = sub.add_parser("sweep", help="run a sweep from a JSON config")
    sw.add_argument("config")
    sw.add_argument("--workers", type=int, default=None)
    sw.add_argument("--out", default=None)
    sw.set_defaults(func=cmd_sweep)

    pc = sub.add_parser("probe-conjecture", help="dominating palette vs log(n)/p")
    pc.add_argument("--n", type=int, required=True)
    pc.add_argument("--p", type=float, nargs="+", required=True)
    pc.add_argument("--seed", type=int, default=0)
    pc.set_defaults(func=cmd_probe)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliqueChromError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
