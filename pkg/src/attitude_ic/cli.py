"""Command-line front end: ``attitude-ic <command> --graph FILE ...``.

Every command prints a JSON report (or writes it to ``--out``).  Exit codes:
0 success, 2 invalid input or parameters, 3 instance too large for an
exact computation.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
import time

import numpy as np

from . import __version__, _backend
from ._parallel import default_threads
from .actionable import default_a, delta_bound, estimate_actionable, maximize_actionable
from .attitude_max import maximize_attitude
from .errors import AttitudeICError, SizeGuardError, ValidationError
from .graph import LoadOptions, load_edge_list, parse_scheme, write_idmap
from .oracle import exact_best_seed, exact_enumerate, mc_estimate, simulate_trials
from .ras import EstimatorParams, estimate_attitude, estimate_influence, required_samples
from .rng import RandomStream
from .seeds import seeds_from_labels

log = logging.getLogger("attitude_ic")

EXIT_VALIDATION = 2
EXIT_SIZE = 3


# --- helpers ---------------------------------------------------------------

def _num(x):
    """JSON-safe float: NaN and infinities become null."""
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None


def _load(args):
    scheme = parse_scheme(args.weights)
    opts = LoadOptions(args.keep_multi, args.keep_self_loops, args.symmetrize)
    g = load_edge_list(args.graph, scheme, opts)
    if args.idmap:
        write_idmap(g, args.idmap)
    return g, scheme


def _seed_labels(args):
    labels = []
    for tok in args.seeds or []:
        labels.extend(t for t in tok.replace(",", " ").split() if t)
    if args.seeds_file:
        with open(args.seeds_file) as fh:
            for line in fh:
                line = line.split("#", 1)[0]
                labels.extend(line.replace(",", " ").split())
    return labels


def _seeds(args, g):
    return seeds_from_labels(g, _seed_labels(args))


def _params(args):
    return EstimatorParams(args.eps, args.delta)


def _labels(g, seeds):
    return [g.label_of(v) for v in seeds]


def _threads(args):
    t = args.threads if args.threads is not None else default_threads()
    if t < 1:
        raise ValidationError("--threads must be >= 1")
    return t


def _report(command, args, g, scheme, params, results, timing, samples=None):
    return {
        "command": command,
        "version": __version__,
        "backend": _backend.name(),
        "graph": {
            "path": str(args.graph),
            "n": g.n,
            "m": g.m,
            "scheme": str(scheme),
            "symmetrize": bool(args.symmetrize),
            "keep_self_loops": bool(args.keep_self_loops),
            "keep_multi": bool(args.keep_multi),
        },
        "params": {"seed": args.seed, "threads": _threads(args), **params},
        "results": results,
        "samples": samples or {},
        "timing": timing,
    }


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


# --- commands --------------------------------------------------------------

def cmd_simulate(args):
    g, scheme = _load(args)
    s = _seeds(args, g)
    if args.trials < 1:
        raise ValidationError("--trials must be >= 1")
    t0 = time.perf_counter()
    est = mc_estimate(g, s, args.trials, RandomStream(args.seed), _threads(args))
    results = {
        "seeds": _labels(g, s),
        "mean_att": est.mean_att,
        "mean_inf": est.mean_inf,
        "mean_act": est.mean_act,
        "mean_ratio": est.mean_ratio,
        "stderr_att": _num(est.stderr_att),
        "stderr_inf": _num(est.stderr_inf),
        "stderr_act": _num(est.stderr_act),
        "stderr_ratio": _num(est.stderr_ratio),
    }
    return _report("simulate", args, g, scheme, {"trials": args.trials}, results,
                   {"elapsed_s": time.perf_counter() - t0})


def cmd_exact(args):
    g, scheme = _load(args)
    t0 = time.perf_counter()
    if args.k is not None:
        best, val = exact_best_seed(g, args.k, args.objective, args.max_edges, args.max_nodes)
        res = exact_enumerate(g, best, args.max_edges)
        s = best
        extra = {"objective": args.objective, "best_value": val}
    else:
        s = _seeds(args, g)
        res = exact_enumerate(g, s, args.max_edges)
        extra = {}
    results = {
        "seeds": _labels(g, s),
        "sigma_att": res.sigma_att,
        "sigma_inf": res.sigma_inf,
        "sigma_act": res.sigma_act,
        "per_node_att": {g.label_of(v): float(x) for v, x in enumerate(res.per_node_att)},
        **extra,
    }
    params = {"max_edges": args.max_edges}
    if args.k is not None:
        params.update(k=args.k, objective=args.objective, max_nodes=args.max_nodes)
    return _report("exact", args, g, scheme, params, results,
                   {"elapsed_s": time.perf_counter() - t0})


def _check_k(k, g):
    if k is None or not 1 <= k <= g.n:
        raise ValidationError(f"--k must lie in [1, n={g.n}], got {k}")


def cmd_maximize(args):
    g, scheme = _load(args)
    _check_k(args.k, g)
    params = _params(args)
    rng = RandomStream(args.seed)
    threads = _threads(args)
    p = {"k": args.k, "eps": args.eps, "delta": args.delta, "objective": args.objective}
    if args.objective == "actionable":
        a = args.a if args.a is not None else default_a(args.eps)
        p.update(a=a, paper_formula=bool(args.paper_formula))
        r = maximize_actionable(g, args.k, a, rng, args.paper_formula, threads)
        samples = {"rr_graphs": r.beta_used}
    else:
        r = maximize_attitude(g, args.k, params, rng, threads, args.objective)
        samples = {"beta": r.beta_used, "rounds": r.rounds, "beta_cap": r.diagnostics["beta_cap"]}
    results = {
        "seeds": _labels(g, r.seeds),
        "pick_order": _labels(g, r.diagnostics["pick_order"]),
        "estimate": r.est_objective,
        "selection_estimate": r.diagnostics["selection_estimate"],
        "warning": r.warning,
    }
    if args.objective == "actionable":
        results["delta_bound"] = r.diagnostics["delta_bound"]
        results["marginal_gains"] = r.diagnostics["marginal_gains"]
    return _report("maximize", args, g, scheme, p, results, {"elapsed_s": r.elapsed}, samples)


def cmd_estimate(args):
    g, scheme = _load(args)
    s = _seeds(args, g)
    params = _params(args)
    rng = RandomStream(args.seed)
    threads = _threads(args)
    t0 = time.perf_counter()
    p = {"eps": args.eps, "delta": args.delta, "objective": args.objective}
    samples = {}
    if args.objective == "actionable":
        a = args.a if args.a is not None else default_a(args.eps)
        p.update(a=a, paper_formula=bool(args.paper_formula))
        val = estimate_actionable(g, s, a, rng, args.paper_formula, threads)
    else:
        scale = g.m if args.objective == "attitude" else g.n
        beta = args.beta or (required_samples(params, scale, max(len(s), 1)) if scale else 1)
        samples["beta"] = beta
        fn = estimate_attitude if args.objective == "attitude" else estimate_influence
        val = fn(g, s, beta, rng, threads)
    results = {"seeds": _labels(g, s), "estimate": val}
    if args.objective == "actionable":
        results["delta_bound"] = delta_bound(g)
    return _report("estimate", args, g, scheme, p, results,
                   {"elapsed_s": time.perf_counter() - t0}, samples)


def attitude_histogram(hist: np.ndarray, trials: int, bins: int):
    """Rows ``(value, mean count, mean contribution)`` for values 1..bins plus
    an overflow row ``"more"``."""
    values = np.arange(len(hist))
    contrib = hist * values
    rows = []
    for v in range(1, bins + 1):
        c = hist[v] if v < len(hist) else 0
        rows.append((str(v), c / trials, (c * v) / trials))
    rows.append(("more", hist[bins + 1:].sum() / trials, contrib[bins + 1:].sum() / trials))
    return rows


def top_share(hist: np.ndarray, fraction: float) -> float:
    """Share of total attitude held by the top ``fraction`` of influenced nodes
    (pooled over trials, highest attitude first)."""
    total_nodes = int(hist.sum())
    total_att = float((hist * np.arange(len(hist))).sum())
    if total_nodes == 0 or total_att == 0:
        return 0.0
    want = math.ceil(fraction * total_nodes)
    got, acc = 0, 0.0
    for v in range(len(hist) - 1, 0, -1):
        take = min(int(hist[v]), want - got)
        acc += take * v
        got += take
        if got >= want:
            break
    return acc / total_att


def cmd_stats(args):
    g, scheme = _load(args)
    s = _seeds(args, g)
    if args.trials < 1:
        raise ValidationError("--trials must be >= 1")
    if args.bins < 1:
        raise ValidationError("--bins must be >= 1")
    tops = [float(x) for x in args.top.split(",") if x.strip()]
    if any(not 0 < x <= 100 for x in tops):
        raise ValidationError("--top percentages must lie in (0, 100]")
    t0 = time.perf_counter()
    max_att = int(g.indegree().max(initial=0)) + 1
    hist_len = max(max_att, args.bins) + 2
    tot, inf, _, hist = simulate_trials(g, s, args.trials, RandomStream(args.seed),
                                        _threads(args), hist_len)
    rows = attitude_histogram(hist, args.trials, args.bins)
    if args.csv:
        _write_csv(args.csv, ["attitude", "mean_count", "mean_contribution"], rows)
    results = {
        "seeds": _labels(g, s),
        "mean_att": float(tot.mean()),
        "mean_inf": float(inf.mean()),
        "histogram": [{"attitude": r[0], "mean_count": r[1], "mean_contribution": r[2]} for r in rows],
        "top_share": {f"{x:g}": top_share(hist, x / 100.0) for x in tops},
    }
    p = {"trials": args.trials, "bins": args.bins, "top": tops}
    return _report("stats", args, g, scheme, p, results, {"elapsed_s": time.perf_counter() - t0})


def cmd_sweep(args):
    schemes = [t.strip() for t in args.schemes.split(",") if t.strip()]
    if not schemes:
        raise ValidationError("--schemes must name at least one weight scheme")
    parsed = [parse_scheme(t) for t in schemes]
    params = _params(args)
    threads = _threads(args)
    rows, out, timing = [], [], {}
    g = None
    for text, sc in zip(schemes, parsed):
        g = load_edge_list(args.graph, sc, LoadOptions(args.keep_multi, args.keep_self_loops,
                                                       args.symmetrize))
        _check_k(args.k, g)
        r = maximize_attitude(g, args.k, params, RandomStream(args.seed), threads)
        rows.append((str(sc), r.est_objective, r.elapsed))
        out.append({"scheme": str(sc), "estimate": r.est_objective, "beta": r.beta_used,
                    "seeds": _labels(g, r.seeds)})
        timing[str(sc)] = r.elapsed
    if args.csv:
        _write_csv(args.csv, ["scheme", "estimate", "elapsed_s"], rows)
    p = {"k": args.k, "eps": args.eps, "delta": args.delta, "schemes": [str(x) for x in parsed]}
    return _report("sweep", args, g, ",".join(str(x) for x in parsed), p, {"runs": out}, timing)


# --- parser ----------------------------------------------------------------

def _common(p, seeds=False):
    p.add_argument("--graph", required=True, help="edge list: 'src dst [prob]' per line")
    p.add_argument("--weights", default="const:0.1", help="const:<p> | <p> | indeg | file")
    p.add_argument("--symmetrize", action="store_true", help="add the reverse of every edge")
    p.add_argument("--keep-self-loops", action="store_true")
    p.add_argument("--keep-multi", action="store_true", help="keep parallel edges")
    p.add_argument("--seed", type=int, default=0, help="master RNG seed")
    p.add_argument("--threads", type=int, default=None, help="worker threads (default: all cores)")
    p.add_argument("--idmap", help="write 'label<TAB>id' lines here")
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    if seeds:
        p.add_argument("--seeds", nargs="*", help="seed labels (space or comma separated)")
        p.add_argument("--seeds-file", help="file of seed labels")


def _estimation(p):
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--delta", type=float, default=0.01)
    p.add_argument("--a", type=float, default=None,
                   help="RR graphs per unit in-degree (default 64/eps^2)")
    p.add_argument("--paper-formula", action="store_true",
                   help="count seeds as max(F-1, 0) like non-seeds")


def build_parser():
    ap = argparse.ArgumentParser(prog="attitude-ic", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="Monte-Carlo attitude and influence")
    _common(p, seeds=True)
    p.add_argument("--trials", type=int, default=20000)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("exact", help="exact expectations by enumeration (small graphs)")
    _common(p, seeds=True)
    p.add_argument("--k", type=int, default=None, help="search the best seed set of size <= k")
    p.add_argument("--objective", choices=["attitude", "influence", "actionable"], default="attitude")
    p.add_argument("--max-edges", type=int, default=20)
    p.add_argument("--max-nodes", type=int, default=15)
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("maximize", help="select k seeds")
    _common(p)
    _estimation(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--objective", choices=["attitude", "actionable", "influence"], default="attitude")
    p.set_defaults(func=cmd_maximize)

    p = sub.add_parser("estimate", help="sample-based objective value of a seed set")
    _common(p, seeds=True)
    _estimation(p)
    p.add_argument("--objective", choices=["attitude", "actionable", "influence"], default="attitude")
    p.add_argument("--beta", type=int, default=None, help="override the sample count")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("stats", help="attitude histogram and top-share statistics")
    _common(p, seeds=True)
    p.add_argument("--trials", type=int, default=20000)
    p.add_argument("--bins", type=int, default=20)
    p.add_argument("--top", default="1,2,5,10", help="comma list of percentages")
    p.add_argument("--csv", help="histogram CSV path")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("sweep", help="maximize attitude under several weight schemes")
    _common(p)
    _estimation(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--schemes", default="0.02,0.05,0.1,indeg")
    p.add_argument("--csv", help="CSV path for (scheme, estimate, elapsed_s)")
    p.set_defaults(func=cmd_sweep)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        report = args.func(args)
    except SizeGuardError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_SIZE
    except (AttitudeICError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    text = json.dumps(report, indent=2, allow_nan=False)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
