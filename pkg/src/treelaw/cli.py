"""Command-line entry point: one subcommand per operation, JSON on stdout.

Exit codes: 0 success, 1 input error, 2 resource cap, 3 internal error.
Exact values are printed as "p/q" strings; Monte Carlo numbers are floats
under keys tagged "approx".
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from . import graph_core as gc
from . import locus, mst_exact, rotations, sampler_mc, shift_exact, word_maps

EXIT_OK, EXIT_INPUT, EXIT_CAP, EXIT_INTERNAL = 0, 1, 2, 3


class InputError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def __init__(self, *a, **kw):
        kw.setdefault("allow_abbrev", False)
        super().__init__(*a, **kw)

    def error(self, message):
        raise InputError(f"{self.prog}: {message}\n{self.format_usage()}")


def q(x) -> str:
    return gc.format_rational(x)


def _tree_key(t) -> str:
    return json.dumps(list(t))


def _json_arg(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"bad JSON {text!r}: {exc}") from exc


def _indices(text) -> list:
    """Edge or vertex indices, as JSON or as a bare "0,1,4" list."""
    if text.strip().startswith("["):
        data = _json_arg(text)
    else:
        data = text.split(",")
    try:
        return [int(str(x).strip()) for x in data]
    except ValueError as exc:
        raise InputError(f"bad index list {text!r}") from exc


def _rationals(text) -> list:
    data = _json_arg(text) if text.strip().startswith("[") else text.split(",")
    try:
        return [Fraction(str(x).strip()) for x in data]
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad rational list {text!r}") from exc


def _load_json_source(text):
    text = text.strip()
    if text.startswith("{") or text.startswith("["):
        return _json_arg(text)
    try:
        with open(text) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {text}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"bad JSON in {text}: {exc}") from exc


def _graph(args) -> gc.Graph:
    data = _load_json_source(args.graph)
    try:
        return gc.Graph.from_json(data)
    except (KeyError, TypeError) as exc:
        raise InputError(f"graph JSON needs n and edges: {exc}") from exc


def _measures(args, m: int) -> list:
    if getattr(args, "measure", None):
        data = _load_json_source(args.measure)
        if isinstance(data, dict):
            data = data.get("edges", data.get("measures"))
        measures = [shift_exact.EdgeMeasure.from_json(d) for d in data]
    elif getattr(args, "shifts", None):
        measures = shift_exact.shift_measures(_rationals(args.shifts))
    else:
        measures = shift_exact.iid_uniform(m)
    if len(measures) != m:
        raise InputError(f"need {m} edge laws, got {len(measures)}")
    return measures


def _cap(value, env: str, default: int) -> int:
    if value is not None:
        return value
    if os.environ.get(env):
        return int(os.environ[env])
    return default


def _wordmap(args) -> word_maps.WordMap:
    if getattr(args, "wordmap", None):
        return word_maps.WordMap.from_json(_load_json_source(args.wordmap))
    weights = _rationals(args.weights) if args.weights else None
    return word_maps.WordMap(args.word, weights)


def _dist_payload(dist: dict) -> dict:
    return {word_maps.ordering_to_string(s): (q(p) if isinstance(p, Fraction) else p)
            for s, p in dist.items()}


# ---- subcommands -------------------------------------------------------

def cmd_mst_prob(args):
    g = _graph(args)
    tree = gc.canonical(_indices(args.tree))
    return {"tree": list(tree), "method": args.method, "prob": q(mst_exact.mst_prob(g, tree, args.method))}


def cmd_mst_dist(args):
    g = _graph(args)
    cap = _cap(args.max_trees, "TREELAW_MAX_TREES", mst_exact.TREE_CAP)
    dist = mst_exact.mst_distribution(g, args.method, cap)
    return {_tree_key(t): q(p) for t, p in dist.items()}


def cmd_ust(args):
    g = _graph(args)
    count = gc.spanning_tree_count(g)
    if count == 0:
        raise gc.GraphError("graph not connected")
    out = {"count": count, "prob": q(Fraction(1, count))}
    if args.list:
        cap = _cap(args.max_trees, "TREELAW_MAX_TREES", mst_exact.TREE_CAP)
        if count > cap:
            raise gc.ResourceCapError(f"{count} spanning trees exceed cap {cap}")
        out["trees"] = [list(t) for t in gc.enumerate_spanning_trees(g)]
    return out


def cmd_path_rotate(args):
    inst = rotations.normalized_rotation(args.n, _json_arg(args.L), _json_arg(args.path),
                                         _json_arg(args.R), literal=args.literal)
    cap = _cap(args.max_perms, "TREELAW_MAX_PERMS", rotations.FOLDED_CAP)
    pt, ptp = inst.probabilities(cap)
    return {
        "pT": q(pt),
        "pTprime": q(ptp),
        "T": [list(inst.g.edges[e]) for e in inst.t],
        "T_prime": [list(inst.g.edges[e]) for e in inst.t_prime],
        "strict": pt > ptp,
    }


def cmd_rotate_check(args):
    if args.gnp is not None:
        n, p = args.gnp
        w = rotations.random_graph_witness(int(n), float(p), args.seed, args.search)
        return {"witness": None if w is None else w.to_json()}
    if args.graph is None or args.t1 is None or args.t2 is None:
        raise InputError("rotate-check needs --graph, --t1, --t2 (or --gnp N P)")
    g = _graph(args)
    t1, t2 = gc.canonical(_indices(args.t1)), gc.canonical(_indices(args.t2))
    if args.beta:
        beta = _indices(args.beta)
    else:
        beta = rotations.find_cycle_expanding_bijection(g, t1, t2)
    out = {"beta": beta, "expansion": None}
    if beta is not None:
        out["expansion"] = rotations.cycle_expanding_check(g, t1, t2, beta).value
    out["cycle_lengths_t1"] = rotations.broken_cycle_lengths(g, t1)
    out["cycle_lengths_t2"] = rotations.broken_cycle_lengths(g, t2)
    if args.exact:
        out["p_t1"] = q(mst_exact.mst_prob(g, t1))
        out["p_t2"] = q(mst_exact.mst_prob(g, t2))
    return out


def cmd_shift_dist(args):
    g = _graph(args)
    dist = shift_exact.tree_distribution_exact(g, _measures(args, g.m))
    return {_tree_key(t): q(p) for t, p in dist.items()}


def cmd_theta(args):
    shifts = _rationals(args.shifts) if args.shifts else None
    rep = shift_exact.theta_report(args.r, args.s, args.t, shifts)
    out = {}
    for k, v in rep.items():
        if isinstance(v, dict):
            out[k] = {kk: q(vv) for kk, vv in v.items()}
        elif isinstance(v, Fraction):
            out[k] = q(v)
        elif isinstance(v, list):
            out[k] = [q(x) for x in v]
        else:
            out[k] = v
    if args.solve_ust:
        sol = shift_exact.solve_theta_ust_shift(args.r, args.s, args.t)
        rel = sol.relative
        out["ust_shift"] = {
            "shifts": [q(x) for x in sol.shifts],
            "relative": [q(x) for x in rel],
            "approx_relative": [float(x) for x in rel],
            "tv": q(sol.tv),
            "approx_tv": float(sol.tv),
        }
        if (args.r, args.s, args.t) == (2, 1, 2):
            eps = rel[1] - rel[0]
            out["ust_shift"]["epsilon_approx"] = float(eps)
            out["ust_shift"]["quintic_residual_approx"] = float(shift_exact.quintic(eps))
    return out


def cmd_snowman(args):
    g = _graph(args)
    found = shift_exact.find_snowman(g)
    return {
        "snowman_free": found is None,
        "witness": None if found is None else {"u": found[0], "v": found[1], "arm_lengths": list(found[2])},
    }


def cmd_word_dist(args):
    wm = _wordmap(args)
    return _dist_payload(word_maps.word_distribution(wm))


def cmd_draw_matrix(args):
    mat = word_maps.draw_matrix(args.word)
    m = max(word_maps.word_from_string(args.word)) + 1
    return {
        "columns": [word_maps.ordering_to_string(s) for s in word_maps.all_orderings(m)],
        "rows": mat,
        "rank": word_maps.rational_rank(mat),
    }


def cmd_shorten(args):
    wm = _wordmap(args)
    short = word_maps.shorten_word_map(wm)
    same = word_maps.word_distribution(short) == word_maps.word_distribution(wm)
    return {"wordmap": short.to_json(), "length": len(short), "same_distribution": same}


def cmd_uniform_word(args):
    if args.method == "recursive":
        wm = word_maps.uniform_word_recursive(args.m)
    else:
        wm = word_maps.uniform_word_quadrature(args.m)
    dist = word_maps.word_distribution(wm)
    exact = not any(isinstance(w, float) for w in wm.weights)
    out = {"wordmap": wm.to_json(), "length": len(wm)}
    if exact:
        out["uniform"] = word_maps.is_uniform(dist)
    else:
        u = 1 / len(dist)
        out["approx_tv_to_uniform"] = 0.5 * sum(abs(float(p) - u) for p in dist.values())
        out["uniform_within_1e-9"] = out["approx_tv_to_uniform"] < 1e-9
    return out


def cmd_universal_word(args):
    w = word_maps.universal_word(args.m)
    return {"word": word_maps.word_to_string(w), "length": len(w)}


def cmd_dim_bound(args):
    word = word_maps.word_from_string(args.word) if args.word else None
    return locus.dim_bounds_report(args.m, word)


def cmd_trybula(args):
    x, y, z = (Fraction(v) for v in (args.x, args.y, args.z))
    return {"x": q(x), "y": q(y), "z": q(z), "inside": locus.trybula_contains(x, y, z)}


def cmd_lie_vector(args):
    perm = locus.parse_cycles(args.perm, args.m)
    vec = locus.lie_shuffle_vector(perm)
    terms = [{"ordering": "".join(str(s + 1) for s in o), "coef": c} for o, c in sorted(vec.items())]
    return {"perm": locus.format_cycles(perm), "terms": terms,
            "positive": sum(1 for c in vec.values() if c > 0),
            "negative": sum(1 for c in vec.values() if c < 0)}


def cmd_eo_check(args):
    perm = locus.parse_cycles(args.perm, args.m)
    out = locus.eo_gradient_check(perm)
    out["ratio"] = q(out["ratio"]) if out["ratio"] is not None else None
    if args.word:
        wm = _wordmap(args)
        if wm.m != len(perm):
            raise InputError("word map must use exactly m symbols")
        res = locus.eo_constraint_residual(word_maps.word_distribution(wm), locus.events_from_cycles(perm))
        out["residual_on_word_map"] = q(res)
    return out


def cmd_sample(args):
    g = _graph(args)
    cfg = sampler_mc.SamplerConfig(args.seed, args.n, args.streams)
    emp = sampler_mc.sample_mst_empirical(g, _measures(args, g.m), cfg)
    out = emp.to_json()
    out["approx_freq"] = {_tree_key(t): c / emp.n for t, c in emp.counts.items()}
    return out


def cmd_slide_test(args):
    g = _graph(args)
    s = _rationals(args.shifts) if args.shifts else [Fraction(0)] * g.m
    cfg = sampler_mc.SamplerConfig(args.seed, args.n, args.streams)
    rep = sampler_mc.slide_monotonicity_test(g, s, args.k, _rationals(args.grid), cfg)
    out = rep.to_json()
    out["approx"] = True
    return out


def cmd_emit_plot_data(args):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if args.figure == "trybula":
        w.writerow(["x", "y", "z", "inside"])
        for x, y, z, inside in locus.trybula_grid(args.steps):
            w.writerow([q(x), q(y), q(z), int(inside)])
    else:
        w.writerow(["s1", "s2", "s3"])
        for v in locus.shiftahedron3_vertices():
            w.writerow([q(x) for x in v])
    return buf.getvalue()


# ---- parser ------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="treelaw", description="Exact and sampled spanning-tree laws under random edge weights.")
    p.add_argument("--output", choices=["json", "csv"], default="json")
    p.add_argument("--max-perms", type=int, default=None, help="cap on folded permutations")
    p.add_argument("--max-trees", type=int, default=None, help="cap on enumerated spanning trees")
    p.add_argument("--threads", type=int, default=1, help="accepted for compatibility; work is single-threaded")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, func, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.set_defaults(func=func)
        return sp

    sp = add("mst-prob", cmd_mst_prob, "exact MST probability of one tree")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--tree", required=True)
    sp.add_argument("--method", choices=sorted(mst_exact.METHODS), default="internal")

    sp = add("mst-dist", cmd_mst_dist, "exact MST law over all spanning trees")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--method", choices=sorted(mst_exact.METHODS), default="internal")

    sp = add("ust", cmd_ust, "uniform spanning tree law")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--list", action="store_true")

    sp = add("path-rotate", cmd_path_rotate, "path rotation probabilities in K_n")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--L", required=True)
    sp.add_argument("--path", required=True)
    sp.add_argument("--R", required=True)
    sp.add_argument("--literal", action="store_true", help="run the unpatched update rules")

    sp = add("rotate-check", cmd_rotate_check, "cycle-expanding check or random-graph witness")
    sp.add_argument("--graph")
    sp.add_argument("--t1")
    sp.add_argument("--t2")
    sp.add_argument("--beta")
    sp.add_argument("--exact", action="store_true")
    sp.add_argument("--gnp", nargs=2, metavar=("N", "P"))
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--search", choices=["proof", "lemma", "exact"], default="proof")

    sp = add("shift-dist", cmd_shift_dist, "exact MST law under a product measure")
    sp.add_argument("--graph", required=True)
    grp = sp.add_mutually_exclusive_group()
    grp.add_argument("--shifts")
    grp.add_argument("--measure")

    sp = add("theta", cmd_theta, "theta graph formulas and UST shifts")
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--t", type=int, required=True)
    sp.add_argument("--shifts")
    sp.add_argument("--solve-ust", action="store_true")

    sp = add("snowman", cmd_snowman, "search for an unequal theta subgraph")
    sp.add_argument("--graph", required=True)

    for name, func, text in (("word-dist", cmd_word_dist, "law induced by a word map"),
                             ("shorten", cmd_shorten, "shorten a word map")):
        sp = add(name, func, text)
        sp.add_argument("--word")
        sp.add_argument("--weights")
        sp.add_argument("--wordmap")

    sp = add("draw-matrix", cmd_draw_matrix, "draw matrix and its rank")
    sp.add_argument("--word", required=True)

    sp = add("uniform-word", cmd_uniform_word, "word map inducing the uniform law")
    sp.add_argument("--method", choices=["recursive", "quadrature"], default="quadrature")
    sp.add_argument("--m", type=int, required=True)

    sp = add("universal-word", cmd_universal_word, "cyclic word covering every reachable law")
    sp.add_argument("--m", type=int, required=True)

    sp = add("dim-bound", cmd_dim_bound, "dimension bounds for reachable ordering laws")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--word")

    sp = add("trybula", cmd_trybula, "membership in the three-variable pairwise region")
    sp.add_argument("--x", required=True)
    sp.add_argument("--y", required=True)
    sp.add_argument("--z", required=True)

    sp = add("lie-vector", cmd_lie_vector, "signed ordering combination of a permutation")
    sp.add_argument("--perm", required=True)
    sp.add_argument("--m", type=int)

    sp = add("eo-check", cmd_eo_check, "even/odd constraint gradient check")
    sp.add_argument("--perm", required=True)
    sp.add_argument("--m", type=int)
    sp.add_argument("--word")
    sp.add_argument("--weights")
    sp.add_argument("--wordmap")

    sp = add("sample", cmd_sample, "Monte Carlo MST counts")
    sp.add_argument("--graph", required=True)
    grp = sp.add_mutually_exclusive_group()
    grp.add_argument("--shifts")
    grp.add_argument("--measure")
    sp.add_argument("--n", type=int, default=100_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--streams", type=int, default=1)

    sp = add("slide-test", cmd_slide_test, "monotonicity under sliding one interval")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--shifts")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--grid", required=True)
    sp.add_argument("--n", type=int, default=100_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--streams", type=int, default=1)

    sp = add("emit-plot-data", cmd_emit_plot_data, "CSV point clouds for plotting")
    sp.add_argument("--figure", choices=["trybula", "shiftahedron3"], required=True)
    sp.add_argument("--steps", type=int, default=20)
    return p


def _to_csv(payload) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if isinstance(payload, dict) and "rows" in payload and "columns" in payload:
        w.writerow(payload["columns"])
        w.writerows(payload["rows"])
    elif isinstance(payload, dict) and all(not isinstance(v, (dict, list)) for v in payload.values()):
        w.writerow(["key", "value"])
        w.writerows(payload.items())
    else:
        raise InputError("this result has no CSV form; use --output json")
    return buf.getvalue()


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "command", None):
            stderr.write(parser.format_usage())
            return EXIT_INPUT
        payload = args.func(args)
        if isinstance(payload, str):
            text = payload
        elif args.output == "csv":
            text = _to_csv(payload)
        else:
            text = json.dumps(payload, indent=2) + "\n"
    except gc.ResourceCapError as exc:
        stderr.write(f"resource cap: {exc}\n")
        return EXIT_CAP
    except (InputError, ValueError, KeyError, TypeError) as exc:
        stderr.write(f"input error: {exc}\n")
        return EXIT_INPUT
    except Exception as exc:  # noqa: BLE001
        stderr.write(f"internal error: {type(exc).__name__}: {exc}\n")
        return EXIT_INTERNAL
    stdout.write(text)
    return EXIT_OK


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
