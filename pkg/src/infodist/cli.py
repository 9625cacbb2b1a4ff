"""Command-line surface: measures, expand, approx, dist, graphdist.

Every run echoes its resolved configuration (as comment lines in table mode,
as a ``config`` field in doc mode) so output is reproducible byte for byte
from the same inputs.  Exit codes: 0 success, 2 usage error, 3 parse error,
4 domain error, 5 infinite-divergence result.
"""

from __future__ import annotations

import argparse
import io
import math
import sys
from dataclasses import dataclass
from pathlib import Path

from .distribution import (
    JointDistribution,
    Schema,
    estimate_joint,
    load_dataset,
)
from .errors import InfodistError, ParseError
from .expansion import (
    convergence_profile,
    expand_divergence,
    truncated_approximation,
    truncation_divergence,
)
from .graphs import chowliu_tree, dual_path_report, graph_distribution, mi_weighted_graph
from .lattice import (
    InfoProfile,
    entropy,
    indices_of,
    interaction_information,
    multi_information,
    omega_decomposition,
)
from .metrics import (
    DistanceResult,
    GaussianParams,
    dirac_distance,
    gaussian_distance,
    poisson_distance,
    reference_distance,
    uniform_distance,
)
from . import serialize

SUBSET_CAP_DEFAULT = 6


@dataclass
class RunOutput:
    doc: dict
    table: str
    infinite: bool = False


def _parse_schema_arg(text: str) -> Schema:
    pairs = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        name, sep, card = chunk.partition(":")
        if not sep:
            raise ParseError(f"schema entry {chunk!r} is not name:cardinality")
        try:
            pairs.append((name.strip(), int(card)))
        except ValueError:
            raise ParseError(f"cardinality {card!r} is not an integer") from None
    if not pairs:
        raise ParseError("empty schema specification")
    return Schema(tuple(pairs))


def _load_joint(path: str, schema: Schema | None, delimiter: str) -> JointDistribution:
    text = Path(path).read_text(encoding="utf-8")
    if text.lstrip().startswith("{"):
        return serialize.read_distribution(text)
    data = load_dataset(io.StringIO(text), schema=schema, delimiter=delimiter)
    return estimate_joint(data)


def _fmt(x: float) -> str:
    return format(float(x) + 0.0, ".12g")


def _table(config: dict, lines: list[str]) -> str:
    header = [f"# {k} = {v}" for k, v in config.items()]
    return "\n".join(header + lines) + "\n"


def _value_text(x: float) -> str:
    return "infinite" if math.isinf(x) else _fmt(x)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_measures(args, config: dict) -> RunOutput:
    schema = _parse_schema_arg(args.schema) if args.schema else None
    dist = _load_joint(args.input, schema, args.delimiter)
    n = len(dist.schema)
    cap = args.max_subset if args.max_subset is not None else min(n, SUBSET_CAP_DEFAULT)
    if cap > SUBSET_CAP_DEFAULT:
        print(
            f"warning: subset cap {cap} scans {3 ** n} marginal passes; this can be slow",
            file=sys.stderr,
        )
    config["max_subset"] = cap
    units = args.base

    rows = []
    inter_values: dict[int, float] = {}
    masks = sorted(range(1, 1 << n), key=lambda m: (bin(m).count("1"), m))
    for mask in masks:
        idxs = indices_of(mask)
        if len(idxs) > cap:
            continue
        h = entropy(dist, idxs, units=units)
        i = interaction_information(dist, idxs, units=units)
        inter_values[mask] = i
        rows.append((idxs, h, i))
    omega = multi_information(dist, units=units)

    doc = {
        "kind": "measures",
        "config": config,
        "units": units,
        "n_variables": n,
        "variables": list(dist.schema.names),
        "subsets": [
            {"subset": list(idxs), "entropy": h, "interaction": i} for idxs, h, i in rows
        ],
        "multi_information": omega,
    }
    if cap >= n:
        decomp = omega_decomposition(dist, units=units)
        doc["size_sums"] = {str(k): v for k, v in sorted(decomp.size_sums.items())}
        doc["alternating_recombination"] = decomp.recombined

    width = max(len("{" + ",".join(map(str, r[0])) + "}") for r in rows)
    lines = [f"{'subset':<{width}}  {'size':>4}  {'entropy':>18}  {'interaction':>18}"]
    for idxs, h, i in rows:
        label = "{" + ",".join(map(str, idxs)) + "}"
        lines.append(f"{label:<{width}}  {len(idxs):>4}  {_fmt(h):>18}  {_fmt(i):>18}")
    lines.append(f"multi-information ({units}): {_fmt(omega)}")

    if args.plot_dir:
        from .figures import render_profile

        profile = InfoProfile(n, "interaction", units, inter_values)
        render_profile(profile, args.plot_dir, stem="measures")
    return RunOutput(doc=doc, table=_table(config, lines))


def _cmd_expand(args, parser, config: dict) -> RunOutput:
    schema = _parse_schema_arg(args.schema) if args.schema else None
    p = _load_joint(args.input, schema, args.delimiter)
    if (args.input2 is None) == (args.m is None):
        parser.error("expand needs exactly one of --input2 or -m")
    if args.input2 is not None:
        q = _load_joint(args.input2, schema, args.delimiter)
        config["comparison"] = args.input2
    else:
        q = truncated_approximation(p, args.m).approximation
        config["comparison"] = f"order-{args.m} truncation of the input"
    report = expand_divergence(p, q, units=args.base)

    doc = serialize.expansion_doc(report)
    doc = {"kind": doc.pop("kind"), "config": config, **doc}
    lines = [f"{'degree':>6}  {'term':>18}  {'cumulative':>18}"]
    for m, (t, a) in enumerate(zip(report.degree_terms, report.cumulative_a), start=1):
        lines.append(f"{m:>6}  {_fmt(t):>18}  {_fmt(a):>18}")
    lines.append(f"joint entropy ({report.units}): {_fmt(report.true_entropy)}")
    lines.append(f"divergence ({report.units}): {_value_text(report.divergence)}")
    if report.infinite:
        lines.append(f"offending state: {report.offending_state}")

    if args.plot_dir and not report.infinite:
        from .figures import render_expansion

        render_expansion(report, args.plot_dir, stem="expand")
    return RunOutput(doc=doc, table=_table(config, lines), infinite=report.infinite)


def _cmd_approx(args, parser, config: dict) -> RunOutput:
    if args.m is None:
        parser.error("approx needs -m <order>")
    schema = _parse_schema_arg(args.schema) if args.schema else None
    p = _load_joint(args.input, schema, args.delimiter)
    family = truncated_approximation(p, args.m)
    result = truncation_divergence(p, args.m, units=args.base)
    profile = convergence_profile(p, units=args.base)

    doc = serialize.truncation_doc(family, result, args.base, convergence=profile)
    doc = {"kind": doc.pop("kind"), "config": config, **doc}
    lines = [
        f"order: {family.order}",
        "coefficients: "
        + ", ".join(f"size {k}: {c:+d}" for k, c in sorted(family.coefficients.items())),
        f"raw normalization: {_fmt(family.raw_z)}",
        f"divergence ({args.base}): {_value_text(result.divergence)}",
        f"surrogate A_m - H ({args.base}): {_fmt(result.surrogate)}",
        "",
        f"{'order':>6}  {'divergence':>18}",
    ]
    for m, d in profile:
        lines.append(f"{m:>6}  {_fmt(d):>18}")

    if args.plot_dir:
        from .figures import render_convergence

        render_convergence(profile, args.base, args.plot_dir, stem="approx")
    return RunOutput(doc=doc, table=_table(config, lines))


def _cmd_dist(args, parser, config: dict) -> RunOutput:
    kind = args.reference
    result: DistanceResult

    if kind in ("empirical", "uniform"):
        if not args.input or not args.input2:
            parser.error(f"--reference {kind} needs --input and --input2")
        schema = _parse_schema_arg(args.schema) if args.schema else None
        r = _load_joint(args.input, schema, args.delimiter)
        s = _load_joint(args.input2, schema, args.delimiter)
        if kind == "empirical":
            if not args.ref_input:
                parser.error("--reference empirical needs --ref-input")
            pref = _load_joint(args.ref_input, schema, args.delimiter)
            result = reference_distance(pref, r, s, units=args.base)
        else:
            result = uniform_distance(r, s, units=args.base)
    elif kind in ("gaussian", "dirac"):
        needed = [args.mu1, args.sigma1, args.mu2, args.sigma2]
        if any(v is None for v in needed):
            parser.error(f"--reference {kind} needs --mu1/--sigma1/--mu2/--sigma2")
        r = GaussianParams(args.mu1, args.sigma1)
        s = GaussianParams(args.mu2, args.sigma2)
        if kind == "gaussian":
            if args.mu is None or args.sigma is None:
                parser.error("--reference gaussian needs --mu and --sigma")
            result = gaussian_distance(GaussianParams(args.mu, args.sigma), r, s)
        else:
            if args.mu is None:
                parser.error("--reference dirac needs --mu")
            result = dirac_distance(args.mu, r, s)
        if args.base_given:
            result = result.to(args.base)
    elif kind == "poisson":
        if args.lam is None or args.lam1 is None or args.lam2 is None:
            parser.error("--reference poisson needs --lambda, --lambda1, --lambda2")
        result = poisson_distance(args.lam, args.lam1, args.lam2)
        if args.base_given:
            result = result.to(args.base)
    else:  # pragma: no cover - argparse choices guard this
        parser.error(f"unknown reference {kind!r}")

    doc = serialize.distance_doc(result)
    doc = {"kind": doc.pop("kind"), "config": config, **doc}
    infinite = math.isinf(result.value)
    lines = [
        f"reference: {result.reference}",
        f"distance ({result.unit}): {_value_text(result.value)}",
        f"signed inner sum: {_value_text(result.signed_inner)}",
    ]
    if result.offending_state is not None:
        lines.append(f"offending state: {result.offending_state}")
    return RunOutput(doc=doc, table=_table(config, lines), infinite=infinite)


def _cmd_graphdist(args, parser, config: dict) -> RunOutput:
    if not args.input or not args.input2:
        parser.error("graphdist needs --input and --input2")
    schema = _parse_schema_arg(args.schema) if args.schema else None
    threshold = args.threshold if args.threshold is not None else 0.0
    config["threshold"] = threshold

    p = _load_joint(args.input, schema, args.delimiter)
    q = _load_joint(args.input2, schema, args.delimiter)
    g_r = chowliu_tree(mi_weighted_graph(p, threshold))
    g_s = chowliu_tree(mi_weighted_graph(q, threshold))
    d_r = graph_distribution(g_r, p)
    d_s = graph_distribution(g_s, q)
    report = dual_path_report(g_r, g_s, d_r, d_s)

    doc = serialize.dual_path_doc(report)
    doc = {"kind": doc.pop("kind"), "config": config, **doc}
    doc["graph_r"] = serialize.graph_doc(g_r)
    doc["graph_s"] = serialize.graph_doc(g_s)
    lines = [
        f"weight-route distance (bits): {_fmt(report.mi_distance)}",
        f"direct-route distance (bits): {_fmt(report.direct_distance)}",
        f"gap: {_fmt(report.gap)}",
        "",
        f"{'pair':>6}  {'weight R':>16}  {'weight S':>16}  {'contribution':>16}",
    ]
    for i, j, wr, ws, c in report.contributions:
        lines.append(f"{f'{i}-{j}':>6}  {_fmt(wr):>16}  {_fmt(ws):>16}  {_fmt(c):>16}")

    if args.plot_dir:
        from .figures import render_contributions

        render_contributions(report, args.plot_dir, stem="graphdist")
    return RunOutput(doc=doc, table=_table(config, lines))


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="infodist",
        description="Information measures, divergence expansions and distances "
        "over discrete joint distributions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, needs_input: bool = True):
        p.add_argument("--input", required=needs_input, help="sample file or distribution document")
        p.add_argument("--input2", help="second sample file or distribution document")
        p.add_argument("--schema", help="explicit schema, e.g. 'X:2,Y:2,Z:2'")
        p.add_argument("--base", choices=("bits", "nats"), default="bits", help="log base for values")
        p.add_argument("--tab", action="store_true", help="input files are tab-delimited")
        p.add_argument("--format", choices=("table", "doc"), default="table", dest="out_format")
        p.add_argument("--seed", type=int, default=0, help="seed echoed for sampled searches")
        p.add_argument("--plot-dir", help="directory for rendered figures and their tables")

    p_measures = sub.add_parser("measures", help="entropies, interactions, multi-information")
    common(p_measures)
    p_measures.add_argument("--max-subset", type=int, help="largest subset size to report")

    p_expand = sub.add_parser("expand", help="degree-ordered divergence expansion")
    common(p_expand)
    p_expand.add_argument("-m", "--m", dest="m", type=int, help="compare against this truncation order")

    p_approx = sub.add_parser("approx", help="truncation approximation and convergence")
    common(p_approx)
    p_approx.add_argument("-m", "--m", dest="m", type=int, help="truncation order")

    p_dist = sub.add_parser("dist", help="reference-function distance")
    common(p_dist, needs_input=False)
    p_dist.add_argument(
        "--reference",
        required=True,
        choices=("empirical", "uniform", "gaussian", "dirac", "poisson"),
    )
    p_dist.add_argument("--ref-input", help="reference distribution file (empirical)")
    p_dist.add_argument("--mu", type=float, help="reference mean")
    p_dist.add_argument("--sigma", type=float, help="reference standard deviation")
    p_dist.add_argument("--lambda", dest="lam", type=float, help="reference rate")
    p_dist.add_argument("--mu1", type=float)
    p_dist.add_argument("--sigma1", type=float)
    p_dist.add_argument("--mu2", type=float)
    p_dist.add_argument("--sigma2", type=float)
    p_dist.add_argument("--lambda1", dest="lam1", type=float)
    p_dist.add_argument("--lambda2", dest="lam2", type=float)

    p_graph = sub.add_parser("graphdist", help="dual-route distance between MI graphs")
    common(p_graph)
    p_graph.add_argument("--threshold", type=float, help="minimum MI for an edge (bits)")

    return parser


def _resolved_config(args) -> dict:
    config = {"command": args.command}
    for key in ("input", "input2", "ref_input", "schema"):
        val = getattr(args, key, None)
        if val is not None:
            config[key] = val
    config["base"] = args.base
    config["format"] = args.out_format
    config["seed"] = args.seed
    for key in ("m", "mu", "sigma", "lam", "mu1", "sigma1", "mu2", "sigma2", "lam1", "lam2"):
        val = getattr(args, key, None)
        if val is not None:
            config[key] = val
    if getattr(args, "reference", None):
        config["reference"] = args.reference
    if getattr(args, "plot_dir", None):
        config["plot_dir"] = args.plot_dir
    if getattr(args, "tab", False):
        config["delimiter"] = "tab"
    return config


def main(argv: list[str] | None = None) -> int:
    effective = list(sys.argv[1:]) if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(effective)
    args.delimiter = "\t" if args.tab else ","
    args.base_given = any(a == "--base" or a.startswith("--base=") for a in effective)
    if getattr(args, "max_subset", None) is not None and args.max_subset < 1:
        parser.error("--max-subset must be at least 1")
    config = _resolved_config(args)

    try:
        if args.command == "measures":
            out = _cmd_measures(args, config)
        elif args.command == "expand":
            out = _cmd_expand(args, parser, config)
        elif args.command == "approx":
            out = _cmd_approx(args, parser, config)
        elif args.command == "dist":
            out = _cmd_dist(args, parser, config)
        else:
            out = _cmd_graphdist(args, parser, config)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except InfodistError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3

    if args.out_format == "doc":
        sys.stdout.write(serialize.emit_document(out.doc))
    else:
        sys.stdout.write(out.table)
    return 5 if out.infinite else 0


if __name__ == "__main__":
    sys.exit(main())
