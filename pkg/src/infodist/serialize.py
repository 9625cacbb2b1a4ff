"""Structured text documents and delimited tables for every report type.

Writers are byte-deterministic: field order is fixed, floats are emitted at
17 significant digits in documents (exact round trip) and 13 in delimited
tables.  Infinite values appear as the explicit token "infinite" together
with the offending state, never as a float sentinel.
"""

from __future__ import annotations

import io
import json
import math
from typing import Any, Sequence

from .distribution import JointDistribution, Schema
from .errors import ParseError
from .expansion import ExpansionReport, TruncationDivergence, TruncationFamily
from .graphs import DualPathReport, WeightedGraph
from .lattice import InfoProfile, OmegaDecomposition, indices_of
from .metrics import DistanceResult

DOC_FLOAT = ".16e"  # 17 significant digits: exact binary round trip
TABLE_FLOAT = ".12e"  # 13 significant digits for plot-ready tables


def _emit(value: Any, indent: int) -> str:
    pad = "  " * indent
    if isinstance(value, dict):
        if not value:
            return "{}"
        rows = [f'{pad}  {json.dumps(str(k))}: {_emit(v, indent + 1)}' for k, v in value.items()]
        return "{\n" + ",\n".join(rows) + "\n" + pad + "}"
    if isinstance(value, (list, tuple)):
        if all(not isinstance(v, (dict, list, tuple)) for v in value):
            return "[" + ", ".join(_emit(v, indent) for v in value) + "]"
        rows = [f"{pad}  {_emit(v, indent + 1)}" for v in value]
        return "[\n" + ",\n".join(rows) + "\n" + pad + "]"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError("non-finite floats must be tokenized by the document builder")
        return format(value, DOC_FLOAT)
    if value is None:
        return "null"
    if isinstance(value, str):
        return json.dumps(value)
    raise TypeError(f"cannot serialize {type(value).__name__}")


def emit_document(doc: dict) -> str:
    """Render a document dict as deterministic JSON text (trailing newline)."""
    return _emit(doc, 0) + "\n"


def parse_document(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not a valid structured document: {exc}") from None
    if not isinstance(doc, dict):
        raise ParseError("structured document must be an object at top level")
    return doc


def _value_token(x: float) -> float | str:
    return "infinite" if math.isinf(x) else float(x)


# ---------------------------------------------------------------------------
# distributions
# ---------------------------------------------------------------------------


def distribution_doc(dist: JointDistribution) -> dict:
    return {
        "kind": "distribution",
        "schema": [{"name": n, "cardinality": c} for n, c in dist.schema.variables],
        "probs": [float(p) for p in dist.probs],
    }


def read_distribution(text: str) -> JointDistribution:
    doc = parse_document(text)
    if doc.get("kind") != "distribution":
        raise ParseError(f"expected a distribution document, got kind={doc.get('kind')!r}")
    try:
        schema = Schema(tuple((v["name"], int(v["cardinality"])) for v in doc["schema"]))
        probs = [float(p) for p in doc["probs"]]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed distribution document: {exc}") from None
    return JointDistribution(schema, probs)


# ---------------------------------------------------------------------------
# lattice profiles
# ---------------------------------------------------------------------------


def profile_doc(profile: InfoProfile, omega: OmegaDecomposition | None = None) -> dict:
    subsets = [
        {"subset": list(indices_of(mask)), "value": float(val)}
        for mask, val in sorted(profile.values.items())
    ]
    doc = {
        "kind": "info_profile",
        "profile": profile.kind,
        "units": profile.units,
        "n_variables": profile.n_variables,
        "subsets": subsets,
    }
    if omega is not None:
        doc["multi_information"] = float(omega.omega)
        doc["size_sums"] = {str(k): float(v) for k, v in sorted(omega.size_sums.items())}
        doc["alternating_recombination"] = float(omega.recombined)
    return doc


def profile_table(profile: InfoProfile) -> str:
    out = io.StringIO()
    out.write("subset,size,value\n")
    for mask, val in sorted(profile.values.items()):
        idxs = indices_of(mask)
        out.write(f"{'|'.join(map(str, idxs))},{len(idxs)},{format(val, TABLE_FLOAT)}\n")
    return out.getvalue()


# ---------------------------------------------------------------------------
# expansion and truncation
# ---------------------------------------------------------------------------


def expansion_doc(report: ExpansionReport) -> dict:
    doc = {
        "kind": "expansion_report",
        "units": report.units,
        "n_variables": report.n_variables,
        "degree_terms": [float(t) for t in report.degree_terms],
        "cumulative_a": [float(a) for a in report.cumulative_a],
        "true_entropy": float(report.true_entropy),
        "divergence": _value_token(report.divergence),
    }
    if report.infinite:
        doc["offending_state"] = list(report.offending_state)
    return doc


def expansion_table(report: ExpansionReport) -> str:
    out = io.StringIO()
    out.write("degree,term,cumulative\n")
    for m, (term, cum) in enumerate(zip(report.degree_terms, report.cumulative_a), start=1):
        out.write(f"{m},{format(term, TABLE_FLOAT)},{format(cum, TABLE_FLOAT)}\n")
    return out.getvalue()


def truncation_doc(
    family: TruncationFamily,
    result: TruncationDivergence,
    units: str,
    convergence: Sequence[tuple[int, float]] | None = None,
) -> dict:
    doc = {
        "kind": "truncation_report",
        "units": units,
        "order": family.order,
        "coefficients": {str(k): int(c) for k, c in sorted(family.coefficients.items())},
        "raw_z": float(family.raw_z),
        "divergence": _value_token(result.divergence),
        "surrogate": float(result.surrogate),
        "approximation": distribution_doc(family.approximation),
    }
    if convergence is not None:
        doc["convergence"] = [
            {"order": int(m), "divergence": _value_token(d)} for m, d in convergence
        ]
    return doc


def convergence_table(profile: Sequence[tuple[int, float]]) -> str:
    out = io.StringIO()
    out.write("order,divergence\n")
    for m, d in profile:
        out.write(f"{m},{format(d, TABLE_FLOAT)}\n")
    return out.getvalue()


# ---------------------------------------------------------------------------
# distances
# ---------------------------------------------------------------------------


def distance_doc(result: DistanceResult) -> dict:
    doc = {
        "kind": "distance",
        "value": _value_token(result.value),
        "signed_inner": _value_token(result.signed_inner),
        "unit": result.unit,
        "reference": result.reference,
    }
    if result.offending_state is not None:
        doc["offending_state"] = list(result.offending_state)
    return doc


# ---------------------------------------------------------------------------
# graphs
# ---------------------------------------------------------------------------


def graph_doc(graph: WeightedGraph) -> dict:
    doc = {
        "kind": "graph",
        "nodes": [{"name": n, "cardinality": c} for n, c in graph.schema.variables],
        "edges": [[int(i), int(j), float(w)] for i, j, w in graph.edges],
    }
    if graph.parent is not None:
        names = graph.schema.names
        doc["parents"] = {names[c]: names[p] for c, p in sorted(graph.parent.items())}
    return doc


def read_graph(text: str) -> WeightedGraph:
    doc = parse_document(text)
    if doc.get("kind") != "graph":
        raise ParseError(f"expected a graph document, got kind={doc.get('kind')!r}")
    try:
        schema = Schema(tuple((v["name"], int(v["cardinality"])) for v in doc["nodes"]))
        edges = tuple((int(i), int(j), float(w)) for i, j, w in doc["edges"])
        parent = None
        if "parents" in doc:
            pos = {name: k for k, name in enumerate(schema.names)}
            parent = {pos[c]: pos[p] for c, p in doc["parents"].items()}
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed graph document: {exc}") from None
    return WeightedGraph(schema=schema, edges=edges, parent=parent)


def dual_path_doc(report: DualPathReport, units: str = "bits") -> dict:
    return {
        "kind": "graph_distance",
        "units": units,
        "weight_route": float(report.mi_distance),
        "direct_route": float(report.direct_distance),
        "gap": float(report.gap),
        "edges": [
            {
                "pair": [int(i), int(j)],
                "weight_r": float(wr),
                "weight_s": float(ws),
                "contribution": float(c),
            }
            for i, j, wr, ws, c in report.contributions
        ],
    }


def contributions_table(report: DualPathReport) -> str:
    out = io.StringIO()
    out.write("i,j,weight_r,weight_s,contribution\n")
    for i, j, wr, ws, c in report.contributions:
        out.write(
            f"{i},{j},{format(wr, TABLE_FLOAT)},{format(ws, TABLE_FLOAT)},"
            f"{format(c, TABLE_FLOAT)}\n"
        )
    return out.getvalue()
