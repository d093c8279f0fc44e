"""JSON, edge-list and DOT renderings of solver output."""

from __future__ import annotations

import json
from typing import Sequence

from .aco import AcoResult, ObjectiveMode, order_to_edges, tour_to_edges
from .correlation import CorrelationMatrix, _decode
from .errors import InputError, ParseError, UnknownGene
from .oracle import OracleResult


def _edge_records(pairs, corr: CorrelationMatrix):
    return [{"gene1": a, "gene2": b, "correlation": corr[a, b]} for a, b in pairs]


def result_to_dict(result: AcoResult, corr: CorrelationMatrix) -> dict:
    tour = result.best_tour
    return {
        "gene_order": [result.gene_names[i] for i in tour.order],
        "edges": _edge_records(tour_to_edges(result), corr),
        "score": tour.score,
        "objective": result.params_used.objective_mode.value,
        "score_history": [[i, s] for i, s in result.score_history],
        "params": result.params_used.to_dict(),
        "seed": result.params_used.seed,
    }


def oracle_to_dict(result: OracleResult, corr: CorrelationMatrix,
                   mode: ObjectiveMode | str = ObjectiveMode.RAW) -> dict:
    names = corr.gene_names
    return {
        "gene_order": [names[i] for i in result.best_order],
        "edges": _edge_records(order_to_edges(result.best_order, names), corr),
        "score": result.best_score,
        "objective": ObjectiveMode(mode).value,
        "score_history": [],
        "params": {"objective_mode": ObjectiveMode(mode).value},
        "seed": None,
        "n_cycles_examined": result.n_cycles_examined,
        "all_optima": [[names[i] for i in o] for o in result.all_optima],
    }


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def format_edge_list(pairs: Sequence[tuple[str, str]], corr: CorrelationMatrix) -> str:
    return "".join(f"{a}\t{b}\t{corr[a, b]!r}\n" for a, b in pairs)


def parse_edge_list(raw) -> list[tuple[str, str, float | None]]:
    """Read ``gene1 gene2 [correlation]`` lines (tab, comma or space separated)."""
    out = []
    for lineno, line in enumerate(_decode(raw).splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "\t" in line:
            fields = [f.strip() for f in line.split("\t")]
        elif "," in line:
            fields = [f.strip() for f in line.split(",")]
        else:
            fields = line.split()
        if len(fields) < 2 or not fields[0] or not fields[1]:
            raise ParseError("expected at least two gene names", lineno)
        if not out and fields[0].casefold() in ("gene1", "gene 1", "source"):
            continue
        weight = None
        if len(fields) > 2 and fields[2]:
            try:
                weight = float(fields[2])
            except ValueError:
                raise ParseError(f"non-numeric correlation {fields[2]!r}", lineno, 3) from None
        out.append((fields[0], fields[1], weight))
    return out


def _quote(name: str) -> str:
    return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(edges: Sequence[tuple[str, str, float | None]],
           corr: CorrelationMatrix | None = None, name: str = "interactions") -> str:
    """Undirected DOT graph, edges labelled with correlations to 4 places.

    Labels come from ``corr`` when given (and every gene must belong to it),
    otherwise from the third column of ``edges``.
    """
    if not edges:
        raise InputError("edge list is empty")
    labelled = []
    for a, b, w in edges:
        if corr is not None:
            for g in (a, b):
                if g not in corr.gene_names:
                    raise UnknownGene(f"gene {g!r} is not in the correlation matrix")
            w = corr[a, b]
        if w is None:
            raise InputError(f"no correlation for edge ({a!r}, {b!r}); supply a matrix")
        labelled.append((a, b, w))
    nodes = list(dict.fromkeys(g for a, b, _ in labelled for g in (a, b)))
    lines = [f"graph {_quote(name)} {{"]
    lines += [f"  {_quote(g)};" for g in nodes]
    lines += [f'  {_quote(a)} -- {_quote(b)} [label="{w:.4f}"];' for a, b, w in labelled]
    lines.append("}")
    return "\n".join(lines) + "\n"
