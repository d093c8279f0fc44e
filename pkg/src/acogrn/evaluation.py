"""Scoring predicted interactions against a gold-standard network."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .correlation import _decode
from .errors import DuplicateEdge, InputError, ParseError, SelfLoop, UnknownGene

log = logging.getLogger(__name__)

_HEADERS = {
    ("gene1", "gene2"),
    ("gene 1", "gene 2"),
    ("source", "target"),
    ("regulator", "target"),
}


def _key(a: str, b: str, directed: bool):
    a, b = a.casefold(), b.casefold()
    return (a, b) if directed else frozenset((a, b))


@dataclass(frozen=True)
class GoldStandard:
    edges: tuple[tuple[str, str], ...]
    directed: bool = False
    source_label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple((str(a), str(b)) for a, b in self.edges))
        seen = set()
        for a, b in self.edges:
            if a.casefold() == b.casefold():
                raise SelfLoop(f"self-loop on gene {a!r}")
            k = _key(a, b, self.directed)
            if k in seen:
                raise DuplicateEdge(f"duplicate edge ({a!r}, {b!r})")
            seen.add(k)

    @property
    def genes(self) -> set[str]:
        return {g.casefold() for e in self.edges for g in e}


class MatchRow(NamedTuple):
    gene1: str
    gene2: str
    matched: bool


@dataclass(frozen=True)
class EvaluationReport:
    rows: tuple[MatchRow, ...]
    n_predicted: int
    n_gold: int
    n_matched: int
    precision: float
    recall: float

    def to_dict(self) -> dict:
        return {
            "rows": [{"gene1": r.gene1, "gene2": r.gene2, "matched": r.matched}
                     for r in self.rows],
            "n_predicted": self.n_predicted,
            "n_gold": self.n_gold,
            "n_matched": self.n_matched,
            "precision": self.precision,
            "recall": self.recall,
        }


def _split(line: str) -> list[str]:
    if "\t" in line:
        parts = line.split("\t")
    elif "," in line:
        parts = line.split(",")
    else:
        parts = line.split()
    return [p.strip() for p in parts]


def parse_gold_standard(raw, source_label: str = "") -> GoldStandard:
    """Read ``gene1<TAB>gene2`` lines.

    Blank lines and ``#`` comments are skipped, except a ``# directed``
    pragma which marks the network as directed. An optional header row
    (``gene1 gene2``, ``source target``) is recognised.
    """
    directed = False
    edges: list[tuple[str, str]] = []
    linenos: list[int] = []
    first_data = True
    lines = _decode(raw).splitlines()
    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            if stripped[1:].strip().casefold() == "directed":
                directed = True
            continue
        fields = _split(stripped)
        if first_data:
            first_data = False
            if tuple(f.casefold() for f in fields[:2]) in _HEADERS:
                continue
        if len(fields) < 2 or not fields[0] or not fields[1]:
            raise ParseError("expected two gene names", lineno)
        edges.append((fields[0], fields[1]))
        linenos.append(lineno)
    seen = set()
    for lineno, (a, b) in zip(linenos, edges):
        if a.casefold() == b.casefold():
            raise SelfLoop(f"line {lineno}: self-loop on gene {a!r}")
        k = _key(a, b, directed)
        if k in seen:
            raise DuplicateEdge(f"line {lineno}: duplicate edge ({a!r}, {b!r})")
        seen.add(k)
    return GoldStandard(tuple(edges), directed, source_label)


def match_edges(predicted: Sequence[tuple[str, str]], gold: GoldStandard,
                genes: Iterable[str] | None = None) -> EvaluationReport:
    """Mark each predicted pair that appears in the gold network.

    Names compare case-insensitively and, for undirected gold networks,
    without regard to order. Each gold edge can be matched only once.
    ``genes`` is the instance gene list; naming a gene outside it raises
    UnknownGene.
    """
    predicted = [(str(a), str(b)) for a, b in predicted]
    if not predicted:
        raise InputError("no predicted edges to evaluate")
    if genes is not None:
        known = {g.casefold() for g in genes}
        for a, b in predicted:
            for g in (a, b):
                if g.casefold() not in known:
                    raise UnknownGene(f"predicted gene {g!r} is not in the instance gene list")
    gold_genes = gold.genes
    missing = sorted({g for e in predicted for g in e if g.casefold() not in gold_genes})
    if missing:
        log.warning("genes absent from the gold standard: %s", ", ".join(missing))

    remaining = {_key(a, b, gold.directed) for a, b in gold.edges}
    rows = []
    for a, b in predicted:
        k = _key(a, b, gold.directed)
        hit = k in remaining
        if hit:
            remaining.discard(k)
        rows.append(MatchRow(a, b, hit))
    n_matched = sum(r.matched for r in rows)
    n_gold = len(gold.edges)
    return EvaluationReport(
        rows=tuple(rows),
        n_predicted=len(rows),
        n_gold=n_gold,
        n_matched=n_matched,
        precision=n_matched / len(rows),
        recall=n_matched / n_gold if n_gold else 0.0,
    )


def evaluation_report_render(report: EvaluationReport, format: str = "table") -> str:
    if format == "json":
        return json.dumps(report.to_dict(), indent=2) + "\n"
    if format != "table":
        raise ValueError(f"unknown report format {format!r}")
    header = ("Gene 1", "Gene 2", "Match with gold standard")
    body = [(r.gene1, r.gene2, "YES" if r.matched else "NO") for r in report.rows]
    w1 = max(len(header[0]), *(len(r[0]) for r in body))
    w2 = max(len(header[1]), *(len(r[1]) for r in body))
    lines = [f"{a:<{w1}}  {b:<{w2}}  {c}" for a, b, c in [header, *body]]
    lines.append(
        f"matched {report.n_matched} of {report.n_predicted} predicted "
        f"({report.n_gold} gold edges); precision {report.precision:.4f}, "
        f"recall {report.recall:.4f}")
    return "\n".join(lines) + "\n"
