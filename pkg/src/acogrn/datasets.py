"""Embedded benchmark fixtures: the SOS correlation table and published tours.

The SOS case carries its 8x8 correlation matrix. The IRMA cases carry only
the published tours, since no IRMA correlations are available without the
raw time courses; they support evaluation replay, or full inference from a
user-supplied expression file.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass
from importlib import resources

from .correlation import CorrelationMatrix, parse_correlation_file

SOS_TOUR_SCORE = 5.0476


class BenchmarkName(str, enum.Enum):
    SOS = "sos"
    IRMA_ON = "irma_on"
    IRMA_OFF = "irma_off"

    @classmethod
    def parse(cls, name: "str | BenchmarkName") -> "BenchmarkName":
        if isinstance(name, cls):
            return name
        return cls(str(name).replace("-", "_").lower())


@dataclass(frozen=True)
class BenchmarkCase:
    name: BenchmarkName
    gene_names: tuple[str, ...]
    correlation: CorrelationMatrix | None
    published_tour: tuple[str, ...]
    published_yes_edges: frozenset
    gold_file_path: str
    expected_matches: int

    def published_edges(self) -> list[tuple[str, str]]:
        t = self.published_tour
        return [(t[k], t[(k + 1) % len(t)]) for k in range(len(t))]


def data_path(filename: str) -> str:
    return os.fspath(resources.files(__package__).joinpath("data", filename))


def read_data(filename: str) -> bytes:
    return resources.files(__package__).joinpath("data", filename).read_bytes()


def _pairs(*pairs):
    return frozenset(frozenset(p) for p in pairs)


_IRMA_GENES = ("CBF1", "GAL4", "SWI5", "GAL80", "ASH1")

_CASES = {
    BenchmarkName.SOS: dict(
        published_tour=("uvrD", "uvrA", "lexA", "recA", "umuDC", "ruvA", "polB", "uvrY"),
        published_yes_edges=_pairs(("uvrA", "lexA"), ("lexA", "recA"), ("recA", "umuDC")),
        gold="sos_gold.tsv",
        expected_matches=3,
    ),
    BenchmarkName.IRMA_ON: dict(
        published_tour=("GAL80", "GAL4", "CBF1", "SWI5", "ASH1"),
        published_yes_edges=_pairs(("GAL80", "GAL4"), ("GAL4", "CBF1"), ("CBF1", "SWI5")),
        gold="irma_gold.tsv",
        expected_matches=3,
    ),
    BenchmarkName.IRMA_OFF: dict(
        published_tour=("GAL4", "GAL80", "ASH1", "CBF1", "SWI5"),
        published_yes_edges=_pairs(("GAL4", "GAL80"), ("ASH1", "CBF1"), ("CBF1", "SWI5")),
        gold="irma_gold.tsv",
        expected_matches=3,
    ),
}


def sos_correlation() -> CorrelationMatrix:
    """The 8-gene SOS correlation matrix, values exactly as tabulated."""
    return parse_correlation_file(read_data("sos_correlation.tsv"))


def load_benchmark(name: "str | BenchmarkName") -> BenchmarkCase:
    name = BenchmarkName.parse(name)
    spec = _CASES[name]
    if name is BenchmarkName.SOS:
        corr = sos_correlation()
        genes = corr.gene_names
    else:
        corr = None
        genes = _IRMA_GENES
    return BenchmarkCase(
        name=name,
        gene_names=genes,
        correlation=corr,
        published_tour=spec["published_tour"],
        published_yes_edges=spec["published_yes_edges"],
        gold_file_path=data_path(spec["gold"]),
        expected_matches=spec["expected_matches"],
    )


def dump_fixtures(directory: str) -> list[str]:
    """Write every embedded fixture to ``directory``; return the paths written."""
    os.makedirs(directory, exist_ok=True)
    written = []
    for filename in ("sos_correlation.tsv", "sos_gold.tsv", "irma_gold.tsv"):
        path = os.path.join(directory, filename)
        with open(path, "wb") as fh:
            fh.write(read_data(filename))
        written.append(path)
    for name in BenchmarkName:
        case = load_benchmark(name)
        path = os.path.join(directory, f"{name.value}_published_edges.tsv")
        with open(path, "w", encoding="utf-8") as fh:
            for a, b in case.published_edges():
                fh.write(f"{a}\t{b}\n")
        written.append(path)
    return written
