"""Expression parsing and Pearson correlation matrices.

The correlation matrix is the problem instance handed to the ant colony
solver: genes are nodes and pairwise coefficients are edge weights.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    DegenerateSeries,
    DuplicateGene,
    InvariantViolation,
    LengthMismatch,
    NotSquare,
    ParseError,
    RaggedRows,
)

__all__ = [
    "ExpressionMatrix",
    "CorrelationMatrix",
    "pearson_correlation",
    "build_correlation_matrix",
    "parse_expression_file",
    "parse_correlation_file",
    "format_correlation_file",
]

# Accepted asymmetry when a file gives both triangles.
_SYMMETRY_TOL = 1e-9


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.float64, copy=True)
    a.setflags(write=False)
    return a


def _check_unique(names: Sequence[str]) -> None:
    seen = set()
    for name in names:
        if name in seen:
            raise DuplicateGene(name)
        seen.add(name)


@dataclass(frozen=True, eq=False)
class ExpressionMatrix:
    """Genes by samples grid of expression levels."""

    gene_names: tuple[str, ...]
    values: np.ndarray
    sample_labels: tuple[str, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "gene_names", tuple(self.gene_names))
        object.__setattr__(self, "values", _frozen(self.values))
        if self.sample_labels is not None:
            object.__setattr__(self, "sample_labels", tuple(self.sample_labels))
        self.validate()

    def validate(self) -> None:
        v = self.values
        if v.ndim != 2:
            raise InvariantViolation("expression values must be a 2-D grid")
        if len(self.gene_names) != v.shape[0]:
            raise InvariantViolation(
                f"{len(self.gene_names)} gene names for {v.shape[0]} rows")
        _check_unique(self.gene_names)
        if v.shape[1] < 2:
            raise DegenerateSeries(
                f"need at least 2 samples per gene, got {v.shape[1]}")
        if not np.all(np.isfinite(v)):
            raise InvariantViolation("expression values must all be finite")
        if self.sample_labels is not None and len(self.sample_labels) != v.shape[1]:
            raise InvariantViolation(
                f"{len(self.sample_labels)} sample labels for {v.shape[1]} columns")

    @property
    def n_genes(self) -> int:
        return self.values.shape[0]

    @property
    def n_samples(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True, eq=False)
class CorrelationMatrix:
    """Symmetric gene-by-gene Pearson coefficients with a unit diagonal."""

    gene_names: tuple[str, ...]
    coefficients: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "gene_names", tuple(self.gene_names))
        object.__setattr__(self, "coefficients", _frozen(self.coefficients))
        self.validate()

    def validate(self) -> None:
        c = self.coefficients
        n = len(self.gene_names)
        if c.ndim != 2 or c.shape[0] != c.shape[1]:
            raise NotSquare(f"coefficient grid has shape {c.shape}")
        if c.shape[0] != n:
            raise InvariantViolation(f"{n} gene names for a {c.shape[0]}x{c.shape[0]} matrix")
        _check_unique(self.gene_names)
        if not np.all(np.isfinite(c)):
            raise InvariantViolation("correlations must be finite")
        if not np.array_equal(c, c.T):
            raise InvariantViolation("correlation matrix is not symmetric")
        if not np.all(np.diag(c) == 1.0):
            raise InvariantViolation("correlation matrix diagonal must be 1")
        bad = np.argwhere((c < -1.0) | (c > 1.0))
        if bad.size:
            i, j = bad[0]
            raise InvariantViolation(
                f"correlation {c[i, j]!r} between {self.gene_names[i]!r} and "
                f"{self.gene_names[j]!r} lies outside [-1, 1]")

    @property
    def n(self) -> int:
        return len(self.gene_names)

    def index(self, gene: str) -> int:
        return self.gene_names.index(gene)

    def __getitem__(self, pair: tuple[str, str]) -> float:
        a, b = pair
        return float(self.coefficients[self.index(a), self.index(b)])


def pearson_correlation(x: Sequence[float], y: Sequence[float]) -> float:
    """Sample Pearson coefficient of two equal-length series.

    Raises LengthMismatch for unequal lengths and DegenerateSeries when a
    series is shorter than 2 or constant.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise LengthMismatch(f"series lengths differ: {x.size} vs {y.size}")
    if x.size < 2:
        raise DegenerateSeries("Pearson correlation needs at least 2 samples")
    if np.all(x == x[0]) or np.all(y == y[0]):
        raise DegenerateSeries("series has zero variance")
    dx = x - x.mean()
    dy = y - y.mean()
    r = float(np.dot(dx, dy) / math.sqrt(float(np.dot(dx, dx)) * float(np.dot(dy, dy))))
    return min(1.0, max(-1.0, r))


def build_correlation_matrix(expr: ExpressionMatrix) -> CorrelationMatrix:
    """Pairwise Pearson matrix of the expression rows.

    Each unordered pair is computed once and mirrored, and the diagonal is
    set to exactly 1.
    """
    v = expr.values
    for name, row in zip(expr.gene_names, v):
        if np.all(row == row[0]):
            raise DegenerateSeries(f"gene {name!r} has zero variance", gene=name)
    centered = v - v.mean(axis=1, keepdims=True)
    norms = np.sqrt(np.einsum("ij,ij->i", centered, centered))
    n = v.shape[0]
    coeffs = np.eye(n)
    for i in range(n):
        for j in range(i + 1, n):
            r = float(np.dot(centered[i], centered[j]) / (norms[i] * norms[j]))
            r = min(1.0, max(-1.0, r))
            coeffs[i, j] = coeffs[j, i] = r
    return CorrelationMatrix(expr.gene_names, coeffs)


def _decode(raw) -> str:
    if isinstance(raw, str):
        return raw
    if hasattr(raw, "read"):
        raw = raw.read()
        if isinstance(raw, str):
            return raw
    try:
        return bytes(raw).decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise ParseError(f"input is not valid UTF-8 ({exc.reason})") from None


def _sniff_delimiter(header_line: str, delimiter: str | None) -> str:
    if delimiter is not None:
        return delimiter
    return "\t" if "\t" in header_line else ","


def _rows(text: str, delimiter: str | None):
    """Yield (line_number, fields) for non-blank, non-comment lines."""
    lines = text.splitlines()
    first = next((ln for ln in lines if ln.strip() and not ln.startswith("#")), None)
    if first is None:
        raise ParseError("input is empty")
    delim = _sniff_delimiter(first, delimiter)
    reader = csv.reader(io.StringIO("\n".join(lines)), delimiter=delim)
    for lineno, fields in enumerate(reader, start=1):
        if not fields or all(not f.strip() for f in fields):
            continue
        if fields[0].startswith("#"):
            continue
        yield lineno, [f.strip() for f in fields]


def _parse_float(cell: str, line: int, column: int) -> float:
    try:
        value = float(cell)
    except ValueError:
        raise ParseError(f"non-numeric value {cell!r}", line, column) from None
    if not math.isfinite(value):
        raise ParseError(f"non-finite value {cell!r}", line, column)
    return value


def parse_expression_file(raw, delimiter: str | None = None) -> ExpressionMatrix:
    """Parse a delimited expression table.

    The header row is ``gene`` followed by sample labels; every other row
    is a gene name followed by one numeric value per sample. Tab versus
    comma is detected from the header unless ``delimiter`` is given.
    """
    rows = _rows(_decode(raw), delimiter)
    try:
        header_line, header = next(rows)
    except StopIteration:
        raise ParseError("input is empty") from None
    labels = header[1:]
    if not labels:
        raise ParseError("header has no sample columns", header_line)
    names: list[str] = []
    values: list[list[float]] = []
    seen: dict[str, int] = {}
    for lineno, fields in rows:
        name = fields[0]
        if not name:
            raise ParseError("missing gene name", lineno, 1)
        if len(fields) != len(header):
            raise RaggedRows(
                f"gene {name!r} has {len(fields) - 1} values, expected {len(labels)}",
                lineno)
        if name in seen:
            raise DuplicateGene(name, lineno)
        seen[name] = lineno
        names.append(name)
        values.append([_parse_float(c, lineno, k + 2) for k, c in enumerate(fields[1:])])
    if not names:
        raise ParseError("no gene rows after the header", header_line)
    return ExpressionMatrix(tuple(names), np.array(values), tuple(labels))


def parse_correlation_file(raw, delimiter: str | None = None) -> CorrelationMatrix:
    """Parse a labelled square matrix, full or lower-triangular.

    Empty upper-triangle cells (or rows that stop after the diagonal) are
    mirrored from the lower triangle.
    """
    rows = _rows(_decode(raw), delimiter)
    try:
        header_line, header = next(rows)
    except StopIteration:
        raise ParseError("input is empty") from None
    genes = header[1:]
    while genes and not genes[-1]:
        genes.pop()
    n = len(genes)
    if n == 0:
        raise ParseError("header lists no genes", header_line)
    if any(not g for g in genes):
        raise ParseError("empty gene name in header", header_line)
    _check_unique(genes)
    grid = np.full((n, n), np.nan)
    row_names = []
    for lineno, fields in rows:
        if len(row_names) == n:
            raise NotSquare(f"more than {n} data rows (line {lineno})")
        name = fields[0]
        i = len(row_names)
        if name != genes[i]:
            raise ParseError(
                f"row label {name!r} does not match column label {genes[i]!r}", lineno, 1)
        cells = fields[1:]
        while len(cells) > n and not cells[-1]:
            cells.pop()
        if len(cells) > n:
            raise RaggedRows(f"row {name!r} has {len(cells)} values for {n} genes", lineno)
        for j, cell in enumerate(cells):
            if cell:
                grid[i, j] = _parse_float(cell, lineno, j + 2)
        row_names.append(name)
    if len(row_names) != n:
        raise NotSquare(f"{n} gene columns but {len(row_names)} rows")

    for i in range(n):
        for j in range(n):
            if math.isnan(grid[i, j]):
                if j > i and not math.isnan(grid[j, i]):
                    grid[i, j] = grid[j, i]
                else:
                    raise ParseError(
                        f"missing value for ({genes[i]!r}, {genes[j]!r})")
    for i in range(n):
        for j in range(i + 1, n):
            if abs(grid[i, j] - grid[j, i]) > _SYMMETRY_TOL:
                raise InvariantViolation(
                    f"asymmetric entries for ({genes[i]!r}, {genes[j]!r}): "
                    f"{grid[j, i]!r} vs {grid[i, j]!r}")
            grid[i, j] = grid[j, i]
    return CorrelationMatrix(tuple(genes), grid)


def format_correlation_file(corr: CorrelationMatrix, delimiter: str = "\t",
                            lower_triangle: bool = False) -> str:
    """Render a matrix in the format read by :func:`parse_correlation_file`."""
    out = io.StringIO()
    writer = csv.writer(out, delimiter=delimiter, lineterminator="\n")
    writer.writerow(["gene", *corr.gene_names])
    c = corr.coefficients
    for i, name in enumerate(corr.gene_names):
        stop = i + 1 if lower_triangle else corr.n
        cells = []
        for j in range(stop):
            v = float(c[i, j])
            cells.append("1" if v == 1.0 and i == j else repr(v))
        writer.writerow([name, *cells])
    return out.getvalue()
