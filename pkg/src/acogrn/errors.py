"""Exception hierarchy shared by the parsers, solver and evaluator."""


class AcoGrnError(Exception):
    """Base class for every error raised by this package."""


class InputError(AcoGrnError, ValueError):
    """Bad user input: malformed files or invalid values. CLI exit code 2."""


class ParseError(InputError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class RaggedRows(ParseError):
    pass


class DuplicateGene(InputError):
    def __init__(self, gene, line=None):
        self.gene = gene
        suffix = f" (line {line})" if line is not None else ""
        super().__init__(f"duplicate gene name {gene!r}{suffix}")


class NotSquare(InputError):
    pass


class InvariantViolation(InputError):
    pass


class LengthMismatch(InputError):
    pass


class DegenerateSeries(InputError):
    def __init__(self, message, gene=None):
        self.gene = gene
        super().__init__(message)


class InvalidParameter(InputError):
    pass


class SelfLoop(InputError):
    pass


class DuplicateEdge(InputError):
    pass


class UnknownGene(InputError):
    pass


class EmptyAllowedSet(AcoGrnError):
    pass


class ZeroMass(AcoGrnError):
    """Every transition weight underflowed to zero."""


class TooFewGenes(AcoGrnError):
    """A Hamiltonian circuit needs at least three genes. CLI exit code 3."""


class OutOfRange(AcoGrnError, ValueError):
    pass
