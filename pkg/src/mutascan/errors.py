"""Exception hierarchy shared by every mutascan module."""


class MutascanError(Exception):
    """Base class for domain errors (CLI exit code 1)."""


# sequence ingestion

class ParseError(MutascanError, ValueError):
    """Text could not be read as FASTA."""


class EmptyInput(ParseError):
    pass


class MalformedHeader(ParseError):
    pass


class IllegalResidue(ParseError):
    def __init__(self, char: str, line: int):
        super().__init__(f"illegal residue {char!r} on line {line}")
        self.char = char
        self.line = line


class EmptyRecord(ParseError):
    pass


class TransportError(MutascanError):
    """Connection failure or timeout while fetching a sequence."""


class RemoteError(MutascanError):
    """The remote endpoint answered with a non-success status."""

    def __init__(self, status: int, url: str):
        super().__init__(f"HTTP {status} from {url}")
        self.status = status
        self.url = url


# alignment / translation

class AlphabetMismatch(MutascanError, ValueError):
    pass


class KTooLarge(MutascanError, ValueError):
    pass


class NotDNA(MutascanError, ValueError):
    pass


class EmptyFrame(MutascanError, ValueError):
    pass


class NoORF(MutascanError, ValueError):
    pass


# catalog

class CatalogError(MutascanError, ValueError):
    pass


class DuplicateEntry(CatalogError):
    pass


class MalformedLine(CatalogError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line


class UnknownGene(CatalogError):
    pass


class PositionOutOfRange(CatalogError):
    pass


class InsufficientSpace(CatalogError):
    pass


# network

class BadShape(MutascanError, ValueError):
    pass


class ShapeMismatch(MutascanError, ValueError):
    pass


class NonFiniteLoss(MutascanError, ArithmeticError):
    pass


class ModelFileError(MutascanError):
    pass


class VersionMismatch(ModelFileError):
    pass


class CorruptModel(ModelFileError):
    pass


class ModelShapeMismatch(MutascanError, ValueError):
    pass
