"""Exception hierarchy.

Every failure that a caller might want to report (rather than crash on)
derives from :class:`Level3Error`; the CLI turns these into structured
failure reports.
"""


class Level3Error(Exception):
    """Base class for all errors raised by this package."""


class DomainError(Level3Error, ValueError):
    """An argument lies outside the domain of the operation."""


class PrecisionLossError(Level3Error):
    """The working precision is insufficient for a trustworthy result."""


class NoSolutionError(Level3Error):
    """A root isolation found no admissible root."""


class AmbiguityError(Level3Error):
    """A root isolation found more than one admissible root."""


class FormulaTranscriptionError(Level3Error):
    """A transcribed closed formula failed its numerical certification."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class TranscriptionAmbiguityError(FormulaTranscriptionError):
    """Two readings of a formula were tried and the intended one failed."""

    def __init__(self, message, candidates=None, residual=None):
        super().__init__(message, residual)
        self.candidates = candidates or {}


class InconsistentSeriesError(Level3Error):
    """A series record does not correspond to any admissible singular value."""


class NotAvailableError(Level3Error, KeyError):
    """A tabulated value was requested that is not in the catalog."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class InternalInconsistencyError(Level3Error):
    """A cross-check between two independent paths disagreed."""


class CatalogError(Level3Error):
    """Malformed or invalid catalog data."""


class SurdSyntaxError(CatalogError):
    """A surd expression does not follow the grammar."""
