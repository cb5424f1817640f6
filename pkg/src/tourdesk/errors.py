"""Exception types shared across the package."""


class TourdeskError(Exception):
    """Base class for all package errors."""


class LoadError(TourdeskError):
    """A data file could not be parsed or violated its schema."""


class InvalidInputError(TourdeskError):
    """An operation received arguments outside its preconditions."""


class TokenizationError(TourdeskError):
    """A segmenter adapter failed; carries the adapter diagnostics."""

    def __init__(self, message: str, diagnostics: object = None):
        super().__init__(message)
        self.diagnostics = diagnostics


class EmptyUtteranceError(TourdeskError):
    """Similarity was requested for an utterance with no usable tokens."""


class DegenerateMeanError(TourdeskError):
    """The mean word vector of a sentence has zero norm."""


class SolverError(TourdeskError):
    """The transport solver failed to reach an optimal solution."""


class TemplateError(TourdeskError):
    """No answer template is registered for the requested category."""


class ConfigurationError(TourdeskError):
    """Service or provider configuration is missing or inconsistent."""


class ProviderError(TourdeskError):
    """The places provider failed; carries the HTTP status when known."""

    def __init__(self, message: str, status: int | None = None):
        super().__init__(message)
        self.status = status


class UnknownAttractionError(TourdeskError):
    """A referenced attraction id is not in the dataset."""


class InvalidSessionError(TourdeskError):
    """A session could not be created from the given spots."""


class SessionClosedError(TourdeskError):
    """advance() was called on a session that is already closed."""


class ValidationError(TourdeskError):
    """A questionnaire or request payload failed validation."""
