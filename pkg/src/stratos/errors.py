"""Exception and warning classes raised across the package."""


class StratosError(Exception):
    """Base class for every error raised by stratos."""


class ModelReferenceError(StratosError):
    """A history, state, agent or cell id does not resolve."""


class SchemaError(StratosError):
    """A model file or in-memory value violates the model schema."""

    def __init__(self, message, pointer=""):
        super().__init__(f"{pointer}: {message}" if pointer else message)
        self.pointer = pointer


class PartitionViolationError(StratosError):
    """An ensemble is not a partition of the vertices, or a cell is not thin."""

    def __init__(self, message, vertex=None):
        super().__init__(message)
        self.vertex = vertex


class IllFormedEnsembleError(StratosError):
    """Choice-point structure differs across the states of one information set."""


class IncompleteChoiceError(StratosError):
    pass


class IncompleteStrategyError(StratosError):
    pass


class EnumerationLimitError(StratosError):
    """A strategy space is larger than the configured cap."""


class ConsistencyError(StratosError):
    """An agent's own plan state varies inside one of its information cells."""


class MissingIntentionError(StratosError):
    pass


class UndefinedConditionalError(StratosError):
    """Conditioning on a set of histories with zero prior mass."""


class RejectedMessageError(StratosError):
    """An assertion is inconsistent with the addressee's information."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class RejectedDirectiveError(RejectedMessageError):
    """No strategy in the plan state conforms to a directive."""


class FormulaSyntaxError(StratosError):
    def __init__(self, message, text, pos):
        self.text = text
        self.pos = pos
        self.column = pos + 1
        super().__init__(f"{message} at column {self.column}")


class ResolutionError(StratosError):
    """A formula names an agent, time or proposition the model does not declare."""


class RangeError(StratosError):
    pass


class DomainError(StratosError):
    """A distribution's support does not match the set it is defined on."""


class EmptyDomainWarning(UserWarning):
    """A forcing domain is empty, so the quantified claim holds vacuously."""
