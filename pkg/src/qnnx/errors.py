"""Exception hierarchy shared by every module."""


class QNNError(Exception):
    """Base class for all errors raised by qnnx."""


class ConfigurationError(QNNError, ValueError):
    """Inconsistent sizes, unknown names or out-of-range settings."""


class StructuralError(QNNError, IndexError):
    """A qubit index that does not exist on the register."""


class DomainError(QNNError, ValueError):
    """An input value outside the domain of an embedding."""


class UsageError(QNNError, ValueError):
    """A call that cannot be satisfied with the given arguments."""


class DivergenceError(QNNError, FloatingPointError):
    """Non-finite loss or gradient encountered during training."""
