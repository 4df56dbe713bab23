"""Exception types shared across the toolkit."""


class BiopipeError(Exception):
    """Base class for all toolkit errors."""


class ShapeError(BiopipeError, ValueError):
    """Operands have incompatible dimensions."""


class DomainError(BiopipeError, ValueError):
    """An argument is outside the operation's domain (e.g. empty sequence)."""


class ContractError(BiopipeError):
    """An API contract was violated by the caller."""


class DataError(BiopipeError):
    """Input data (treebank, corpus, note collection) is malformed."""


class ConfigError(BiopipeError):
    """Pipeline or package configuration cannot be satisfied."""


class PackageError(BiopipeError):
    """A model package on disk is corrupt or inconsistent."""


class InputError(BiopipeError):
    """Annotation input is malformed (bad tokens, bad encoding)."""
