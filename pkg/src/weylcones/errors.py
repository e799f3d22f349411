"""Exception taxonomy shared across the package."""


class ConfigurationError(ValueError):
    """Unsupported group type, rank, or catalog entry."""


class DomainError(ValueError):
    """Arguments outside an operation's stated domain (e.g. Q not inside P)."""


class ConsistencyError(RuntimeError):
    """Two internally computed routes to the same value disagree."""


class IncompatibleFamilyError(RuntimeError):
    """A parabolic family failed the wall-compatibility requirement."""


class CompletenessError(RuntimeError):
    """A randomized probe found an object missed by systematic enumeration."""
