"""Exception types shared across the package."""


class PreconditionError(ValueError):
    """Input violates a mathematical precondition of an operation."""


class ResourceBoundError(RuntimeError):
    """An exhaustive search would exceed its configured size bound."""


class MissingDataError(PreconditionError):
    """Signature or Casson-Gordon data needed for an evaluation is absent."""
