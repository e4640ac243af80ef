"""Exception types shared across the package."""


class GuardnetError(Exception):
    """Base class for every domain error raised by guardnet."""


class InvalidNetError(GuardnetError):
    """A net, guard, or bundle failed structural validation."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(self.diagnostics) or "invalid")


class TokenGameError(GuardnetError):
    """Token-game misuse: unknown identifiers or firing a disabled transition."""


class BoundaryError(GuardnetError):
    """A process term is ill-typed (source/target words do not line up)."""


class EvalError(GuardnetError):
    """A guard evaluation query is malformed (arity or color mismatch).

    Distinct from an evaluation that is merely undefined: undefined is a
    legitimate semantic outcome, EvalError means the question itself is bad.
    """


class TooLargeError(GuardnetError):
    """An exact search (isomorphism) refused to run above its size cap."""


class PreconditionError(GuardnetError):
    """A transformation was invoked with its stated preconditions violated."""


class BundleError(GuardnetError):
    """A bundle file could not be parsed or has the wrong shape."""
