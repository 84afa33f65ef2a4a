"""Exception and warning types shared across the package."""

from __future__ import annotations


class VrpError(Exception):
    """Base class for all domain errors."""


class VrpSyntaxError(VrpError):
    """Malformed document text; carries a 1-based line/column position."""

    def __init__(self, message: str, line: int, column: int, filename: str | None = None):
        self.line = line
        self.column = column
        self.filename = filename
        where = f"{filename or '<input>'}:{line}:{column}"
        super().__init__(f"{where}: {message}")


class ModelError(VrpError):
    """Semantic violation in a model document (duplicate id, dangling reference, bad containment)."""


class AspectError(VrpError):
    """Semantic violation in an aspect definition (unknown pointcut, bad params, name clashes)."""


class LinkError(VrpError):
    """Cross-file resolution failure, e.g. an occupe action naming an undeclared variant."""


class PointcutCycleError(AspectError):
    """A pointcut (transitively) references its own parameter sets."""


class KindMismatchError(VrpError):
    """Variant payload kind is incompatible with the variation point kind."""


class AlreadyOccupiedError(VrpError):
    """The variation point already holds a variant (capacity is 1)."""


class ImplicitBindingError(VrpError):
    """Manual bindings may only target explicit variation points."""


class UnknownVarPointError(VrpError):
    """A binding names a variation point that does not exist."""


class UnoccupiedEndpointError(VrpError):
    """A dependency cannot be realized because an endpoint variant is not placed."""


class OccupationConflictError(VrpError):
    """Two occupations target the same variation point."""

    def __init__(self, varpoint: str, origins: tuple[str, ...]):
        self.varpoint = varpoint
        self.origins = origins
        super().__init__(f"variation point '{varpoint}' occupied more than once: {', '.join(origins)}")


class UnresolvedMandatoryError(VrpError):
    """A mandatory explicit variation point is left unoccupied."""

    def __init__(self, varpoint: str):
        self.varpoint = varpoint
        super().__init__(f"mandatory variation point '{varpoint}' is unoccupied")


class DependencyViolationError(VrpError):
    """variant2variant dependencies left inconsistent by the chosen occupations."""

    def __init__(self, violations: tuple):
        self.violations = violations
        detail = "; ".join(str(v) for v in violations)
        super().__init__(f"inconsistent occupations: {detail}")


class EmptyMatchWarning(UserWarning):
    """An occupe action's parameter matched no variation points."""


class UnboundParamWarning(UserWarning):
    """A pointcut parameter was declared without a binding expression."""
