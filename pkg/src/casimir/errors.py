"""Exception hierarchy shared across the package.

The CLI maps these onto process exit codes (see docs/schemas.md):
SchemaError -> 2, GeometryError -> 3, NumericalError/BudgetError -> 4,
ValidationFailure -> 5.
"""


class CasimirError(Exception):
    """Base class for all package-specific errors."""


class SchemaError(CasimirError):
    """Malformed or unsupported input (config files, CLI parameters)."""


class GeometryError(CasimirError):
    """Invalid geometry: overlaps, degenerate curves, bad surfaces."""


class NumericalError(CasimirError):
    """Hard numerical failure: Cholesky breakdown, non-positive determinant,
    diverging extrapolation.  Never silently clamped."""


class NumericalBudgetError(NumericalError):
    """Requested tolerance unreachable within the configured node budget."""


class ProximityError(CasimirError):
    """Off-boundary evaluation requested too close to an obstacle boundary."""


class ValidationFailure(CasimirError):
    """An oracle validation suite failed."""
