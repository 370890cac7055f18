"""
Error types for cosetsle.

All domain errors derive from ValueError so callers can treat invalid
input uniformly; the CLI maps them to exit code 2.
"""

from typing import Optional, Sequence


class CosetSLEError(ValueError):
    """Base class for domain errors."""


class AlgebraParseError(CosetSLEError):
    """Malformed algebra document."""

    def __init__(self, message: str, field: Optional[str] = None, line: Optional[int] = None):
        self.field = field
        self.line = line
        where = []
        if field is not None:
            where.append(f"field '{field}'")
        if line is not None:
            where.append(f"line {line}")
        suffix = f" ({', '.join(where)})" if where else ""
        super().__init__(f"{message}{suffix}")


class StructureError(CosetSLEError):
    """An algebra identity (antisymmetry, Jacobi, form symmetry) fails."""

    def __init__(self, identity: str, indices: Sequence[int], residual: object):
        self.identity = identity
        self.indices = tuple(indices)
        self.residual = residual
        super().__init__(f"{identity} violated at indices {self.indices}: residual {residual}")


class SelectionRuleError(CosetSLEError):
    """Coset label rejected by the model's selection rule."""

    def __init__(self, label: object):
        self.label = label
        super().__init__(f"{label} excluded by selection rule")


class UnsupportedModelError(CosetSLEError):
    """Requested model, family or representation is not available."""


class LevelBudgetError(CosetSLEError):
    """A state would leave the level-two descendant budget."""

    def __init__(self, level: int):
        self.level = level
        super().__init__(f"level budget exceeded (descendant level {level} > 2)")


class CommutatorModeError(CosetSLEError):
    """Commutator requested outside what the engine mode defines."""

    def __init__(self, detail: str = ""):
        msg = "commutator undefined in coset mode"
        super().__init__(f"{msg}: {detail}" if detail else msg)


class IndicialRelationError(CosetSLEError):
    """Exponent does not solve the indicial relation of the observable."""

    def __init__(self, residual: float):
        self.residual = residual
        super().__init__(f"not a martingale candidate (indicial residual {residual:.3e})")


class PathDomainError(CosetSLEError):
    """Trace leaves the closed upper half-plane."""


class NonFiniteSampleError(CosetSLEError):
    """Too many Monte Carlo streams produced non-finite values."""


class SchemaValidationError(CosetSLEError):
    """A JSON artifact does not match its shipped schema."""

    def __init__(self, schema: str, path: Sequence[object], detail: str):
        self.schema = schema
        self.path = tuple(path)
        location = "/".join(str(p) for p in self.path) or "<root>"
        super().__init__(f"{schema} schema violated at {location}: {detail}")
