"""Exception hierarchy.

Every error raised on purpose by the library derives from :class:`MetrologyError`;
the sweep runner records the class name as the row's ``error_code``.
"""

from __future__ import annotations


class MetrologyError(Exception):
    """Base class for all library errors."""

    @property
    def code(self) -> str:
        return type(self).__name__


class NotHermitian(MetrologyError, ValueError):
    pass


class NoConvergence(MetrologyError, ArithmeticError):
    pass


class DomainError(MetrologyError, ValueError):
    pass


class DimensionMismatch(MetrologyError, ValueError):
    pass


class InvalidDimension(MetrologyError, ValueError):
    pass


class InvalidConfig(MetrologyError, ValueError):
    pass


class NonPositiveTemperature(MetrologyError, ValueError):
    pass


class InvalidStep(MetrologyError, ValueError):
    pass


class DegenerateVariance(MetrologyError, ArithmeticError):
    """The observable's variance is at or below the floor, so it carries no usable signal."""


class NonUniformGrid(MetrologyError, ValueError):
    pass


class MultiModeState(MetrologyError, ValueError):
    pass


class CutoffTooSmall(MetrologyError, ValueError):
    pass


class ConfigError(MetrologyError, ValueError):
    """Malformed sweep configuration.

    ``field`` is a dotted path such as ``axes[0].count``; ``line`` is set for JSON
    syntax errors.
    """

    def __init__(self, message: str, field: str | None = None, line: int | None = None):
        self.field = field
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
