"""Exception types raised across the package."""


class ChansimError(Exception):
    """Base class for all package errors."""


class ParameterError(ChansimError, ValueError):
    """A distribution or model parameter is outside its valid range."""


class DomainError(ParameterError):
    """A model is evaluated outside the domain it is defined on."""


class DataError(ChansimError, ValueError):
    """Input data is empty, degenerate or otherwise unusable."""


class ScenarioLookupError(ChansimError, KeyError):
    """No built-in parameter set exists for the requested scenario."""


class ValidationError(ChansimError, ValueError):
    """A config or data file violates its schema.

    ``field`` names the offending key or column, ``row`` the 1-based data row
    when the error comes from a tabular source.
    """

    def __init__(self, message: str, field: str | None = None, row: int | None = None):
        self.field = field
        self.row = row
        where = []
        if row is not None:
            where.append(f"row {row}")
        if field is not None:
            where.append(f"field '{field}'")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
