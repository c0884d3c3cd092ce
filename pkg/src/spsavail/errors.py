"""Exception types shared across the package."""


class SpsError(Exception):
    """Base class for all spsavail errors."""


class NotFoundError(SpsError, KeyError):
    """A named load, subsystem or preset does not exist."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class AmbiguityError(SpsError):
    """More than one normal-configuration supply path reaches a load."""


class MissingDataError(SpsError):
    """Weight, volume or TRL data is missing for counted components."""

    def __init__(self, what, ids):
        self.what = what
        self.ids = tuple(ids)
        super().__init__(f"missing {what} for: {', '.join(self.ids)}")


class ConfigError(SpsError, ValueError):
    """A configuration file could not be parsed."""

    def __init__(self, message, line=None, column=None, source=None):
        self.line = line
        self.column = column
        self.source = source
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
        prefix = f"{source}: " if source else ""
        super().__init__(f"{prefix}{where + ': ' if where else ''}{message}")
