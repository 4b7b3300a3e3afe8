"""Exception types shared across the package."""


class ContractError(ValueError):
    """An operation was called outside its precondition."""


class ValidationError(ValueError):
    """A machine or system descriptor is ill-formed."""


class ParseError(ValueError):
    """Malformed DSL text. Carries the 1-based line/column and offending token."""

    def __init__(self, message, line=0, column=0, token=""):
        self.line = line
        self.column = column
        self.token = token
        where = f"line {line}, column {column}" if line else "input"
        if token:
            super().__init__(f"{where}: {message} (at {token!r})")
        else:
            super().__init__(f"{where}: {message}")
