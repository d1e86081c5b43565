class DataError(ValueError):
    """Base class for problems with input data or parameters (CLI exit status 2)."""


class MalformedRow(DataError):
    def __init__(self, line, detail=""):
        self.line = line
        super().__init__(f"line {line}: malformed row{': ' + detail if detail else ''}")


class BadTimestamp(DataError):
    def __init__(self, line, value):
        self.line = line
        super().__init__(f"line {line}: cannot parse timestamp {value!r}")


class InvalidConfig(DataError):
    pass


class EmptyDatabase(DataError):
    pass


class DomainError(DataError):
    pass


class MissingSubsetSupport(DataError):
    pass


class SeriesTooShort(DataError):
    pass


class BadBaseline(DataError):
    pass


class LengthMismatch(DataError):
    pass


class EmptyInput(DataError):
    pass
