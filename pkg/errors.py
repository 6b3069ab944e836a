"""
Exception types shared by every package.

The CLI turns any PersuasionError into a single ``error: <Class>: <message>`` line.
"""


class PersuasionError(Exception):
    """Base class for expected, user-facing failures."""


class EnumerationTooLargeError(PersuasionError):
    def __init__(self, required: int, cap: int):
        self.required = required
        self.cap = cap
        super().__init__(f"enumeration needs {required} ordered tuples but the cap is {cap}; "
                         f"raise enumeration_cap to at least {required}")


class EmptySupportError(PersuasionError):
    """No world is consistent with the observed evidence."""


class ValidationError(PersuasionError):
    """A value lies outside its allowed domain."""


class DataFormatError(PersuasionError):
    """An input file does not follow the expected layout."""


class LikelihoodError(PersuasionError):
    """A likelihood evaluated to a non-finite value."""


class ComparisonError(PersuasionError):
    """Fits cannot be compared with each other."""


class ConfigError(PersuasionError):
    """The run configuration is malformed."""
