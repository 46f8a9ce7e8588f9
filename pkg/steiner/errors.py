"""
Exception hierarchy shared by the word engine, the group searches and the CLI.
"""


class SteinerError(Exception):
    """Base class for every error raised by the steiner package."""


class ResourceLimitError(SteinerError):
    def __init__(self, cap: str, limit: int):
        self.cap = cap
        self.limit = limit
        super().__init__(f'Resource cap exceeded: {cap} > {limit}')


class PreconditionError(SteinerError):
    pass


class InvalidWordError(SteinerError):
    pass


class WordSyntaxError(SteinerError):
    def __init__(self, message: str, position: int):
        self.position = position
        super().__init__(f'{message} at position {position}')


class UnknownGeneratorError(SteinerError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f'Unknown generator: {name}')


class AlphabetMismatchError(SteinerError):
    def __init__(self, expected: int, actual: int):
        self.expected = expected
        self.actual = actual
        super().__init__(f'Alphabet mismatch: expected {expected} generators, got {actual}')


class NotAnAutomorphismError(SteinerError):
    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(f'Not an automorphism: {reason}')


class DecompositionError(SteinerError):
    pass


class STSFormatError(SteinerError):
    def __init__(self, line_number: int, line: str):
        self.line_number = line_number
        self.line = line
        super().__init__(f'Malformed block on line {line_number}: {line!r}')


class STSValidationError(SteinerError):
    def __init__(self, report):
        self.report = report
        super().__init__(report.message)


class ConfigurationValidationError(SteinerError):
    """Exception raised for configuration validation errors"""
