"""Exception hierarchy shared across the package.

Every failure a caller can act on is a subclass of NnanimError.  The four
families map onto the CLI exit codes: parse errors (3), network validation
errors (4), io errors are plain OSError (5), render errors (6).  Usage
errors (2) cover malformed command lines and environment variables.
"""

from __future__ import annotations


class NnanimError(Exception):
    """Base class for all package-specific errors."""


class UsageError(NnanimError):
    """Bad command-line flags or environment configuration."""


# ---------------------------------------------------------------------------
# Parse family: raised while turning source text into a NetworkSpec.
# ---------------------------------------------------------------------------

class ParseError(NnanimError):
    """Source text rejected; carries a 1-based line/column position."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class SpecSyntaxError(ParseError):
    """Token stream does not match the grammar."""

    def __init__(self, message: str, line: int, column: int, expected: str = ""):
        super().__init__(message, line, column)
        self.expected = expected


class UnknownLayerKind(ParseError):
    def __init__(self, name: str, line: int, column: int):
        super().__init__(f"unknown layer kind '{name}'", line, column)
        self.name = name


class UnknownParam(ParseError):
    def __init__(self, owner: str, name: str, line: int, column: int):
        super().__init__(f"unknown parameter '{name}' in '{owner}' block", line, column)
        self.owner = owner
        self.name = name


class TypeMismatch(ParseError):
    def __init__(self, param: str, expected: str, line: int = 0, column: int = 0):
        super().__init__(f"parameter '{param}' expects {expected}", line, column)
        self.param = param
        self.expected = expected


# ---------------------------------------------------------------------------
# Validation family: structurally sound spec that describes a bad network.
# ---------------------------------------------------------------------------

class NetworkValidationError(NnanimError):
    """The parsed network cannot be laid out or animated."""


class IncompatiblePair(NetworkValidationError):
    def __init__(self, index: int, kind_a: str, kind_b: str):
        super().__init__(
            f"layer {index} ({kind_a}) cannot feed layer {index + 1} ({kind_b})"
        )
        self.index = index
        self.kind_a = kind_a
        self.kind_b = kind_b


class DegenerateConv(NetworkValidationError):
    def __init__(self, index: int, detail: str = "output size collapses below 1x1"):
        super().__init__(f"layer {index}: {detail}")
        self.index = index


class MissingImageFile(NetworkValidationError):
    def __init__(self, path: str):
        super().__init__(f"image source not found: {path}")
        self.path = path


class BadPgm(NetworkValidationError):
    def __init__(self, path: str, reason: str):
        super().__init__(f"cannot use {path}: {reason}")
        self.path = path
        self.reason = reason


class TooFewLayers(NetworkValidationError):
    def __init__(self, count: int):
        super().__init__(f"network needs at least 2 layers, got {count}")
        self.count = count


class NoDirectives(NetworkValidationError):
    def __init__(self):
        super().__init__("network has no animation directives")


class NoEligibleLayers(NetworkValidationError):
    def __init__(self):
        super().__init__(
            "dropout needs at least one fully-connected layer before the last one"
        )


# ---------------------------------------------------------------------------
# Layout / timeline / sampling / render families.
# ---------------------------------------------------------------------------

class LayoutError(NnanimError):
    pass


class EmptyScene(LayoutError):
    def __init__(self):
        super().__init__("cannot fit a view around zero primitives")


class TimelineError(NnanimError):
    pass


class UnregisteredPair(TimelineError):
    def __init__(self, kind_a: str, kind_b: str):
        super().__init__(f"no transition animation registered for {kind_a} -> {kind_b}")
        self.kind_a = kind_a
        self.kind_b = kind_b


class SamplingError(NnanimError):
    pass


class OutOfRange(SamplingError):
    def __init__(self, t: float, duration: float):
        super().__init__(f"time {t} outside [0, {duration}]")
        self.t = t
        self.duration = duration


class RenderError(NnanimError):
    pass


class PaletteOverflow(RenderError):
    def __init__(self, count: int):
        super().__init__(f"frame sequence uses {count} distinct colors, limit is 256")
        self.count = count
