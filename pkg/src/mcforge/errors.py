"""Exception hierarchy shared by every mcforge layer.

The CLI maps these onto exit codes and the HTTP service onto status
codes, so new error conditions should reuse one of the classes below
rather than raising bare ValueError.
"""

from __future__ import annotations

from dataclasses import dataclass


class McforgeError(Exception):
    """Base class for all errors raised by this package."""

    code = "error"


class GraphError(McforgeError):
    """A structurally invalid RDF term or triple (e.g. literal subject)."""

    code = "graph_error"


class CapacityError(McforgeError):
    """Isomorphism search exceeded the configured candidate bound."""

    code = "capacity_exceeded"


@dataclass(frozen=True)
class ParseDiagnostic:
    """One parser message anchored to a source position (1-based)."""

    line: int
    column: int
    message: str
    severity: str = "error"

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.severity}: {self.message}"


class ParseFailure(McforgeError):
    """Parsing failed; carries every diagnostic collected before giving up."""

    code = "parse_error"

    def __init__(self, diagnostics: list[ParseDiagnostic]):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(str(d) for d in self.diagnostics) or "parse failed")


class SerializationError(McforgeError):
    code = "serialization_error"


class UnsupportedConstructError(McforgeError):
    """Input to a restricted reader was not in this package's own output shape."""

    code = "unsupported_construct"


class FetchError(McforgeError):
    code = "fetch_error"


class OfflineMissError(FetchError):
    """Offline mode was requested but the origin is not in the cache."""

    code = "offline_cache_miss"


class NotFoundError(McforgeError):
    code = "not_found"


class CycleError(McforgeError):
    """The named-class subclass hierarchy contains a cycle."""

    code = "subclass_cycle"

    def __init__(self, cycle: list[str]):
        self.cycle = list(cycle)
        super().__init__("subclass cycle: " + " -> ".join(self.cycle + self.cycle[:1]))


class ConfigurationError(McforgeError):
    code = "configuration_error"


class ValidationError(McforgeError):
    code = "validation_error"

    def __init__(self, message: str, details: object | None = None):
        self.details = details
        super().__init__(message)


class AnnotationError(ValidationError):
    """A snippet referenced a class the ontology does not define."""

    code = "annotation_error"


class PreconditionError(McforgeError):
    """An operation was called before its prerequisite (e.g. export before encode)."""

    code = "precondition_failed"
