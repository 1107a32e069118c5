"""Exception types raised across msdecomp.

Every domain error derives from :class:`DecompError`; the CLI maps these to
exit code 1 and prints ``<ClassName>: <message>``.
"""

from __future__ import annotations


class DecompError(Exception):
    """Base class for all domain errors."""

    def __init__(self, message: str, *, location: str | None = None):
        self.location = location
        if location:
            message = f"{message} (at {location})"
        super().__init__(message)


# --- validation -----------------------------------------------------------

class ValidationError(DecompError, ValueError):
    pass


class UnknownClass(ValidationError):
    def __init__(self, class_id: str, service: str | None = None):
        self.class_id = class_id
        where = f" in service {service!r}" if service is not None else ""
        super().__init__(f"class {class_id!r}{where} is not in the graph")


class MissingClass(ValidationError):
    def __init__(self, class_id: str):
        self.class_id = class_id
        super().__init__(f"class {class_id!r} is not assigned to any service")


class DuplicateAssignment(ValidationError):
    def __init__(self, class_id: str, services: tuple[str, ...] = ()):
        self.class_id = class_id
        self.services = services
        where = f" (services {', '.join(map(repr, services))})" if services else ""
        super().__init__(f"class {class_id!r} is assigned to more than one service{where}")


class EmptyService(ValidationError):
    def __init__(self, service: str):
        self.service = service
        super().__init__(f"service {service!r} has no classes")


class DuplicateClass(ValidationError):
    def __init__(self, class_id: str, location: str | None = None):
        self.class_id = class_id
        super().__init__(f"class {class_id!r} declared more than once", location=location)


class UnknownEdgeEndpoint(ValidationError):
    def __init__(self, class_id: str, location: str | None = None):
        self.class_id = class_id
        super().__init__(f"edge endpoint {class_id!r} is not a declared class", location=location)


class DuplicateEdge(ValidationError):
    def __init__(self, src: str, dst: str, kind: str, location: str | None = None):
        self.edge = (src, dst, kind)
        super().__init__(f"duplicate {kind} edge {src!r} -> {dst!r}", location=location)


class BadCount(ValidationError):
    def __init__(self, count: object, location: str | None = None):
        self.count = count
        super().__init__(f"edge count must be an integer >= 1, got {count!r}", location=location)


# --- parsing --------------------------------------------------------------

class ParseError(DecompError, ValueError):
    pass


class NonNumericCell(ParseError):
    pass


class EmptyTable(ParseError):
    pass


# --- metrics / scoring ----------------------------------------------------

class NoRuntimeData(DecompError):
    pass


class InvalidBounds(DecompError, ValueError):
    pass


class TooFewRows(DecompError, ValueError):
    pass


# --- decomposers / generator ---------------------------------------------

class EmptyGraph(DecompError, ValueError):
    pass


class BadK(DecompError, ValueError):
    pass


class InfeasibleBounds(DecompError, ValueError):
    pass


class BadThreshold(DecompError, ValueError):
    pass


class BadSpec(DecompError, ValueError):
    pass
