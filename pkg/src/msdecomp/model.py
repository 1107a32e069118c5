"""Graph and partition types shared by every other module.

A :class:`MonolithGraph` holds classes and directed call edges. A
:class:`Decomposition` assigns classes to named services; calling
:func:`validate_decomposition` checks it against a graph and returns a
:class:`ValidatedPartition` with a class-to-service index.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping

from msdecomp.errors import (
    BadCount,
    DuplicateAssignment,
    DuplicateClass,
    DuplicateEdge,
    EmptyService,
    MissingClass,
    UnknownClass,
    UnknownEdgeEndpoint,
)


class EdgeKind(str, enum.Enum):
    STATIC = "static"
    RUNTIME = "runtime"


@dataclass(frozen=True)
class ClassNode:
    id: str
    attributes: Mapping[str, str] = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        if not isinstance(self.id, str) or not self.id:
            raise ValueError("class id must be a non-empty string")
        object.__setattr__(self, "attributes", MappingProxyType(dict(self.attributes)))


@dataclass(frozen=True)
class CallEdge:
    src: str
    dst: str
    kind: EdgeKind = EdgeKind.STATIC
    count: int = 1

    def __post_init__(self):
        object.__setattr__(self, "kind", EdgeKind(self.kind))
        if isinstance(self.count, bool) or not isinstance(self.count, int) or self.count < 1:
            raise BadCount(self.count)


@dataclass(frozen=True)
class MonolithGraph:
    """Classes plus directed call edges; the system under decomposition.

    Classes and edges keep their input order. Construction enforces id
    uniqueness, edge endpoint existence and one edge per (src, dst, kind).
    """

    name: str
    classes: tuple[ClassNode, ...]
    edges: tuple[CallEdge, ...] = ()

    def __post_init__(self):
        classes = tuple(c if isinstance(c, ClassNode) else ClassNode(c) for c in self.classes)
        object.__setattr__(self, "classes", classes)
        object.__setattr__(self, "edges", tuple(self.edges))
        seen: set[str] = set()
        for c in classes:
            if c.id in seen:
                raise DuplicateClass(c.id)
            seen.add(c.id)
        keys: set[tuple[str, str, EdgeKind]] = set()
        for e in self.edges:
            for end in (e.src, e.dst):
                if end not in seen:
                    raise UnknownEdgeEndpoint(end)
            key = (e.src, e.dst, e.kind)
            if key in keys:
                raise DuplicateEdge(e.src, e.dst, e.kind.value)
            keys.add(key)

    @property
    def class_ids(self) -> tuple[str, ...]:
        return tuple(c.id for c in self.classes)

    def __len__(self) -> int:
        return len(self.classes)

    def has_runtime_edges(self) -> bool:
        return any(e.kind is EdgeKind.RUNTIME for e in self.edges)

    def edges_of(self, kind: EdgeKind) -> list[CallEdge]:
        return [e for e in self.edges if e.kind is kind]

    @classmethod
    def from_edges(cls, name: str, edges: Iterable[tuple], classes: Iterable[str] = ()) -> MonolithGraph:
        """Build a graph from ``(src, dst[, kind[, count]])`` tuples.

        Classes are taken from ``classes`` first, then from edge endpoints in
        order of first appearance.
        """
        ids = list(dict.fromkeys(classes))
        known = set(ids)
        call_edges = []
        for item in edges:
            e = CallEdge(*item)
            for end in (e.src, e.dst):
                if end not in known:
                    known.add(end)
                    ids.append(end)
            call_edges.append(e)
        return cls(name, tuple(ClassNode(i) for i in ids), tuple(call_edges))


@dataclass(frozen=True)
class Service:
    name: str
    classes: frozenset[str]

    def __post_init__(self):
        object.__setattr__(self, "classes", frozenset(self.classes))


@dataclass(frozen=True)
class Decomposition:
    """A (not yet validated) assignment of classes to named services."""

    tool: str
    system: str
    services: tuple[Service, ...]

    def __post_init__(self):
        object.__setattr__(
            self,
            "services",
            tuple(s if isinstance(s, Service) else Service(*s) for s in self.services),
        )

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[str]], tool: str = "manual", system: str = "",
                    prefix: str = "service") -> Decomposition:
        return cls(tool, system, tuple(Service(f"{prefix}-{i}", frozenset(b)) for i, b in enumerate(blocks)))

    def block_sets(self) -> frozenset[frozenset[str]]:
        """Services as a set of class sets, ignoring names and order."""
        return frozenset(s.classes for s in self.services)


@dataclass(frozen=True)
class ValidatedPartition:
    """A decomposition known to be a total, disjoint partition of a graph."""

    decomposition: Decomposition
    blocks: tuple[frozenset[str], ...]
    index: Mapping[str, int]

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.decomposition.services)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.blocks)

    @property
    def n_services(self) -> int:
        return len(self.blocks)

    def __eq__(self, other):
        if not isinstance(other, ValidatedPartition):
            return NotImplemented
        return self.decomposition == other.decomposition

    def __hash__(self):
        return hash(self.decomposition)


def validate_decomposition(graph: MonolithGraph, decomposition: Decomposition | ValidatedPartition) -> ValidatedPartition:
    """Check that ``decomposition`` partitions the classes of ``graph``.

    Raises:
        EmptyService: a service lists no classes.
        UnknownClass: a service mentions a class missing from the graph.
        DuplicateAssignment: a class appears in two services.
        MissingClass: a graph class appears in no service.
    """
    if isinstance(decomposition, ValidatedPartition):
        decomposition = decomposition.decomposition
    known = set(graph.class_ids)
    index: dict[str, int] = {}
    for i, service in enumerate(decomposition.services):
        if not service.classes:
            raise EmptyService(service.name)
        for cid in sorted(service.classes):
            if cid not in known:
                raise UnknownClass(cid, service.name)
            if cid in index:
                first = decomposition.services[index[cid]].name
                raise DuplicateAssignment(cid, (first, service.name))
            index[cid] = i
    for cid in graph.class_ids:
        if cid not in index:
            raise MissingClass(cid)
    blocks = tuple(s.classes for s in decomposition.services)
    return ValidatedPartition(decomposition, blocks, MappingProxyType(index))
