"""Sensor-network connectivity graphs.

Nodes are labelled 1..M in every public interface (matching how small sensor
networks are usually drawn); array indices stay internal to callers. Graphs
are undirected, simple, and small (a handful of nodes), so the algorithms
below favour clarity over asymptotics.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import InvalidInputError, InvalidPermutationError

Pair = tuple[int, int]


def _norm_pair(i, j) -> Pair:
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class Topology:
    """Undirected graph over nodes 1..node_count; edges mark sensor pairs that share data."""

    node_count: int
    edges: frozenset[Pair] = field(default_factory=frozenset)

    def __post_init__(self):
        m = self.node_count
        if not isinstance(m, int) or m < 2:
            raise InvalidInputError(f"node_count must be an integer >= 2, got {m!r}")
        norm = set()
        for e in self.edges:
            try:
                i, j = e
            except (TypeError, ValueError):
                raise InvalidInputError(f"edge {e!r} is not a pair") from None
            if not (isinstance(i, int) and isinstance(j, int)):
                raise InvalidInputError(f"edge {e!r} must contain integers")
            if i == j:
                raise InvalidInputError(f"self-loop {e!r} is not allowed")
            if not (1 <= i <= m and 1 <= j <= m):
                raise InvalidInputError(f"edge {e!r} out of range 1..{m}")
            norm.add(_norm_pair(i, j))
        object.__setattr__(self, "edges", frozenset(norm))

    # -- constructors ------------------------------------------------------

    @classmethod
    def complete(cls, node_count: int) -> "Topology":
        return cls(node_count, frozenset(itertools.combinations(range(1, node_count + 1), 2)))

    @classmethod
    def parse(cls, text: str) -> "Topology":
        """Parse the text form ``"M: i-j,i-j,..."`` (whitespace-insensitive).

        An empty edge list is written ``"M:"``.
        """
        compact = "".join(str(text).split())
        head, sep, tail = compact.partition(":")
        if not sep:
            raise InvalidInputError(f"topology text {text!r} is missing ':'")
        try:
            m = int(head)
        except ValueError:
            raise InvalidInputError(f"bad node count {head!r} in topology text") from None
        edges = set()
        if tail:
            for token in tail.split(","):
                a, sep2, b = token.partition("-")
                if not sep2:
                    raise InvalidInputError(f"bad edge token {token!r} in topology text")
                try:
                    edges.add((int(a), int(b)))
                except ValueError:
                    raise InvalidInputError(f"bad edge token {token!r} in topology text") from None
        return cls(m, frozenset(edges))

    # -- formatting --------------------------------------------------------

    def to_text(self) -> str:
        if not self.edges:
            return f"{self.node_count}:"
        body = ",".join(f"{i}-{j}" for i, j in sorted(self.edges))
        return f"{self.node_count}: {body}"

    # -- basic queries -----------------------------------------------------

    def is_complete(self) -> bool:
        return len(self.edges) == self.node_count * (self.node_count - 1) // 2

    def has_edge(self, i: int, j: int) -> bool:
        return _norm_pair(i, j) in self.edges

    def neighbors(self, node: int) -> frozenset[int]:
        if not 1 <= node <= self.node_count:
            raise InvalidInputError(f"node {node} out of range 1..{self.node_count}")
        return frozenset(j if i == node else i for i, j in self.edges if node in (i, j))

    def without_edge(self, edge: Pair) -> "Topology":
        e = _norm_pair(*edge)
        if e not in self.edges:
            raise InvalidInputError(f"edge {edge!r} is not present")
        return Topology(self.node_count, self.edges - {e})

    # -- distances and ordering -------------------------------------------

    def _distances_from(self, source: int) -> dict[int, float]:
        dist = {source: 0}
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for v in self.neighbors(u):
                if v not in dist:
                    dist[v] = dist[u] + 1
                    queue.append(v)
        return {v: dist.get(v, math.inf) for v in range(1, self.node_count + 1)}

    def missing_pairs(self) -> list[Pair]:
        """Node pairs with no edge, sorted by shortest-path distance then lexicographically.

        Pairs in different components (infinite distance) come last. This
        order is the deterministic fill and sweep order for the completion.
        """
        out = []
        for i in range(1, self.node_count + 1):
            dist = self._distances_from(i)
            for j in range(i + 1, self.node_count + 1):
                if (i, j) not in self.edges:
                    out.append((dist[j], (i, j)))
        out.sort(key=lambda item: (item[0], item[1]))
        return [pair for _, pair in out]

    def is_connected(self) -> bool:
        return all(d < math.inf for d in self._distances_from(1).values())

    # -- chordality --------------------------------------------------------

    def is_chordal(self) -> tuple[bool, list[int] | None]:
        """Chordality test via maximum-cardinality search plus verification.

        Returns ``(True, ordering)`` where ``ordering`` is a perfect
        elimination ordering (first eliminated first), or ``(False, None)``.
        The ordering is what the completion algorithm consumes.
        """
        m = self.node_count
        weights = {v: 0 for v in range(1, m + 1)}
        unnumbered = set(weights)
        visit = []  # filled from the END of the elimination ordering backwards
        while unnumbered:
            v = max(sorted(unnumbered), key=lambda u: weights[u])
            visit.append(v)
            unnumbered.discard(v)
            for w in self.neighbors(v):
                if w in unnumbered:
                    weights[w] += 1
        peo = list(reversed(visit))
        position = {v: k for k, v in enumerate(peo)}
        for v in peo:
            later = [w for w in self.neighbors(v) if position[w] > position[v]]
            for a, b in itertools.combinations(sorted(later), 2):
                if (a, b) not in self.edges:
                    return False, None
        return True, peo

    # -- relabelling -------------------------------------------------------

    def apply_permutation(self, perm: Mapping[int, int] | Sequence[int]) -> "Topology":
        """Relabel nodes. ``perm`` maps old label to new label.

        Accepts a dict ``{old: new}`` or a sequence where entry ``k`` (0-based)
        is the new label of node ``k + 1``.
        """
        m = self.node_count
        if isinstance(perm, Mapping):
            mapping = {int(k): int(v) for k, v in perm.items()}
        else:
            mapping = {k + 1: int(v) for k, v in enumerate(perm)}
        if sorted(mapping) != list(range(1, m + 1)) or sorted(mapping.values()) != list(
            range(1, m + 1)
        ):
            raise InvalidPermutationError(f"not a bijection on 1..{m}: {perm!r}")
        return Topology(m, frozenset(_norm_pair(mapping[i], mapping[j]) for i, j in self.edges))


def are_isomorphic(a: Topology, b: Topology) -> bool:
    """Brute-force graph isomorphism check (intended for small M)."""
    if a.node_count != b.node_count or len(a.edges) != len(b.edges):
        return False
    nodes = list(range(1, a.node_count + 1))
    for images in itertools.permutations(nodes):
        mapping = dict(zip(nodes, images))
        if all(_norm_pair(mapping[i], mapping[j]) in b.edges for i, j in a.edges):
            return True
    return False


def all_topologies(node_count: int, edge_count: int) -> Iterable[Topology]:
    """Every labelled topology on ``node_count`` nodes with exactly ``edge_count`` edges."""
    pairs = list(itertools.combinations(range(1, node_count + 1), 2))
    for subset in itertools.combinations(pairs, edge_count):
        yield Topology(node_count, frozenset(subset))
