"""Banded network segment topology.

A segment is N serially ordered trusted nodes (1-based indices) where each
node has unidirectional links to the next ``density`` nodes.  The adjacency
matrix therefore carries ones on the first ``density`` superdiagonals and
zeros elsewhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .errors import ValidationError


class Link(NamedTuple):
    """Directed QKD link between two nodes (1-based indices)."""

    src: int
    dst: int


@dataclass(frozen=True)
class NetworkSegment:
    """Immutable (N, c) segment descriptor.

    ``n_nodes`` includes both endpoints; ``density`` is the maximum hop
    length, i.e. each node links to the next ``density`` nodes.
    """

    n_nodes: int
    density: int

    def __post_init__(self) -> None:
        if self.n_nodes < 3:
            raise ValidationError(
                f"n_nodes must be >= 3 (need at least one interior node), got {self.n_nodes}"
            )
        if not 1 <= self.density <= self.n_nodes - 1:
            raise ValidationError(
                f"density must be in [1, {self.n_nodes - 1}], got {self.density}"
            )

    @property
    def edge_count(self) -> int:
        # c*(2N-c-1) is always even, so integer division is exact.
        return self.density * (2 * self.n_nodes - self.density - 1) // 2

    @property
    def interior_nodes(self) -> range:
        return range(2, self.n_nodes)

    def edges(self) -> list[Link]:
        """All links, ascending by source then destination."""
        return [
            Link(i, j)
            for i in range(1, self.n_nodes)
            for j in range(i + 1, min(i + self.density, self.n_nodes) + 1)
        ]

    def out_neighbors(self, node: int) -> list[int]:
        if not 1 <= node <= self.n_nodes:
            raise ValidationError(f"node must be in [1, {self.n_nodes}], got {node}")
        return list(range(node + 1, min(node + self.density, self.n_nodes) + 1))

    def in_neighbors(self, node: int) -> list[int]:
        if not 1 <= node <= self.n_nodes:
            raise ValidationError(f"node must be in [1, {self.n_nodes}], got {node}")
        return list(range(max(node - self.density, 1), node))

    def has_link(self, src: int, dst: int) -> bool:
        return 1 <= src < dst <= self.n_nodes and dst - src <= self.density

    def to_dict(self) -> dict:
        return {"n": self.n_nodes, "c": self.density}


def make_segment(n_nodes: int, density: int) -> NetworkSegment:
    """Validate and build a segment; see NetworkSegment for the bounds."""
    return NetworkSegment(n_nodes, density)
