"""Category graph, per-area BFS depths and depth-derived general weights."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .lexicon import FormatError, TopicLexicon

DEFAULT_D1 = 3
DEFAULT_D2 = 1
DEFAULT_G_OFFSET = 4.0


class UnknownAreaError(KeyError):
    pass


@dataclass
class CategoryGraph:
    """Directed parent -> children adjacency over lexicon topic ids.

    Self-loops are dropped on insertion; cycles are kept.
    """

    n_topics: int
    children: dict[int, dict[int, None]] = field(default_factory=dict)

    @classmethod
    def from_edges(cls, n_topics: int, edges: Iterable[tuple[int, int]]) -> "CategoryGraph":
        g = cls(n_topics)
        for parent, child in edges:
            g.add_edge(parent, child)
        return g

    def add_edge(self, parent: int, child: int) -> bool:
        if not (0 <= parent < self.n_topics and 0 <= child < self.n_topics):
            raise ValueError(f"edge ({parent}, {child}) outside lexicon of {self.n_topics}")
        if parent == child:
            return False
        kids = self.children.setdefault(parent, {})
        if child in kids:
            return False
        kids[child] = None
        return True

    def __contains__(self, topic: int) -> bool:
        return 0 <= topic < self.n_topics

    @property
    def n_edges(self) -> int:
        return sum(len(v) for v in self.children.values())

    def edges(self) -> Iterable[tuple[int, int]]:
        for parent, kids in self.children.items():
            for child in kids:
                yield parent, child


@dataclass
class DepthMap:
    area: int
    depth: dict[int, int]

    def __len__(self) -> int:
        return len(self.depth)

    @property
    def max_depth(self) -> int:
        return max(self.depth.values())


def bfs_depths(graph: CategoryGraph, area: int, max_depth: int | None = None) -> DepthMap:
    """Shallowest depth of every node reachable from `area` (root at depth 0)."""
    if area not in graph:
        raise UnknownAreaError(area)
    depth = {area: 0}
    queue = deque([area])
    while queue:
        node = queue.popleft()
        d = depth[node] + 1
        if max_depth is not None and d > max_depth:
            continue
        for child in graph.children.get(node, ()):
            if child not in depth:
                depth[child] = d
                queue.append(child)
    return DepthMap(area, depth)


def general_weight(n: int | None, offset: float = DEFAULT_G_OFFSET) -> float:
    """g(n) = exp(offset - n); ``None`` marks a topic outside the subcategory tree."""
    if n is None:
        return 0.0
    return math.exp(offset - n)


@dataclass
class WeightMap:
    area: int
    weights: dict[int, float]

    def __getitem__(self, topic: int) -> float:
        return self.weights.get(topic, 0.0)

    def __contains__(self, topic: int) -> bool:
        return topic in self.weights


def general_weights(depths: DepthMap, offset: float = DEFAULT_G_OFFSET) -> WeightMap:
    return WeightMap(depths.area, {t: general_weight(n, offset) for t, n in depths.depth.items()})


def candidate_set(depths: DepthMap, d1: int = DEFAULT_D1) -> set[int]:
    """Topics within depth `d1` of the area, excluding the area itself."""
    return {t for t, n in depths.depth.items() if n <= d1 and t != depths.area}


def contributive_set(depths: DepthMap, d2: int = DEFAULT_D2) -> set[int]:
    """Topics within depth `d2`, area included."""
    return {t for t, n in depths.depth.items() if n <= d2}


def read_category_edges(path: str | Path, lexicon: TopicLexicon) -> tuple[CategoryGraph, int]:
    """Load ``parent<TAB>child`` phrase rows.

    Returns the graph and the number of rows skipped for naming a phrase
    missing from the lexicon.
    """
    graph = CategoryGraph(len(lexicon))
    unknown = 0
    table = lexicon.phrase_to_id
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise FormatError(path, lineno, "expected 2 tab-separated fields")
            parent, child = table.get(parts[0]), table.get(parts[1])
            if parent is None or child is None:
                unknown += 1
                continue
            graph.add_edge(parent, child)
    return graph, unknown


def write_category_edges(graph: CategoryGraph, lexicon: TopicLexicon, path: str | Path) -> None:
    names = lexicon.id_to_phrase
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for parent, child in graph.edges():
            fh.write(f"{names[parent]}\t{names[child]}\n")

