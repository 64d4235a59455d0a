"""Node-level network measures over the unweighted simple-graph view.

Six measures describe a node's brokerage position: closeness (mean inverse
distance to all other nodes), normalized betweenness, average neighbor
degree, Burt's effective size, efficiency, and triangle count. Edge
weights are ignored; a degree-0 node scores 0 everywhere.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .conversation import CharacterNetwork
from .errors import UnknownNode


@dataclass(frozen=True)
class NodeFeatures:
    closeness: float
    betweenness: float
    avg_neighbor_degree: float
    effective_size: float
    efficiency: float
    triangles: int

    def as_row(self) -> tuple[float, float, float, float, float, float]:
        return (
            self.closeness,
            self.betweenness,
            self.avg_neighbor_degree,
            self.effective_size,
            self.efficiency,
            float(self.triangles),
        )


FEATURE_NAMES = (
    "closeness",
    "betweenness",
    "avg_neighbor_degree",
    "effective_size",
    "efficiency",
    "triangles",
)


def _bfs_distances(g: CharacterNetwork, source: int) -> dict[int, int]:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in g.neighbors(u):
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def _closeness(g: CharacterNetwork, v: int, variant: str) -> float:
    n = len(g)
    if n <= 1:
        return 0.0
    dist = _bfs_distances(g, v)
    if variant == "average_inverse":
        # unreachable pairs contribute inverse distance 0
        return sum(1.0 / d for u, d in dist.items() if u != v) / (n - 1)
    if variant == "classic":
        if len(dist) < n:
            return 0.0
        total = sum(d for u, d in dist.items() if u != v)
        return (n - 1) / total if total > 0 else 0.0
    raise ValueError(f"unknown closeness variant: {variant}")


def _betweenness_all(g: CharacterNetwork) -> dict[int, float]:
    """Brandes accumulation over all sources, normalized by (n-1)(n-2)."""
    nodes = g.nodes()
    n = len(nodes)
    between = {v: 0.0 for v in nodes}
    for s in nodes:
        stack: list[int] = []
        pred: dict[int, list[int]] = {v: [] for v in nodes}
        sigma = {v: 0.0 for v in nodes}
        dist = {v: -1 for v in nodes}
        sigma[s] = 1.0
        dist[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            stack.append(u)
            for w in g.neighbors(u):
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    queue.append(w)
                if dist[w] == dist[u] + 1:
                    sigma[w] += sigma[u]
                    pred[w].append(u)
        delta = {v: 0.0 for v in nodes}
        while stack:
            w = stack.pop()
            for u in pred[w]:
                delta[u] += sigma[u] / sigma[w] * (1.0 + delta[w])
            if w != s:
                between[w] += delta[w]
    if n > 2:
        scale = 1.0 / ((n - 1) * (n - 2))  # undirected: raw counts each pair twice
        for v in between:
            between[v] *= scale
    else:
        for v in between:
            between[v] = 0.0
    return between


def _ties_among_neighbors(g: CharacterNetwork, v: int) -> int:
    neighbors = g.neighbors(v)
    neighbor_set = set(neighbors)
    ties = 0
    for u in neighbors:
        ties += sum(1 for w in g.neighbors(u) if w in neighbor_set)
    return ties // 2


def _effective_size(g: CharacterNetwork, v: int) -> float:
    """Redundancy sum over contacts; equal-weight special case of Burt's form."""
    degree = g.degree(v)
    if degree == 0:
        return 0.0
    neighbor_set = set(g.neighbors(v))
    total = 0.0
    for u in neighbor_set:
        shared = sum(1 for w in g.neighbors(u) if w in neighbor_set)
        total += 1.0 - shared / degree
    return total


def node_features(g: CharacterNetwork, v: int, closeness_variant: str = "average_inverse") -> NodeFeatures:
    if v not in g:
        raise UnknownNode(v)
    return all_features(g, closeness_variant)[v]


def all_features(g: CharacterNetwork, closeness_variant: str = "average_inverse") -> dict[int, NodeFeatures]:
    """Features for every node; betweenness computed in one accumulation pass."""
    betweenness = _betweenness_all(g)
    out: dict[int, NodeFeatures] = {}
    for v in g.nodes():
        degree = g.degree(v)
        triangles = _ties_among_neighbors(g, v)
        effective = _effective_size(g, v)
        out[v] = NodeFeatures(
            closeness=_closeness(g, v, closeness_variant),
            betweenness=betweenness[v],
            avg_neighbor_degree=(
                sum(g.degree(u) for u in g.neighbors(v)) / degree if degree > 0 else 0.0
            ),
            effective_size=effective,
            efficiency=effective / degree if degree > 0 else 0.0,
            triangles=triangles,
        )
    return out
