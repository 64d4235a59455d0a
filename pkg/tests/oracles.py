"""Brute-force reference implementations used only by the test suite.

These deliberately avoid the algorithms used by the package (Hungarian
assignment, Brandes accumulation, BFS) so that agreement is meaningful:
cluster alignment is enumerated, distances come from Floyd-Warshall, and
shortest paths are listed explicitly by bounded depth-first search.
"""

from __future__ import annotations

from itertools import combinations

INF = float("inf")


# ---------------------------------------------------------------------------
# cluster metrics
# ---------------------------------------------------------------------------


def muc_brute(gold: list[set], pred: list[set]) -> tuple[float, float, float]:
    def side(clusters, other):
        num = den = 0
        for cluster in clusters:
            touched = 0
            for other_cluster in other:
                if cluster & other_cluster:
                    touched += 1
            num += len(cluster) - touched
            den += len(cluster) - 1
        return num, den

    r_num, r_den = side(gold, pred)
    p_num, p_den = side(pred, gold)
    recall = r_num / r_den if r_den else 0.0
    precision = p_num / p_den if p_den else 0.0
    f = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f


def b_cubed_brute(gold: list[set], pred: list[set]) -> tuple[float, float, float]:
    items = sorted({i for c in gold for i in c})
    r_total = p_total = 0.0
    for item in items:
        g = next(c for c in gold if item in c)
        p = next(c for c in pred if item in c)
        overlap = len(g & p)
        r_total += overlap / len(g)
        p_total += overlap / len(p)
    recall = r_total / len(items)
    precision = p_total / len(items)
    f = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f


def _phi4(g: set, p: set) -> float:
    return 2 * len(g & p) / (len(g) + len(p))


def ceaf_best_total_enumeration(gold: list[set], pred: list[set]) -> float:
    """Exhaustive one-to-one alignment search by recursive enumeration."""

    def best(i: int, used: frozenset) -> float:
        if i == len(gold):
            return 0.0
        top = best(i + 1, used)  # leave gold cluster i unaligned
        for j in range(len(pred)):
            if j not in used:
                top = max(top, _phi4(gold[i], pred[j]) + best(i + 1, used | {j}))
        return top

    return best(0, frozenset())


def ceaf_best_total_bitmask(gold: list[set], pred: list[set]) -> float:
    """Same maximum via dynamic programming over pred subsets."""
    n_pred = len(pred)
    current = {0: 0.0}
    for g in gold:
        following = dict(current)
        for mask, total in current.items():
            for j in range(n_pred):
                bit = 1 << j
                if mask & bit:
                    continue
                candidate = total + _phi4(g, pred[j])
                key = mask | bit
                if candidate > following.get(key, -1.0):
                    following[key] = candidate
        current = following
    return max(current.values())


def ceaf_phi4_brute(gold: list[set], pred: list[set], exhaustive: bool = False) -> tuple[float, float, float]:
    if not gold or not pred:
        return 0.0, 0.0, 0.0
    total = ceaf_best_total_enumeration(gold, pred) if exhaustive else ceaf_best_total_bitmask(gold, pred)
    recall = total / len(gold)
    precision = total / len(pred)
    f = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f


# ---------------------------------------------------------------------------
# graph measures (adjacency given as dict node -> set of neighbors)
# ---------------------------------------------------------------------------


def floyd_warshall(adj: dict[int, set[int]]) -> dict[tuple[int, int], float]:
    nodes = sorted(adj)
    dist = {(u, v): 0 if u == v else (1 if v in adj[u] else INF) for u in nodes for v in nodes}
    for k in nodes:
        for i in nodes:
            for j in nodes:
                through = dist[i, k] + dist[k, j]
                if through < dist[i, j]:
                    dist[i, j] = through
    return dist


def enumerate_geodesics(adj: dict[int, set[int]], s: int, t: int, length: float) -> list[tuple[int, ...]]:
    """All simple paths from s to t of exactly the given length."""
    if length == INF:
        return []
    paths: list[tuple[int, ...]] = []

    def walk(node: int, path: tuple[int, ...]):
        if len(path) - 1 > length:
            return
        if node == t:
            if len(path) - 1 == length:
                paths.append(path)
            return
        for nxt in sorted(adj[node]):
            if nxt not in path:
                walk(nxt, path + (nxt,))

    walk(s, (s,))
    return paths


def closeness_oracle(adj: dict[int, set[int]], v: int) -> float:
    n = len(adj)
    if n <= 1:
        return 0.0
    dist = floyd_warshall(adj)
    total = sum(1.0 / dist[v, u] for u in adj if u != v and dist[v, u] != INF)
    return total / (n - 1)


def betweenness_oracle(adj: dict[int, set[int]], v: int) -> float:
    """Fraction of geodesics through v, averaged over pairs, by enumeration."""
    nodes = sorted(adj)
    n = len(nodes)
    if n <= 2:
        return 0.0
    dist = floyd_warshall(adj)
    total = 0.0
    for s, t in combinations([u for u in nodes if u != v], 2):
        geodesics = enumerate_geodesics(adj, s, t, dist[s, t])
        if not geodesics:
            continue
        through = sum(1 for path in geodesics if v in path[1:-1])
        total += through / len(geodesics)
    return total / ((n - 1) * (n - 2) / 2)


def triangles_oracle(adj: dict[int, set[int]], v: int) -> int:
    nodes = sorted(adj)
    count = 0
    for a, b in combinations(nodes, 2):
        if a == v or b == v:
            continue
        if a in adj[v] and b in adj[v] and b in adj[a]:
            count += 1
    return count


def effective_size_oracle(adj: dict[int, set[int]], v: int) -> float:
    degree = len(adj[v])
    if degree == 0:
        return 0.0
    ties = 0
    for a, b in combinations(sorted(adj[v]), 2):
        if b in adj[a]:
            ties += 1
    return degree - (2 * ties) / degree


def avg_neighbor_degree_oracle(adj: dict[int, set[int]], v: int) -> float:
    if not adj[v]:
        return 0.0
    return sum(len(adj[u]) for u in adj[v]) / len(adj[v])
