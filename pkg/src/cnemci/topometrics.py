"""Topological measurements of word networks and their aggregation.

Eight node-level measurements are summarised by mean, standard deviation and
skewness; assortativity and diameter are graph-level and passed through.
That gives a 26-dimensional feature vector per network whose column order
is :data:`FEATURE_NAMES`.

All distances are unweighted hop counts.  On disconnected graphs, node
measurements that depend on distances only look at the nodes each node can
reach.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .netbuild import Network

__all__ = [
    "NODE_METRICS",
    "FEATURE_NAMES",
    "PageRankResult",
    "EigenvectorResult",
    "NodeMetricSet",
    "GraphMetricSet",
    "TopoFeatureVector",
    "pagerank",
    "betweenness",
    "distance_matrix",
    "shortest_path_stats",
    "eigenvector_centrality",
    "degree_stats",
    "assortativity_degenerate",
    "clustering",
    "node_metrics",
    "graph_metrics",
    "moments",
    "aggregate",
    "topo_features",
]

NODE_METRICS = (
    "pagerank",
    "betweenness",
    "eccentricity",
    "eigenvector_centrality",
    "avg_neighbor_degree",
    "avg_shortest_path",
    "degree",
    "clustering",
)
FEATURE_NAMES = tuple(
    f"{m}_{s}" for m in NODE_METRICS for s in ("mean", "std", "skew")
) + ("assortativity", "diameter")

_SKEW_EPS = 1e-12


class PageRankResult(NamedTuple):
    values: np.ndarray
    converged: bool
    iterations: int


class EigenvectorResult(NamedTuple):
    values: np.ndarray
    converged: bool
    degenerate: bool


def _adj(net) -> np.ndarray:
    return net.adjacency if isinstance(net, Network) else np.asarray(net, dtype=bool)


def pagerank(net, damping: float = 0.85, max_iter: int = 1000,
             tol: float = 1e-12) -> PageRankResult:
    """Power iteration with uniform teleport.

    A node without edges spreads its mass uniformly over all nodes.  Stops
    when the L1 change between iterates drops below ``tol``.
    """
    A = _adj(net).astype(float)
    n = A.shape[0]
    if n == 0:
        raise ValueError("pagerank of an empty network")
    if not (0.0 < damping < 1.0):
        raise ValueError("damping must be in (0, 1)")
    deg = A.sum(axis=0)
    dangling = deg == 0
    # column-stochastic transition matrix
    M = np.divide(A, deg, out=np.zeros_like(A), where=~dangling)
    x = np.full(n, 1.0 / n)
    for it in range(1, max_iter + 1):
        new = damping * (M @ x + x[dangling].sum() / n) + (1.0 - damping) / n
        new /= new.sum()
        delta = np.abs(new - x).sum()
        x = new
        if delta < tol:
            return PageRankResult(x, True, it)
    return PageRankResult(x, False, max_iter)


def _neighbors(A: np.ndarray) -> list[list[int]]:
    return [np.flatnonzero(row).tolist() for row in A]


def betweenness(net) -> np.ndarray:
    """Sum over unordered pairs {s, t} (s, t != v) of sigma_st(v) / sigma_st.

    Brandes' accumulation; each unordered pair is visited from both ends,
    hence the final halving.  Not normalised by the number of pairs.
    """
    A = _adj(net)
    n = A.shape[0]
    nbrs = _neighbors(A)
    cb = np.zeros(n)
    for s in range(n):
        stack = []
        preds: list[list[int]] = [[] for _ in range(n)]
        sigma = np.zeros(n)
        sigma[s] = 1.0
        dist = np.full(n, -1)
        dist[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            stack.append(v)
            for w in nbrs[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = np.zeros(n)
        while stack:
            w = stack.pop()
            for v in preds[w]:
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            if w != s:
                cb[w] += delta[w]
    return cb / 2.0


def distance_matrix(net) -> np.ndarray:
    """All-pairs hop distances by BFS; -1 marks unreachable pairs."""
    A = _adj(net)
    n = A.shape[0]
    nbrs = _neighbors(A)
    D = np.full((n, n), -1, dtype=int)
    for s in range(n):
        D[s, s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for w in nbrs[v]:
                if D[s, w] < 0:
                    D[s, w] = D[s, v] + 1
                    queue.append(w)
    return D


def shortest_path_stats(net) -> tuple[np.ndarray, np.ndarray, int]:
    """Eccentricity, mean distance to reachable nodes, and diameter.

    An isolated node gets eccentricity 0 and mean distance 0; the diameter is
    the largest finite eccentricity.
    """
    D = distance_matrix(net)
    n = D.shape[0]
    ecc = np.zeros(n)
    avg = np.zeros(n)
    for v in range(n):
        reach = D[v][(D[v] > 0)]
        if reach.size:
            ecc[v] = reach.max()
            avg[v] = reach.mean()
    diameter = int(ecc.max()) if n else 0
    return ecc, avg, diameter


def eigenvector_centrality(net, max_iter: int = 10000,
                           tol: float = 1e-13) -> EigenvectorResult:
    """Leading eigenvector of the adjacency matrix, L2-normalised.

    Iterates with ``A + I`` rather than ``A``: the eigenvectors are the same,
    but the shift stops the oscillation power iteration shows on bipartite
    graphs (paths, stars, even cycles).  Starts from the uniform vector.
    """
    A = _adj(net).astype(float)
    n = A.shape[0]
    if n == 0 or not A.any():
        return EigenvectorResult(np.zeros(n), True, True)
    B = A + np.eye(n)
    x = np.full(n, 1.0 / np.sqrt(n))
    for _ in range(max_iter):
        new = B @ x
        new /= np.linalg.norm(new)
        delta = np.abs(new - x).max()
        x = new
        if delta < tol:
            return EigenvectorResult(x, True, False)
    return EigenvectorResult(x, False, False)


def degree_stats(net) -> tuple[np.ndarray, np.ndarray, float]:
    """Degree, mean neighbour degree, and degree assortativity.

    Assortativity is the Pearson correlation between the degrees at the two
    ends of every edge, with each edge counted in both directions.  It is 0
    when there are no edges or all edge endpoints share one degree.
    """
    A = _adj(net)
    deg = A.sum(axis=1).astype(float)
    nbr_sum = A.astype(float) @ deg
    avg_nbr = np.divide(nbr_sum, deg, out=np.zeros_like(deg), where=deg > 0)
    xc, yc, denom = _endpoint_degrees(A, deg)
    if denom < 1e-12:
        return deg, avg_nbr, 0.0
    r = float((xc * yc).sum() / denom)
    return deg, avg_nbr, min(1.0, max(-1.0, r))


def _endpoint_degrees(A, deg):
    i, j = np.nonzero(A)  # both orientations
    if i.size == 0:
        return None, None, 0.0
    x, y = deg[i], deg[j]
    xc, yc = x - x.mean(), y - y.mean()
    return xc, yc, float(np.sqrt((xc * xc).sum() * (yc * yc).sum()))


def assortativity_degenerate(net) -> bool:
    """True when assortativity falls back to 0: no edges, or every edge
    endpoint has the same degree (regular graphs)."""
    A = _adj(net)
    return _endpoint_degrees(A, A.sum(axis=1).astype(float))[2] < 1e-12


def clustering(net) -> np.ndarray:
    """Local clustering: triangles through v over C(deg(v), 2); 0 below degree 2."""
    A = _adj(net).astype(float)
    deg = A.sum(axis=1)
    tri = np.einsum("ij,jk,ki->i", A, A, A) / 2.0
    pairs = deg * (deg - 1) / 2.0
    return np.divide(tri, pairs, out=np.zeros_like(tri), where=deg >= 2)


@dataclass(frozen=True)
class NodeMetricSet:
    pagerank: np.ndarray
    betweenness: np.ndarray
    eccentricity: np.ndarray
    eigenvector_centrality: np.ndarray
    avg_neighbor_degree: np.ndarray
    avg_shortest_path: np.ndarray
    degree: np.ndarray
    clustering: np.ndarray

    def as_dict(self) -> dict[str, np.ndarray]:
        return {m: getattr(self, m) for m in NODE_METRICS}


@dataclass(frozen=True)
class GraphMetricSet:
    assortativity: float
    diameter: int


@dataclass(frozen=True)
class TopoFeatureVector:
    names: tuple[str, ...]
    values: np.ndarray

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.names, self.values.tolist()))


def node_metrics(net, damping: float = 0.85) -> tuple[NodeMetricSet, GraphMetricSet]:
    ecc, avg_sp, diameter = shortest_path_stats(net)
    deg, avg_nbr, assort = degree_stats(net)
    nodes = NodeMetricSet(
        pagerank=pagerank(net, damping=damping).values,
        betweenness=betweenness(net),
        eccentricity=ecc,
        eigenvector_centrality=eigenvector_centrality(net).values,
        avg_neighbor_degree=avg_nbr,
        avg_shortest_path=avg_sp,
        degree=deg,
        clustering=clustering(net),
    )
    return nodes, GraphMetricSet(assort, diameter)


def graph_metrics(net) -> GraphMetricSet:
    return GraphMetricSet(degree_stats(net)[2], shortest_path_stats(net)[2])


def moments(values) -> tuple[float, float, float]:
    """Population mean, standard deviation and skewness.

    Skewness is m3 / m2**1.5, defined as 0 when m2 < 1e-12.
    """
    x = np.asarray(values, dtype=float)
    if x.size == 0:
        raise ValueError("moments of an empty series")
    mu = float(x.mean())
    d = x - mu
    m2 = float((d * d).mean())
    m3 = float((d * d * d).mean())
    gamma = 0.0 if m2 < _SKEW_EPS else m3 / m2 ** 1.5
    return mu, float(np.sqrt(m2)), gamma


def aggregate(node: NodeMetricSet, graph: GraphMetricSet) -> TopoFeatureVector:
    vals = []
    for m in NODE_METRICS:
        vals.extend(moments(getattr(node, m)))
    vals.append(float(graph.assortativity))
    vals.append(float(graph.diameter))
    return TopoFeatureVector(FEATURE_NAMES, np.array(vals))


def topo_features(net: Network, damping: float = 0.85) -> TopoFeatureVector:
    """The 26 aggregated measurements of one network."""
    return aggregate(*node_metrics(net, damping=damping))
