"""Brute-force reference implementations used only by the tests.

Nothing here imports the package's metric code; graphs are plain edge sets
over ``range(n)``.
"""

from fractions import Fraction
from itertools import combinations

import numpy as np


def random_graph(n, p, rng):
    return {(i, j) for i, j in combinations(range(n), 2) if rng.random() < p}


def adjacency(n, edges):
    A = np.zeros((n, n), dtype=bool)
    for i, j in edges:
        A[i, j] = A[j, i] = True
    return A


def neighbor_sets(n, edges):
    nb = [set() for _ in range(n)]
    for i, j in edges:
        nb[i].add(j)
        nb[j].add(i)
    return nb


def floyd_warshall(n, edges):
    INF = float("inf")
    D = [[0 if i == j else INF for j in range(n)] for i in range(n)]
    for i, j in edges:
        D[i][j] = D[j][i] = 1
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if D[i][k] + D[k][j] < D[i][j]:
                    D[i][j] = D[i][k] + D[k][j]
    return D


def all_shortest_paths(n, edges, s, t):
    """Every shortest s-t path, by growing all walks from s one hop at a time
    until some reach t (walks of minimal length are simple paths)."""
    nb = neighbor_sets(n, edges)
    frontier = [(s,)]
    for _ in range(n):
        frontier = [p + (w,) for p in frontier for w in nb[p[-1]] if w not in p]
        hits = [p for p in frontier if p[-1] == t]
        if hits:
            return hits
        if not frontier:
            break
    return []


def betweenness(n, edges):
    bc = [Fraction(0)] * n
    for s, t in combinations(range(n), 2):
        paths = all_shortest_paths(n, edges, s, t)
        if not paths:
            continue
        for v in range(n):
            if v in (s, t):
                continue
            through = sum(1 for p in paths if v in p)
            bc[v] += Fraction(through, len(paths))
    return bc


def eccentricity_avg_diameter(n, edges):
    D = floyd_warshall(n, edges)
    ecc, avg = [], []
    for i in range(n):
        reach = [D[i][j] for j in range(n) if j != i and D[i][j] != float("inf")]
        ecc.append(max(reach) if reach else 0)
        avg.append(Fraction(sum(reach), len(reach)) if reach else Fraction(0))
    return ecc, avg, max(ecc) if ecc else 0


def degrees(n, edges):
    deg = [0] * n
    for i, j in edges:
        deg[i] += 1
        deg[j] += 1
    return deg


def avg_neighbor_degree(n, edges):
    nb = neighbor_sets(n, edges)
    deg = degrees(n, edges)
    return [Fraction(sum(deg[u] for u in nb[v]), len(nb[v])) if nb[v] else Fraction(0) for v in range(n)]


def clustering(n, edges):
    nb = neighbor_sets(n, edges)
    out = []
    for v in range(n):
        k = len(nb[v])
        if k < 2:
            out.append(Fraction(0))
            continue
        tri = sum(1 for a, b in combinations(sorted(nb[v]), 2) if b in nb[a])
        out.append(Fraction(tri, k * (k - 1) // 2))
    return out


def assortativity(n, edges):
    """Pearson correlation written out term by term over both edge orientations."""
    deg = degrees(n, edges)
    xs, ys = [], []
    for i, j in edges:
        xs += [deg[i], deg[j]]
        ys += [deg[j], deg[i]]
    if not xs:
        return 0.0
    m = len(xs)
    mx, my = sum(xs) / m, sum(ys) / m
    cov = sum((a - mx) * (b - my) for a, b in zip(xs, ys))
    vx = sum((a - mx) ** 2 for a in xs)
    vy = sum((b - my) ** 2 for b in ys)
    if vx * vy < 1e-12:
        return 0.0
    return cov / (vx * vy) ** 0.5


def pagerank_dense(n, edges, d=0.85):
    """Solve (I - d P) x = (1 - d)/n * 1 with dangling nodes teleporting."""
    A = adjacency(n, edges).astype(float)
    deg = A.sum(axis=0)
    P = np.zeros((n, n))
    for j in range(n):
        P[:, j] = A[:, j] / deg[j] if deg[j] else 1.0 / n
    return np.linalg.solve(np.eye(n) - d * P, np.full(n, (1 - d) / n))


def eigenvector_dense(n, edges, tol=1e-9):
    """Projection of the all-ones vector onto the top eigenspace of A,
    L2-normalised (the limit of power iteration started from ones)."""
    A = adjacency(n, edges).astype(float)
    w, V = np.linalg.eigh(A)
    top = V[:, w > w.max() - tol]
    x = top @ (top.T @ np.ones(n))
    return x / np.linalg.norm(x)
