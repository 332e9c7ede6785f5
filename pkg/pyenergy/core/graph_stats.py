r"""
Multivariate two-sample statistics based on proximity graphs of the pooled sample:
the number of cross-sample edges of the minimum spanning tree (Friedman-Rafsky) and
the number of observations whose nearest neighbor belongs to the same sample.

Both graphs depend only on the pooled geometry, so they are built once per pool and
reused for all relabelings.
"""
from dataclasses import dataclass
import numpy as np

from .errors import InsufficientSample

import logging
logger = logging.getLogger()


@dataclass(frozen=True, eq=False)
class EdgeList:
    r"""
    List of graph edges. Edge ``k`` connects the observations ``i[k] < j[k]`` and has
    the length ``weight[k]``.
    """
    i: np.ndarray
    j: np.ndarray
    weight: np.ndarray

    @property
    def count(self):
        return int(self.i.size)

    @property
    def edges(self):
        """List of edges as tuples ``(i, j, weight)``"""
        return list(zip(self.i.tolist(), self.j.tolist(), self.weight.tolist()))

    @property
    def total_weight(self):
        return float(np.sum(self.weight))


def minimum_spanning_tree(dm):
    r"""
    Builds the Euclidean minimum spanning tree of the pooled sample (dense Prim algorithm,
    O(N**2) time).

    Edges are compared by ``(weight, i, j)``, where ``i < j`` are the indices of
    the connected observations. With this order the minimum spanning tree is unique:
    among trees of equal total length the lexicographically smallest set of edges is
    selected.

    Parameters
    ----------

    dm : DistanceMatrix
        distances between the pooled observations

    Returns
    -------

    EdgeList
        ``N - 1`` edges in the order they were added to the tree

    Raises
    ------

    InsufficientSample
        the pool contains less than 2 observations
    """
    dist = dm.dist
    n_pts = dist.shape[0]
    if n_pts < 2:
        raise InsufficientSample(f"Spanning tree requires at least 2 observations: N={n_pts}")

    in_tree = np.zeros(n_pts, dtype=bool)
    in_tree[0] = True
    indices = np.arange(n_pts)

    # The best known edge connecting each vertex to the tree: (weight, i, j)
    best_w = dist[0].copy()
    best_i = np.zeros(n_pts, dtype=int)
    best_j = indices.copy()

    edges_i, edges_j, edges_w = [], [], []
    for _ in range(n_pts - 1):
        candidates = np.flatnonzero(~in_tree)
        # Lexicographic order: the last key is the primary one
        k = np.lexsort((best_j[candidates], best_i[candidates], best_w[candidates]))[0]
        v = int(candidates[k])
        edges_i.append(int(best_i[v]))
        edges_j.append(int(best_j[v]))
        edges_w.append(float(best_w[v]))
        in_tree[v] = True

        # Offer the edges (v, u) to the vertices that are not in the tree yet
        w_new = dist[v]
        i_new = np.minimum(indices, v)
        j_new = np.maximum(indices, v)
        tie = (w_new == best_w) & ((i_new < best_i) | ((i_new == best_i) & (j_new < best_j)))
        better = (w_new < best_w) | tie
        better &= ~in_tree
        best_w[better] = w_new[better]
        best_i[better] = i_new[better]
        best_j[better] = j_new[better]

    return EdgeList(i=np.array(edges_i, dtype=int), j=np.array(edges_j, dtype=int),
                    weight=np.array(edges_w, dtype=float))


def friedman_rafsky_statistic(mst, labels):
    r"""
    The number of edges of the minimum spanning tree that connect observations
    from different samples. Small values lead to rejection of the null hypothesis.

    Parameters
    ----------

    mst : EdgeList
        minimum spanning tree of the pooled sample

    labels : array-like(bool)
        labels of the pooled observations

    Returns
    -------

    int
    """
    labels = np.asarray(labels, dtype=bool)
    return int(friedman_rafsky_block(mst, labels.reshape(1, -1))[0])


def friedman_rafsky_block(mst, labels_block):
    r"""
    Computes the Friedman-Rafsky statistic for each row of the ``(K, N)`` block of labelings.
    Returns integer array of size K.
    """
    labels_block = np.asarray(labels_block, dtype=bool)
    return np.count_nonzero(labels_block[:, mst.i] != labels_block[:, mst.j], axis=1)


def nearest_neighbors(dm):
    r"""
    Finds the nearest neighbor of each observation of the pool. If several observations
    are at the same distance, the one with the smallest index is selected.

    Returns
    -------

    ndarray(int)
        array of N indices

    Raises
    ------

    InsufficientSample
        the pool contains less than 2 observations
    """
    if dm.N < 2:
        raise InsufficientSample(f"Nearest neighbor search requires at least 2 observations: N={dm.N}")
    dist = np.array(dm.dist)
    np.fill_diagonal(dist, np.inf)
    # 'argmin' returns the first occurrence of the minimum
    return np.argmin(dist, axis=1)


def nearest_neighbor_statistic(dm, labels, *, neighbors=None):
    r"""
    The number of observations whose nearest neighbor (Euclidean norm) belongs to the same
    sample. Large values lead to rejection of the null hypothesis.

    Parameters
    ----------

    dm : DistanceMatrix
        distances between the pooled observations

    labels : array-like(bool)
        labels of the pooled observations

    neighbors : ndarray or None
        precomputed result of ``nearest_neighbors(dm)``

    Returns
    -------

    int
    """
    if neighbors is None:
        neighbors = nearest_neighbors(dm)
    labels = np.asarray(labels, dtype=bool)
    return int(nearest_neighbor_block(neighbors, labels.reshape(1, -1))[0])


def nearest_neighbor_block(neighbors, labels_block):
    r"""
    Computes the nearest neighbor statistic for each row of the ``(K, N)`` block of labelings.
    Returns integer array of size K.
    """
    labels_block = np.asarray(labels_block, dtype=bool)
    return np.count_nonzero(labels_block == labels_block[:, neighbors], axis=1)
