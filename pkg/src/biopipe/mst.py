"""Maximum spanning arborescence decoding for dependency parsing.

``mst_decode`` takes an (n+1) x (n+1) arc score matrix (row = head,
column = dependent, node 0 = artificial root) and returns, for each word,
the head that yields the maximum-total-score arborescence with exactly one
child of the root. The single-root constraint is enforced exactly: each
candidate root child is tried in turn with all other root arcs disabled and
the best-scoring tree is kept.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError, ShapeError

NEG = -1e18  # stands in for -inf so that score arithmetic stays NaN-free


def _greedy_heads(scores: np.ndarray) -> np.ndarray:
    m = scores.shape[0]
    heads = np.zeros(m, dtype=np.intp)
    cols = scores.copy()
    cols[np.arange(m), np.arange(m)] = NEG
    heads[1:] = np.argmax(cols[:, 1:], axis=0)
    return heads


def _find_cycle(heads: np.ndarray) -> list[int] | None:
    m = heads.shape[0]
    color = np.zeros(m, dtype=np.int8)  # 0 unvisited, 1 in progress, 2 done
    color[0] = 2
    for start in range(1, m):
        if color[start]:
            continue
        path = []
        v = start
        while color[v] == 0:
            color[v] = 1
            path.append(v)
            v = int(heads[v])
        if color[v] == 1:
            cycle = path[path.index(v):]
            return cycle
        for u in path:
            color[u] = 2
    return None


def _chu_liu_edmonds(scores: np.ndarray) -> np.ndarray:
    """Unconstrained maximum arborescence rooted at node 0 (dense, recursive)."""
    m = scores.shape[0]
    heads = _greedy_heads(scores)
    cycle = _find_cycle(heads)
    if cycle is None:
        return heads

    in_cycle = np.zeros(m, dtype=bool)
    in_cycle[cycle] = True
    outside = [v for v in range(m) if not in_cycle[v]]
    cyc_id = len(outside)  # the contracted supernode's index
    old_of = outside
    new_of = {v: i for i, v in enumerate(outside)}
    cycle_score = float(sum(scores[heads[v], v] for v in cycle))

    k = len(outside) + 1
    sub = np.full((k, k), NEG)
    for i, vi in enumerate(outside):
        for j, vj in enumerate(outside):
            if i != j:
                sub[i, j] = scores[vi, vj]

    # Arcs entering the cycle: choosing where the external head attaches.
    enter_node = np.zeros(len(outside), dtype=np.intp)
    for i, vi in enumerate(outside):
        gains = [scores[vi, v] - scores[heads[v], v] for v in cycle]
        best = int(np.argmax(gains))
        enter_node[i] = cycle[best]
        sub[i, cyc_id] = cycle_score + gains[best]

    # Arcs leaving the cycle.
    leave_node = np.zeros(len(outside), dtype=np.intp)
    cycle_rows = scores[np.asarray(cycle), :]
    for j, vj in enumerate(outside):
        best = int(np.argmax(cycle_rows[:, vj]))
        leave_node[j] = cycle[best]
        sub[cyc_id, j] = cycle_rows[best, vj]

    sub_heads = _chu_liu_edmonds(sub)

    result = heads.copy()
    for j, vj in enumerate(outside):
        if vj == 0:
            continue
        h = sub_heads[j]
        result[vj] = leave_node[j] if h == cyc_id else old_of[h]
    entry_head = sub_heads[cyc_id]
    broken = int(enter_node[entry_head])
    result[broken] = old_of[entry_head]
    return result


def mst_decode(scores: np.ndarray) -> np.ndarray:
    """Heads (length n, for words 1..n) of the best single-root arborescence.

    Masked cells may be -inf; they are never selected as long as each
    dependent has at least one feasible head. Ties between candidate root
    children are broken toward the lexicographically smallest head vector.
    """
    s = np.asarray(scores, dtype=np.float64)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise ShapeError(f"arc score matrix must be square, got {s.shape}")
    m = s.shape[0]
    if m < 2:
        raise DomainError("mst_decode needs at least one word")
    s = np.where(np.isneginf(s), NEG, s)
    s[np.arange(m), np.arange(m)] = NEG
    s[:, 0] = NEG

    n = m - 1
    if n == 1:
        return np.array([0], dtype=np.intp)

    best_total = -np.inf
    best_heads: np.ndarray | None = None
    for root_child in range(1, m):
        trial = s.copy()
        trial[0, :] = NEG
        trial[0, root_child] = s[0, root_child]
        heads = _chu_liu_edmonds(trial)
        total = float(sum(s[heads[d], d] for d in range(1, m)))
        word_heads = heads[1:].copy()
        if total > best_total or (
            total == best_total
            and best_heads is not None
            and list(word_heads) < list(best_heads)
        ):
            best_total = total
            best_heads = word_heads
    assert best_heads is not None
    return best_heads.astype(np.intp)


def tree_total(scores: np.ndarray, heads: np.ndarray) -> float:
    s = np.asarray(scores, dtype=np.float64)
    return float(sum(s[int(heads[d - 1]), d] for d in range(1, s.shape[0])))


def is_arborescence(heads) -> bool:
    """True when ``heads`` (1-based words, 0 = root) is a valid single-root tree."""
    h = np.asarray(heads, dtype=np.intp)
    n = h.shape[0]
    if n == 0 or np.count_nonzero(h == 0) != 1:
        return False
    if np.any(h < 0) or np.any(h > n):
        return False
    seen = np.zeros(n + 1, dtype=bool)
    seen[0] = True
    for start in range(1, n + 1):
        path = []
        v = start
        while not seen[v]:
            path.append(v)
            v = int(h[v - 1])
            if v in path:
                return False
        for u in path:
            seen[u] = True
    return True
