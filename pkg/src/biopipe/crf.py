"""Linear-chain conditional random field: partition, path scores, Viterbi.

The chain has explicit start and stop score vectors in addition to the K x K
transition matrix, so a path y_1..y_L scores

    start[y_1] + sum_t emissions[t, y_t] + sum_t T[y_{t-1}, y_t] + stop[y_L].
"""

from __future__ import annotations

import numpy as np

from . import autodiff as ad
from .autodiff import Tensor
from .errors import DomainError, ShapeError
from .layers import init_bias, init_weight


class CrfParams:
    """Transition matrix (from x to), start scores, stop scores."""

    def __init__(self, rng: np.random.Generator, num_labels: int):
        if num_labels < 1:
            raise ShapeError("CRF needs at least one label")
        self.num_labels = num_labels
        self.transitions = init_weight(rng, num_labels, num_labels)
        self.start = init_bias(num_labels)
        self.stop = init_bias(num_labels)

    def params(self, prefix: str) -> dict[str, Tensor]:
        return {
            f"{prefix}.transitions": self.transitions,
            f"{prefix}.start": self.start,
            f"{prefix}.stop": self.stop,
        }


def _check_emissions(emissions_shape: tuple[int, ...], k: int) -> int:
    if len(emissions_shape) != 2 or emissions_shape[1] != k:
        raise ShapeError(f"emissions shape {emissions_shape} does not match {k} labels")
    length = emissions_shape[0]
    if length < 1:
        raise DomainError("CRF requires a sequence of length >= 1")
    return length


def crf_log_partition(emissions: Tensor, p: CrfParams) -> Tensor:
    """Log of the summed exponentiated scores of all K^L label paths."""
    k = p.num_labels
    length = _check_emissions(emissions.data.shape, k)
    alpha = p.start + ad.row(emissions, 0)
    for t in range(1, length):
        prev = ad.reshape(alpha, (k, 1))
        step = ad.reshape(ad.row(emissions, t), (1, k))
        alpha = ad.logsumexp(prev + p.transitions + step, axis=0)
    return ad.logsumexp(alpha + p.stop)


def crf_path_score(emissions: Tensor, labels, p: CrfParams) -> Tensor:
    """Differentiable score of one label path."""
    y = np.asarray(labels, dtype=np.intp)
    length = _check_emissions(emissions.data.shape, p.num_labels)
    if y.shape != (length,):
        raise ShapeError(f"labels shape {y.shape} does not match length {length}")
    score = ad.row(p.start, int(y[0]))
    score = score + ad.sum_(ad.pick(emissions, np.arange(length), y))
    if length > 1:
        score = score + ad.sum_(ad.pick(p.transitions, y[:-1], y[1:]))
    return score + ad.row(p.stop, int(y[-1]))


def crf_nll(emissions: Tensor, labels, p: CrfParams) -> Tensor:
    """Negative log-likelihood of the gold path; non-negative."""
    return crf_log_partition(emissions, p) - crf_path_score(emissions, labels, p)


def crf_viterbi(emissions: np.ndarray, p: CrfParams) -> tuple[list[int], float]:
    """Best-scoring label path and its score.

    Ties are broken toward the lowest label index at every backpointer and at
    the final state, so decoding is deterministic.
    """
    k = p.num_labels
    length = _check_emissions(np.shape(emissions), k)
    em = np.asarray(emissions, dtype=np.float64)
    trans = p.transitions.data
    delta = p.start.data + em[0]
    backptr = np.zeros((length, k), dtype=np.intp)
    for t in range(1, length):
        scores = delta[:, None] + trans
        backptr[t] = np.argmax(scores, axis=0)  # first index wins ties
        delta = scores[backptr[t], np.arange(k)] + em[t]
    final = delta + p.stop.data
    last = int(np.argmax(final))
    path = [last]
    for t in range(length - 1, 0, -1):
        last = int(backptr[t][last])
        path.append(last)
    path.reverse()
    return path, float(final[path[-1]])
