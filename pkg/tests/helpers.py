"""Shared test utilities: finite differences, brute-force decoders, fixtures."""

from __future__ import annotations

from itertools import product
from typing import Callable

import numpy as np

from biopipe import autodiff as ad
from biopipe.autodiff import Tensor
from biopipe.conllu import ConlluSentence, ConlluWord, Treebank

TINY_SENTENCES = [
    [
        ("The", "the", "DET", "DT", 2, "det"),
        ("cat", "cat", "NOUN", "NN", 3, "nsubj"),
        ("sat", "sit", "VERB", "VBD", 0, "root"),
        (".", ".", "PUNCT", ".", 3, "punct"),
    ],
    [
        ("Dogs", "dog", "NOUN", "NNS", 2, "nsubj"),
        ("bark", "bark", "VERB", "VBP", 0, "root"),
        (".", ".", "PUNCT", ".", 2, "punct"),
    ],
    [
        ("She", "she", "PRON", "PRP", 2, "nsubj"),
        ("saw", "see", "VERB", "VBD", 0, "root"),
        ("it", "it", "PRON", "PRP", 2, "obj"),
        (".", ".", "PUNCT", ".", 2, "punct"),
    ],
    [
        ("He", "he", "PRON", "PRP", 3, "nsubj"),
        ("is", "be", "AUX", "VBZ", 3, "cop"),
        ("tall", "tall", "ADJ", "JJ", 0, "root"),
        (".", ".", "PUNCT", ".", 3, "punct"),
    ],
    [
        ("Cats", "cat", "NOUN", "NNS", 2, "nsubj"),
        ("ran", "run", "VERB", "VBD", 0, "root"),
        ("fast", "fast", "ADV", "RB", 2, "advmod"),
        (".", ".", "PUNCT", ".", 2, "punct"),
    ],
    [
        ("It", "it", "PRON", "PRP", 2, "nsubj"),
        ("rained", "rain", "VERB", "VBD", 0, "root"),
        (".", ".", "PUNCT", ".", 2, "punct"),
    ],
]


def tiny_treebank() -> Treebank:
    """Six short fully annotated sentences laid out in one coordinate space."""
    sentences = []
    offset = 0
    for rows in TINY_SENTENCES:
        words = []
        for i, (form, lemma, upos, xpos, head, deprel) in enumerate(rows, 1):
            words.append(
                ConlluWord(
                    id=i,
                    form=form,
                    lemma=lemma,
                    upos=upos,
                    xpos=xpos,
                    feats="_",
                    head=head,
                    deprel=deprel,
                    deps="_",
                    misc=f"start_char={offset}|end_char={offset + len(form)}",
                )
            )
            offset += len(form) + 1
        text = " ".join(form for form, *_ in rows)
        sentences.append(ConlluSentence(words=words, comments=[f"# text = {text}"]))
    return Treebank(sentences=sentences)


def finite_difference_check(
    loss_fn: Callable[[], Tensor],
    params: dict[str, Tensor],
    step: float = 1e-5,
    tol: float = 1e-4,
) -> float:
    """Compare analytic gradients of ``loss_fn`` with central differences.

    The loss function must be a deterministic function of the parameter
    values. Returns the worst relative error seen; asserts it stays below
    ``tol`` using err = |g - fd| / max(1, |g|, |fd|).
    """
    ad.zero_grads(params.values())
    loss = loss_fn()
    ad.backward(loss, params.values())
    grads = {name: p.grad.copy() for name, p in params.items()}

    worst = 0.0
    for name, p in params.items():
        flat = p.data.reshape(-1)
        gflat = grads[name].reshape(-1)
        for i in range(flat.shape[0]):
            orig = flat[i]
            flat[i] = orig + step
            up = float(loss_fn().data)
            flat[i] = orig - step
            down = float(loss_fn().data)
            flat[i] = orig
            fd = (up - down) / (2 * step)
            g = gflat[i]
            err = abs(g - fd) / max(1.0, abs(g), abs(fd))
            if err > worst:
                worst = err
            assert err < tol, f"{name}[{i}]: analytic {g} vs numeric {fd} (err {err})"
    return worst


def brute_force_crf(emissions: np.ndarray, trans: np.ndarray,
                    start: np.ndarray, stop: np.ndarray):
    """Enumerate all K^L paths; return (log partition, best path, best score).

    Ties in the best path are broken toward the lexicographically smallest
    label sequence (paths are enumerated in that order and only strictly
    better scores replace the incumbent).
    """
    length, k = emissions.shape
    best_path = None
    best_score = -np.inf
    scores = []
    for path in product(range(k), repeat=length):
        s = start[path[0]] + emissions[0, path[0]] + stop[path[-1]]
        for t in range(1, length):
            s += trans[path[t - 1], path[t]] + emissions[t, path[t]]
        scores.append(s)
        if s > best_score:
            best_score = s
            best_path = list(path)
    arr = np.array(scores)
    m = arr.max()
    log_z = m + np.log(np.exp(arr - m).sum())
    return float(log_z), best_path, float(best_score)


def brute_force_mst(scores: np.ndarray):
    """Exhaustive search over single-root arborescences; returns (heads, total)."""
    m = scores.shape[0]
    n = m - 1
    best = None
    best_total = -np.inf
    for combo in product(range(m), repeat=n):
        heads = np.array(combo)
        if np.count_nonzero(heads == 0) != 1:
            continue
        if any(heads[d - 1] == d for d in range(1, m)):
            continue
        if not _acyclic(heads):
            continue
        total = sum(float(scores[heads[d - 1], d]) for d in range(1, m))
        if total > best_total:
            best_total = total
            best = heads
    return best, best_total


def _acyclic(heads: np.ndarray) -> bool:
    n = heads.shape[0]
    for start in range(1, n + 1):
        v = start
        hops = 0
        while v != 0:
            v = int(heads[v - 1])
            hops += 1
            if hops > n:
                return False
    return True
