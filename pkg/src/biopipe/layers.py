"""Neural building blocks: LSTM cells, bidirectional encoders, biaffine scorers.

Parameter initialization is uniform(-0.1, 0.1) for weights and zeros for
biases, always drawn from a caller-supplied seeded generator so that training
runs are reproducible.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from . import autodiff as ad
from .autodiff import Tensor
from .errors import ShapeError

INIT_SCALE = 0.1


def init_weight(rng: np.random.Generator, *shape: int) -> Tensor:
    return ad.parameter(rng.uniform(-INIT_SCALE, INIT_SCALE, shape))


def init_bias(*shape: int) -> Tensor:
    return ad.parameter(np.zeros(shape))


class Linear:
    """Affine map ``x -> w @ x + b``; applies row-wise to matrices."""

    def __init__(self, rng: np.random.Generator, in_dim: int, out_dim: int):
        self.in_dim = in_dim
        self.out_dim = out_dim
        self.w = init_weight(rng, out_dim, in_dim)
        self.b = init_bias(out_dim)

    def __call__(self, x: Tensor) -> Tensor:
        if x.data.ndim == 1:
            return ad.matmul(self.w, x) + self.b
        return ad.matmul(x, ad.transpose(self.w)) + self.b

    def params(self, prefix: str) -> dict[str, Tensor]:
        return {f"{prefix}.w": self.w, f"{prefix}.b": self.b}


class Embedding:
    """Trainable row-per-symbol lookup table."""

    def __init__(self, rng: np.random.Generator, size: int, dim: int):
        self.size = size
        self.dim = dim
        self.table = init_weight(rng, size, dim)

    def __call__(self, ids) -> Tensor:
        return ad.rows(self.table, ids)

    def one(self, idx: int) -> Tensor:
        return ad.row(self.table, idx)

    def params(self, prefix: str) -> dict[str, Tensor]:
        return {f"{prefix}.table": self.table}


class LstmParams:
    """Weights of one LSTM cell.

    The four gate matrices (input, forget, output, candidate) are stored
    stacked as ``w`` with shape (4*hidden_dim, input_dim + hidden_dim) and the
    gate biases stacked as ``b`` with length 4*hidden_dim; per-gate views are
    exposed through :meth:`gate_weight` / :meth:`gate_bias`.
    """

    GATES = ("input", "forget", "output", "candidate")

    def __init__(self, rng: np.random.Generator, input_dim: int, hidden_dim: int):
        if input_dim <= 0 or hidden_dim <= 0:
            raise ShapeError("LSTM dims must be positive")
        self.input_dim = input_dim
        self.hidden_dim = hidden_dim
        self.w = init_weight(rng, 4 * hidden_dim, input_dim + hidden_dim)
        self.b = init_bias(4 * hidden_dim)

    def gate_weight(self, gate: str) -> np.ndarray:
        i = self.GATES.index(gate)
        h = self.hidden_dim
        return self.w.data[i * h:(i + 1) * h]

    def gate_bias(self, gate: str) -> np.ndarray:
        i = self.GATES.index(gate)
        h = self.hidden_dim
        return self.b.data[i * h:(i + 1) * h]

    def params(self, prefix: str) -> dict[str, Tensor]:
        return {f"{prefix}.w": self.w, f"{prefix}.b": self.b}

    def zero_state(self) -> tuple[Tensor, Tensor]:
        z = np.zeros(self.hidden_dim)
        return ad.constant(z), ad.constant(z.copy())


def lstm_step(x: Tensor, h: Tensor, c: Tensor, p: LstmParams) -> tuple[Tensor, Tensor]:
    """One LSTM recurrence step; returns the new (hidden, cell) state."""
    if x.data.shape != (p.input_dim,):
        raise ShapeError(f"lstm_step: input has shape {x.data.shape}, expected ({p.input_dim},)")
    if h.data.shape != (p.hidden_dim,) or c.data.shape != (p.hidden_dim,):
        raise ShapeError(f"lstm_step: state dims do not match hidden_dim={p.hidden_dim}")
    hd = p.hidden_dim
    z = ad.matmul(p.w, ad.concat([x, h])) + p.b
    i = ad.sigmoid(ad.narrow(z, 0, hd))
    f = ad.sigmoid(ad.narrow(z, hd, 2 * hd))
    o = ad.sigmoid(ad.narrow(z, 2 * hd, 3 * hd))
    g = ad.tanh(ad.narrow(z, 3 * hd, 4 * hd))
    c_new = f * c + i * g
    h_new = o * ad.tanh(c_new)
    return h_new, c_new


def lstm_run(xs: Sequence[Tensor], p: LstmParams) -> list[Tensor]:
    """Run an LSTM over a sequence from zero state; returns hidden states."""
    h, c = p.zero_state()
    out = []
    for x in xs:
        h, c = lstm_step(x, h, c, p)
        out.append(h)
    return out


def bilstm_encode(xs: Sequence[Tensor], fwd: LstmParams, bwd: LstmParams) -> list[Tensor]:
    """Encode a sequence bidirectionally.

    Output ``i`` is the concatenation of the forward state after reading
    ``xs[0..i]`` and the backward state after reading ``xs[i..]``; the empty
    sequence encodes to the empty list.
    """
    if not xs:
        return []
    f_states = lstm_run(xs, fwd)
    b_states = lstm_run(list(reversed(xs)), bwd)
    b_states.reverse()
    return [ad.concat([f, b]) for f, b in zip(f_states, b_states)]


def lstm_run_np(xs: np.ndarray, p: LstmParams) -> np.ndarray:
    """Tape-free LSTM forward over a (length, input_dim) matrix.

    Computes exactly the arithmetic of :func:`lstm_run` and returns the
    (length, hidden_dim) hidden-state matrix. Used on character streams where
    graph construction would dominate the cost.
    """
    hd = p.hidden_dim
    w = p.w.data
    b = p.b.data
    h = np.zeros(hd)
    c = np.zeros(hd)
    out = np.empty((xs.shape[0], hd))
    for t in range(xs.shape[0]):
        z = w @ np.concatenate([xs[t], h]) + b
        i = 1.0 / (1.0 + np.exp(-z[:hd]))
        f = 1.0 / (1.0 + np.exp(-z[hd : 2 * hd]))
        o = 1.0 / (1.0 + np.exp(-z[2 * hd : 3 * hd]))
        g = np.tanh(z[3 * hd :])
        c = f * c + i * g
        h = o * np.tanh(c)
        out[t] = h
    return out


def bilstm_encode_np(xs: np.ndarray, fwd: LstmParams, bwd: LstmParams) -> np.ndarray:
    """Tape-free counterpart of :func:`bilstm_encode`; returns (length, 2H)."""
    if xs.shape[0] == 0:
        return np.zeros((0, fwd.hidden_dim + bwd.hidden_dim))
    f = lstm_run_np(xs, fwd)
    b = lstm_run_np(xs[::-1], bwd)[::-1]
    return np.concatenate([f, b], axis=1)


class BiaffineParams:
    """Bilinear-plus-linear scorer between two input vectors.

    ``U`` has shape (left_dim, right_dim, out_dim), ``w`` maps the
    concatenated inputs to ``out_dim`` scores and ``b`` is the output bias.
    """

    def __init__(self, rng: np.random.Generator, left_dim: int, right_dim: int, out_dim: int):
        self.left_dim = left_dim
        self.right_dim = right_dim
        self.out_dim = out_dim
        # Stored flattened as (left_dim, right_dim * out_dim) for matmul.
        self.u = init_weight(rng, left_dim, right_dim * out_dim)
        self.w = init_weight(rng, out_dim, left_dim + right_dim)
        self.b = init_bias(out_dim)

    @property
    def u_tensor(self) -> np.ndarray:
        return self.u.data.reshape(self.left_dim, self.right_dim, self.out_dim)

    def params(self, prefix: str) -> dict[str, Tensor]:
        return {f"{prefix}.u": self.u, f"{prefix}.w": self.w, f"{prefix}.b": self.b}


def biaffine_score(left: Tensor, right: Tensor, p: BiaffineParams) -> Tensor:
    """Score a (left, right) pair: ``left' U[:,:,o] right + w [left;right] + b``."""
    if left.data.shape != (p.left_dim,):
        raise ShapeError(f"biaffine left input {left.data.shape} != ({p.left_dim},)")
    if right.data.shape != (p.right_dim,):
        raise ShapeError(f"biaffine right input {right.data.shape} != ({p.right_dim},)")
    mixed = ad.reshape(ad.matmul(left, p.u), (p.right_dim, p.out_dim))
    bilinear = ad.matmul(right, mixed)
    linear = ad.matmul(p.w, ad.concat([left, right]))
    return bilinear + linear + p.b


def biaffine_matrix(lefts: Tensor, rights: Tensor, p: BiaffineParams) -> Tensor:
    """All-pairs scores for out_dim == 1.

    ``lefts`` is (n, left_dim), ``rights`` is (m, right_dim); the result is
    (n, m) with entry [i, j] equal to ``biaffine_score(lefts[i], rights[j])``.
    """
    if p.out_dim != 1:
        raise ShapeError("biaffine_matrix requires out_dim == 1")
    u = ad.reshape(p.u, (p.left_dim, p.right_dim))
    bilinear = ad.matmul(ad.matmul(lefts, u), ad.transpose(rights))
    w_left = ad.narrow(ad.transpose(p.w), 0, p.left_dim)
    w_right = ad.narrow(ad.transpose(p.w), p.left_dim, p.left_dim + p.right_dim)
    n = lefts.data.shape[0]
    m = rights.data.shape[0]
    left_term = ad.reshape(ad.matmul(lefts, w_left), (n, 1))
    right_term = ad.reshape(ad.matmul(rights, w_right), (1, m))
    return bilinear + left_term + right_term + p.b
