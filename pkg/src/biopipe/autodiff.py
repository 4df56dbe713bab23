"""Reverse-mode automatic differentiation over numpy arrays.

A :class:`Tensor` wraps a float64 ndarray. Operations build a dynamic graph
(each result remembers its parents and a backward closure); :func:`backward`
walks the graph in reverse topological order and accumulates gradients into
``.grad`` of every reachable tensor with ``requires_grad``.

All training runs in 64-bit so that gradients can be validated against central
finite differences.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import ContractError, ShapeError

Array = np.ndarray


def _as_array(value) -> Array:
    if isinstance(value, np.ndarray):
        if value.dtype != np.float64:
            return value.astype(np.float64)
        return value
    return np.asarray(value, dtype=np.float64)


class Tensor:
    """A node in the computation graph holding a float64 array."""

    __slots__ = ("data", "grad", "requires_grad", "_parents", "_backward")

    def __init__(self, data, requires_grad: bool = False, _parents=(), _backward=None):
        self.data: Array = _as_array(data)
        self.grad: Array | None = None
        self.requires_grad = requires_grad
        self._parents = _parents
        self._backward = _backward

    @property
    def shape(self) -> tuple[int, ...]:
        return self.data.shape

    def item(self) -> float:
        return float(self.data)

    def __repr__(self) -> str:
        return f"Tensor(shape={self.data.shape}, requires_grad={self.requires_grad})"

    # Operator sugar; constants are wrapped as non-differentiable tensors.
    def __add__(self, other):
        return add(self, _wrap(other))

    def __radd__(self, other):
        return add(_wrap(other), self)

    def __sub__(self, other):
        return sub(self, _wrap(other))

    def __rsub__(self, other):
        return sub(_wrap(other), self)

    def __mul__(self, other):
        return mul(self, _wrap(other))

    def __rmul__(self, other):
        return mul(_wrap(other), self)

    def __neg__(self):
        return mul(self, _wrap(-1.0))

    def __matmul__(self, other):
        return matmul(self, other)


def _wrap(value) -> Tensor:
    return value if isinstance(value, Tensor) else Tensor(value)


def constant(value) -> Tensor:
    return Tensor(value)


def parameter(data) -> Tensor:
    return Tensor(data, requires_grad=True)


def _accumulate(t: Tensor, g: Array) -> None:
    if t.grad is None:
        t.grad = np.zeros_like(t.data)
    t.grad += g


def _unbroadcast(g: Array, shape: tuple[int, ...]) -> Array:
    """Sum gradient ``g`` down to ``shape`` (inverse of numpy broadcasting)."""
    if g.shape == shape:
        return g
    extra = g.ndim - len(shape)
    if extra > 0:
        g = g.sum(axis=tuple(range(extra)))
    axes = tuple(i for i, n in enumerate(shape) if n == 1 and g.shape[i] != 1)
    if axes:
        g = g.sum(axis=axes, keepdims=True)
    return g


def _node(data: Array, parents: Sequence[Tensor], backward) -> Tensor:
    if any(p.requires_grad for p in parents):
        return Tensor(data, requires_grad=True, _parents=tuple(parents), _backward=backward)
    return Tensor(data)


# ---------------------------------------------------------------------------
# Elementwise / broadcast arithmetic
# ---------------------------------------------------------------------------

def add(a: Tensor, b: Tensor) -> Tensor:
    out_data = a.data + b.data

    def bwd(g):
        if a.requires_grad:
            _accumulate(a, _unbroadcast(g, a.data.shape))
        if b.requires_grad:
            _accumulate(b, _unbroadcast(g, b.data.shape))

    return _node(out_data, (a, b), bwd)


def sub(a: Tensor, b: Tensor) -> Tensor:
    out_data = a.data - b.data

    def bwd(g):
        if a.requires_grad:
            _accumulate(a, _unbroadcast(g, a.data.shape))
        if b.requires_grad:
            _accumulate(b, _unbroadcast(-g, b.data.shape))

    return _node(out_data, (a, b), bwd)


def mul(a: Tensor, b: Tensor) -> Tensor:
    out_data = a.data * b.data

    def bwd(g):
        if a.requires_grad:
            _accumulate(a, _unbroadcast(g * b.data, a.data.shape))
        if b.requires_grad:
            _accumulate(b, _unbroadcast(g * a.data, b.data.shape))

    return _node(out_data, (a, b), bwd)


def matmul(a: Tensor, b: Tensor) -> Tensor:
    """Matrix product for 1-D/2-D operands with standard numpy semantics."""
    ad, bd = a.data, b.data
    if ad.ndim not in (1, 2) or bd.ndim not in (1, 2):
        raise ShapeError(f"matmul supports 1-D/2-D operands, got {ad.ndim}-D @ {bd.ndim}-D")
    if ad.shape[-1] != bd.shape[0]:
        raise ShapeError(f"matmul dimension mismatch: {ad.shape} @ {bd.shape}")
    out_data = ad @ bd

    def bwd(g):
        if a.requires_grad:
            if ad.ndim == 2 and bd.ndim == 2:
                _accumulate(a, g @ bd.T)
            elif ad.ndim == 2 and bd.ndim == 1:
                _accumulate(a, np.outer(g, bd))
            elif ad.ndim == 1 and bd.ndim == 2:
                _accumulate(a, bd @ g)
            else:
                _accumulate(a, g * bd)
        if b.requires_grad:
            if ad.ndim == 2 and bd.ndim == 2:
                _accumulate(b, ad.T @ g)
            elif ad.ndim == 2 and bd.ndim == 1:
                _accumulate(b, ad.T @ g)
            elif ad.ndim == 1 and bd.ndim == 2:
                _accumulate(b, np.outer(ad, g))
            else:
                _accumulate(b, g * ad)

    return _node(out_data, (a, b), bwd)


# ---------------------------------------------------------------------------
# Nonlinearities
# ---------------------------------------------------------------------------

def sigmoid(a: Tensor) -> Tensor:
    out_data = 1.0 / (1.0 + np.exp(-a.data))

    def bwd(g):
        if a.requires_grad:
            _accumulate(a, g * out_data * (1.0 - out_data))

    return _node(out_data, (a,), bwd)


def tanh(a: Tensor) -> Tensor:
    out_data = np.tanh(a.data)

    def bwd(g):
        if a.requires_grad:
            _accumulate(a, g * (1.0 - out_data * out_data))

    return _node(out_data, (a,), bwd)


def relu(a: Tensor) -> Tensor:
    out_data = np.maximum(a.data, 0.0)

    def bwd(g):
        if a.requires_grad:
            _accumulate(a, g * (a.data > 0.0))

    return _node(out_data, (a,), bwd)


def exp(a: Tensor) -> Tensor:
    out_data = np.exp(a.data)

    def bwd(g):
        if a.requires_grad:
            _accumulate(a, g * out_data)

    return _node(out_data, (a,), bwd)


def log(a: Tensor) -> Tensor:
    out_data = np.log(a.data)

    def bwd(g):
        if a.requires_grad:
            _accumulate(a, g / a.data)

    return _node(out_data, (a,), bwd)


# ---------------------------------------------------------------------------
# Shape manipulation
# ---------------------------------------------------------------------------

def reshape(a: Tensor, shape: tuple[int, ...]) -> Tensor:
    out_data = a.data.reshape(shape)

    def bwd(g):
        if a.requires_grad:
            _accumulate(a, g.reshape(a.data.shape))

    return _node(out_data, (a,), bwd)


def transpose(a: Tensor) -> Tensor:
    out_data = a.data.T

    def bwd(g):
        if a.requires_grad:
            _accumulate(a, g.T)

    return _node(out_data, (a,), bwd)


def concat(parts: Sequence[Tensor]) -> Tensor:
    """Concatenate 1-D tensors."""
    out_data = np.concatenate([p.data for p in parts])
    sizes = [p.data.shape[0] for p in parts]

    def bwd(g):
        off = 0
        for p, n in zip(parts, sizes):
            if p.requires_grad:
                _accumulate(p, g[off:off + n])
            off += n

    return _node(out_data, tuple(parts), bwd)


def stack(rows_: Sequence[Tensor]) -> Tensor:
    """Stack 1-D tensors into a 2-D matrix (one per row)."""
    out_data = np.stack([r.data for r in rows_])

    def bwd(g):
        for i, r in enumerate(rows_):
            if r.requires_grad:
                _accumulate(r, g[i])

    return _node(out_data, tuple(rows_), bwd)


def narrow(a: Tensor, start: int, stop: int) -> Tensor:
    """Slice along the first axis; used to split stacked LSTM gates."""
    out_data = a.data[start:stop]

    def bwd(g):
        if a.requires_grad:
            if a.grad is None:
                a.grad = np.zeros_like(a.data)
            a.grad[start:stop] += g

    return _node(out_data, (a,), bwd)


def row(a: Tensor, index: int) -> Tensor:
    out_data = a.data[index]

    def bwd(g):
        if a.requires_grad:
            if a.grad is None:
                a.grad = np.zeros_like(a.data)
            a.grad[index] += g

    return _node(out_data, (a,), bwd)


def rows(a: Tensor, indices) -> Tensor:
    """Gather rows of a 2-D tensor (embedding lookup)."""
    idx = np.asarray(indices, dtype=np.intp)
    out_data = a.data[idx]

    def bwd(g):
        if a.requires_grad:
            if a.grad is None:
                a.grad = np.zeros_like(a.data)
            np.add.at(a.grad, idx, g)

    return _node(out_data, (a,), bwd)


def pick(a: Tensor, row_idx, col_idx) -> Tensor:
    """Gather elements a[row_idx[k], col_idx[k]] into a 1-D tensor."""
    ri = np.asarray(row_idx, dtype=np.intp)
    ci = np.asarray(col_idx, dtype=np.intp)
    out_data = a.data[ri, ci]

    def bwd(g):
        if a.requires_grad:
            if a.grad is None:
                a.grad = np.zeros_like(a.data)
            np.add.at(a.grad, (ri, ci), g)

    return _node(out_data, (a,), bwd)


# ---------------------------------------------------------------------------
# Reductions
# ---------------------------------------------------------------------------

def sum_(a: Tensor, axis: int | None = None) -> Tensor:
    out_data = a.data.sum(axis=axis)

    def bwd(g):
        if a.requires_grad:
            if axis is None:
                _accumulate(a, np.broadcast_to(g, a.data.shape).copy())
            else:
                _accumulate(a, np.broadcast_to(np.expand_dims(g, axis), a.data.shape).copy())

    return _node(out_data, (a,), bwd)


def mean(a: Tensor) -> Tensor:
    n = a.data.size
    out_data = a.data.mean()

    def bwd(g):
        if a.requires_grad:
            _accumulate(a, np.full(a.data.shape, g / n))

    return _node(out_data, (a,), bwd)


def logsumexp(a: Tensor, axis: int | None = None) -> Tensor:
    """Numerically stable log-sum-exp reduction."""
    m = a.data.max(axis=axis, keepdims=True)
    shifted = a.data - m
    s = np.exp(shifted).sum(axis=axis, keepdims=True)
    out_keep = m + np.log(s)
    out_data = out_keep if axis is None else np.squeeze(out_keep, axis=axis)
    if axis is None:
        out_data = out_data.reshape(())
    softmax = np.exp(a.data - out_keep)

    def bwd(g):
        if a.requires_grad:
            if axis is None:
                _accumulate(a, softmax * g)
            else:
                _accumulate(a, softmax * np.expand_dims(g, axis))

    return _node(out_data, (a,), bwd)


def cross_entropy(logits: Tensor, gold: Sequence[int]) -> Tensor:
    """Mean negative log-likelihood of ``gold`` class ids under row softmaxes.

    ``logits`` is (N, K); ``gold`` holds N class ids.
    """
    idx = np.asarray(gold, dtype=np.intp)
    if logits.data.ndim != 2 or idx.shape[0] != logits.data.shape[0]:
        raise ShapeError(f"cross_entropy: logits {logits.data.shape} vs {idx.shape[0]} labels")
    lse = logsumexp(logits, axis=1)
    gold_scores = pick(logits, np.arange(idx.shape[0]), idx)
    return mean(sub(lse, gold_scores))


# ---------------------------------------------------------------------------
# Backward pass
# ---------------------------------------------------------------------------

def _topo_order(loss: Tensor) -> list[Tensor]:
    order: list[Tensor] = []
    seen: set[int] = set()
    stack: list[tuple[Tensor, bool]] = [(loss, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            order.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        for p in node._parents:
            if p.requires_grad and id(p) not in seen:
                stack.append((p, False))
    return order


def backward(loss: Tensor, params: Iterable[Tensor] = ()) -> None:
    """Populate ``.grad`` for every tensor reachable from a scalar ``loss``.

    Parameters listed in ``params`` but unreachable from the loss receive an
    explicit zero gradient.
    """
    if loss.data.size != 1:
        raise ContractError(f"backward expects a scalar loss, got shape {loss.data.shape}")
    if not loss.requires_grad:
        for p in params:
            if p.grad is None:
                p.grad = np.zeros_like(p.data)
        return
    order = _topo_order(loss)
    loss.grad = np.ones_like(loss.data)
    for node in reversed(order):
        if node._backward is not None and node.grad is not None:
            node._backward(node.grad)
    for p in params:
        if p.grad is None:
            p.grad = np.zeros_like(p.data)


def zero_grads(params: Iterable[Tensor]) -> None:
    for p in params:
        p.grad = None


def check_finite(t: Tensor) -> Tensor:
    if not np.all(np.isfinite(t.data)):
        raise FloatingPointError("non-finite value in forward pass")
    return t
