"""Forward and backward character language models.

Both directions share one implementation: a BACKWARD model is trained on the
reversed character stream, so its hidden state at any point summarizes the
text to the *right* of that point. Frozen models supply contextual token
features to the entity recognizer through :func:`contextual_embed`.
"""

from __future__ import annotations

import enum
import re
from dataclasses import asdict, dataclass

import numpy as np

from . import autodiff as ad
from .autodiff import backward
from .errors import DataError
from .layers import Embedding, Linear, LstmParams, lstm_step
from .optim import Adam
from .vocab import Vocab

MASK_RE = re.compile(r"\[\*\*.*?\*\*\]", flags=re.DOTALL)


class Direction(enum.Enum):
    FORWARD = "forward"
    BACKWARD = "backward"


@dataclass
class CharLmConfig:
    emb_dim: int = 16
    hidden_dim: int = 48
    chunk_len: int = 64
    epochs: int = 10
    lr: float = 2e-3


class CharLm:
    KIND = "charlm"

    def __init__(
        self,
        rng: np.random.Generator,
        vocab: Vocab,
        direction: Direction,
        config: CharLmConfig,
    ):
        self.vocab = vocab
        self.direction = direction
        self.config = config
        self.emb = Embedding(rng, len(vocab), config.emb_dim)
        self.lstm = LstmParams(rng, config.emb_dim, config.hidden_dim)
        self.proj = Linear(rng, config.hidden_dim, len(vocab))
        self.perplexities: list[float] = []

    def params(self):
        out = {}
        out.update(self.emb.params("emb"))
        out.update(self.lstm.params("lstm"))
        out.update(self.proj.params("proj"))
        return out

    def meta(self):
        return {
            "kind": self.KIND,
            "vocab": self.vocab.to_json(),
            "direction": self.direction.value,
            "config": asdict(self.config),
        }

    @classmethod
    def from_meta(cls, meta):
        return cls(
            np.random.default_rng(0),
            Vocab.from_json(meta["vocab"]),
            Direction(meta["direction"]),
            CharLmConfig(**meta["config"]),
        )

    def states_over(self, text: str) -> np.ndarray:
        """Hidden states after consuming each character; row 0 is the empty prefix.

        For a BACKWARD model pass the already-reversed stream. Returns an array
        of shape (len(text) + 1, hidden_dim).
        """
        hd = self.config.hidden_dim
        w = self.lstm.w.data
        b = self.lstm.b.data
        table = self.emb.table.data
        ids = self.vocab.ids(text)
        out = np.empty((len(ids) + 1, hd))
        h = np.zeros(hd)
        c = np.zeros(hd)
        out[0] = h
        for t, i in enumerate(ids):
            z = w @ np.concatenate([table[i], h]) + b
            gi = 1.0 / (1.0 + np.exp(-z[:hd]))
            gf = 1.0 / (1.0 + np.exp(-z[hd : 2 * hd]))
            go = 1.0 / (1.0 + np.exp(-z[2 * hd : 3 * hd]))
            gg = np.tanh(z[3 * hd :])
            c = gf * c + gi * gg
            h = go * np.tanh(c)
            out[t + 1] = h
        return out


def filter_corpus(sentences: list[str]) -> list[str]:
    """Drop any sentence containing an anonymization mask like [**...**]."""
    return [s for s in sentences if not MASK_RE.search(s)]


def train_charlm(
    corpus: str,
    direction: Direction,
    config: CharLmConfig | None = None,
    seed: int = 0,
) -> CharLm:
    """Next-character training with truncated backpropagation over fixed chunks."""
    if not corpus:
        raise DataError("empty character corpus")
    config = config or CharLmConfig()
    stream = corpus if direction is Direction.FORWARD else corpus[::-1]

    rng = np.random.default_rng(seed)
    vocab = Vocab(set(stream), extra=["\n"])
    model = CharLm(rng, vocab, direction, config)
    opt = Adam(model.params(), lr=config.lr)

    ids = np.asarray(vocab.ids(stream), dtype=np.intp)
    L = config.chunk_len
    for _ in range(config.epochs):
        h, c = model.lstm.zero_state()
        total_nll = 0.0
        total_chars = 0
        for start in range(0, len(ids) - 1, L):
            inputs = ids[start : start + L]
            targets = ids[start + 1 : start + 1 + L]
            inputs = inputs[: targets.shape[0]]
            hs = []
            for i in inputs:
                h, c = lstm_step(model.emb.one(int(i)), h, c, model.lstm)
                hs.append(h)
            logits = model.proj(ad.stack(hs))
            loss = ad.cross_entropy(logits, targets)
            opt.zero_grad()
            backward(loss, model.params().values())
            opt.step()
            total_nll += loss.item() * targets.shape[0]
            total_chars += targets.shape[0]
            # Truncation point: carry values across chunks, not gradients.
            h = ad.constant(h.data.copy())
            c = ad.constant(c.data.copy())
        model.perplexities.append(float(np.exp(total_nll / max(total_chars, 1))))
    return model


def _reconstruct(tokens: list[str], spans: list[tuple[int, int]] | None):
    """Character stream plus per-token (start, end) offsets into it."""
    if spans is None:
        text = " ".join(tokens)
        spans = []
        pos = 0
        for t in tokens:
            spans.append((pos, pos + len(t)))
            pos += len(t) + 1
        return text, spans
    if len(spans) != len(tokens):
        raise DataError(f"{len(tokens)} tokens with {len(spans)} spans")
    base = spans[0][0]
    shifted = []
    prev = 0
    for t, (s, e) in zip(tokens, spans):
        s -= base
        e -= base
        if not (0 <= prev <= s < e) or e - s != len(t):
            raise DataError(f"bad token span [{s + base}, {e + base}) for {t!r}")
        shifted.append((s, e))
        prev = e
    length = shifted[-1][1]
    chars = [" "] * length
    for t, (s, e) in zip(tokens, shifted):
        chars[s:e] = list(t)
    return "".join(chars), shifted


def contextual_embed(
    fwd: CharLm,
    bwd: CharLm,
    tokens: list[str],
    spans: list[tuple[int, int]] | None = None,
) -> np.ndarray:
    """Per-token features from the frozen language models.

    Each token's vector concatenates the forward state taken right after the
    token's last character with the backward state taken right after the
    backward stream has consumed back through the token's first character.
    Absent spans, tokens are joined with single spaces.
    """
    if not tokens:
        return np.zeros((0, fwd.config.hidden_dim + bwd.config.hidden_dim))
    text, local = _reconstruct(tokens, spans)
    f_states = fwd.states_over(text)
    b_states = bwd.states_over(text[::-1])
    n = len(text)
    out = np.empty((len(tokens), fwd.config.hidden_dim + bwd.config.hidden_dim))
    for k, (s, e) in enumerate(local):
        out[k] = np.concatenate([f_states[e], b_states[n - s]])
    return out
