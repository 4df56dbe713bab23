"""Joint tokenizer and sentence splitter as per-character tagging.

Every character of the input gets one of three labels: INSIDE a unit,
TOKEN_END, or SENTENCE_END (which also ends a token). Whitespace characters
are always INSIDE and never part of a token, so mid-run splits such as
"up-regulation" -> "up", "-", "regulation" stay expressible through TOKEN_END
labels on non-final characters.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from . import autodiff as ad
from .autodiff import backward
from .conllu import Treebank
from .document import Document, Sentence, Word
from .errors import ContractError, DataError
from .layers import Embedding, Linear, LstmParams, bilstm_encode, bilstm_encode_np
from .optim import Adam
from .vocab import Vocab

INSIDE = 0
TOKEN_END = 1
SENTENCE_END = 2


@dataclass
class SegmenterConfig:
    emb_dim: int = 16
    hidden_dim: int = 24
    # Inference slides overlapping windows and majority-votes the labels;
    # training tiles the text with non-overlapping windows of the same size.
    window: int = 400
    stride: int = 200
    epochs: int = 60
    lr: float = 2e-3


class SegmenterModel:
    KIND = "tokenize"

    def __init__(self, rng: np.random.Generator, vocab: Vocab, config: SegmenterConfig):
        self.vocab = vocab
        self.config = config
        self.emb = Embedding(rng, len(vocab), config.emb_dim)
        self.fwd = LstmParams(rng, config.emb_dim, config.hidden_dim)
        self.bwd = LstmParams(rng, config.emb_dim, config.hidden_dim)
        self.proj = Linear(rng, 2 * config.hidden_dim, 3)

    def params(self):
        out = {}
        out.update(self.emb.params("emb"))
        out.update(self.fwd.params("fwd"))
        out.update(self.bwd.params("bwd"))
        out.update(self.proj.params("proj"))
        return out

    def meta(self):
        return {
            "kind": self.KIND,
            "vocab": self.vocab.to_json(),
            "config": asdict(self.config),
        }

    @classmethod
    def from_meta(cls, meta):
        vocab = Vocab.from_json(meta["vocab"])
        config = SegmenterConfig(**meta["config"])
        return cls(np.random.default_rng(0), vocab, config)


def make_char_labels(text: str, sentences) -> np.ndarray:
    """Label every character given gold token spans grouped by sentence.

    ``sentences`` is a list of sentences, each a list of (start, end) spans.
    """
    labels = np.zeros(len(text), dtype=np.intp)
    prev_end = 0
    for spans in sentences:
        for k, (start, end) in enumerate(spans):
            if not (0 <= start < end <= len(text)):
                raise DataError(f"token span [{start}, {end}) out of range")
            if start < prev_end:
                raise DataError(f"token span [{start}, {end}) overlaps its predecessor")
            if any(ch.isspace() for ch in text[start:end]):
                raise DataError(f"token span [{start}, {end}) contains whitespace")
            prev_end = end
            last = len(spans) - 1
            labels[end - 1] = SENTENCE_END if k == last else TOKEN_END
    return labels


def decode_boundaries(text: str, labels) -> Document:
    """Turn per-character labels into a Document; total on any label sequence.

    Whitespace closes an open token and its own labels are ignored; a trailing
    open token (and its sentence) is closed at end of text.
    """
    labels = np.asarray(labels)
    if labels.shape[0] != len(text):
        raise ContractError(f"{labels.shape[0]} labels for {len(text)} characters")
    sentences: list[Sentence] = []
    words: list[Word] = []
    tok_start = None

    def close_token(end):
        nonlocal tok_start
        words.append(
            Word(id=len(words) + 1, text=text[tok_start:end], start_char=tok_start, end_char=end)
        )
        tok_start = None

    def close_sentence():
        nonlocal words
        if words:
            sentences.append(Sentence(words=words))
            words = []

    for i, ch in enumerate(text):
        if ch.isspace():
            if tok_start is not None:
                close_token(i)
            continue
        if tok_start is None:
            tok_start = i
        if labels[i] >= TOKEN_END:
            close_token(i + 1)
        if labels[i] == SENTENCE_END:
            close_sentence()
    if tok_start is not None:
        close_token(len(text))
    close_sentence()
    return Document(text=text, sentences=sentences)


def _window_starts(n: int, window: int, stride: int) -> list[int]:
    if n <= window:
        return [0]
    starts = list(range(0, n - window + 1, stride))
    if starts[-1] + window < n:
        starts.append(n - window)
    return starts


def predict_labels(model: SegmenterModel, text: str) -> np.ndarray:
    """Argmax labels per character, majority-voted across overlapping windows."""
    cfg = model.config
    ids = np.asarray(model.vocab.ids(text), dtype=np.intp)
    n = ids.shape[0]
    votes = np.zeros((n, 3), dtype=np.intp)
    table = model.emb.table.data
    for start in _window_starts(n, cfg.window, cfg.stride):
        chunk = ids[start : start + cfg.window]
        states = bilstm_encode_np(table[chunk], model.fwd, model.bwd)
        logits = states @ model.proj.w.data.T + model.proj.b.data
        picks = np.argmax(logits, axis=1)
        votes[np.arange(start, start + chunk.shape[0]), picks] += 1
    return np.argmax(votes, axis=1)


def segment(model: SegmenterModel, text: str) -> Document:
    if text == "":
        return Document(text="", sentences=[])
    return decode_boundaries(text, predict_labels(model, text))


def _gold_spans_by_sentence(treebank: Treebank):
    out = []
    for sent in treebank.sentences:
        spans = sent.spans()
        if spans is None:
            raise DataError("treebank lacks character offsets; cannot train the segmenter")
        out.append(spans)
    return out


def train_segmenter(
    treebank: Treebank, config: SegmenterConfig | None = None, seed: int = 0
) -> SegmenterModel:
    """Fit the character tagger on a span-carrying treebank."""
    if not treebank.sentences:
        raise DataError("empty treebank")
    config = config or SegmenterConfig()
    text = treebank.raw_text()
    gold_sentences = _gold_spans_by_sentence(treebank)
    labels = make_char_labels(text, gold_sentences)
    gold_spans = [span for spans in gold_sentences for span in spans]

    rng = np.random.default_rng(seed)
    vocab = Vocab(set(text))
    model = SegmenterModel(rng, vocab, config)
    opt = Adam(model.params(), lr=config.lr)

    ids = np.asarray(vocab.ids(text), dtype=np.intp)
    starts = list(range(0, len(text), config.window))
    for _ in range(config.epochs):
        order = rng.permutation(len(starts))
        for k in order:
            s = starts[k]
            chunk = ids[s : s + config.window]
            gold = labels[s : s + config.window]
            xs = [model.emb.one(int(i)) for i in chunk]
            states = ad.stack(bilstm_encode(xs, model.fwd, model.bwd))
            loss = ad.cross_entropy(model.proj(states), gold)
            opt.zero_grad()
            backward(loss, model.params().values())
            opt.step()
        decoded = segment(model, text)
        if decoded.token_spans() == gold_spans and decoded.sentence_spans() == [
            (spans[0][0], spans[-1][1]) for spans in gold_sentences
        ]:
            break
    return model
