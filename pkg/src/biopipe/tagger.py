"""UPOS and XPOS tagging with the XPOS head biaffine-conditioned on UPOS.

Training teacher-forces the gold UPOS embedding into the XPOS scorer;
inference feeds the predicted one, which keeps the two tag layers consistent.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import asdict, dataclass

import numpy as np

from . import autodiff as ad
from .autodiff import backward
from .conllu import Treebank
from .errors import DataError, DomainError
from .layers import Embedding, Linear, LstmParams, biaffine_score, BiaffineParams, bilstm_encode
from .optim import Adam
from .vocab import ClosedVocab, Vocab

WORD_DROP_C = 0.25


@dataclass
class TaggerConfig:
    emb_dim: int = 24
    tag_emb_dim: int = 12
    hidden_dim: int = 32
    epochs: int = 120
    lr: float = 2e-3
    word_dropout: bool = True


class TaggerModel:
    KIND = "pos"

    def __init__(
        self,
        rng: np.random.Generator,
        vocab: Vocab,
        upos_inv: ClosedVocab,
        xpos_inv: ClosedVocab,
        config: TaggerConfig,
        pretrained: np.ndarray | None = None,
    ):
        self.vocab = vocab
        self.upos_inv = upos_inv
        self.xpos_inv = xpos_inv
        self.config = config
        # Optional frozen external vectors, one row per vocab entry.
        self.pretrained = pretrained
        in_dim = config.emb_dim + (pretrained.shape[1] if pretrained is not None else 0)
        self.emb = Embedding(rng, len(vocab), config.emb_dim)
        self.fwd = LstmParams(rng, in_dim, config.hidden_dim)
        self.bwd = LstmParams(rng, in_dim, config.hidden_dim)
        self.upos_head = Linear(rng, 2 * config.hidden_dim, len(upos_inv))
        self.upos_emb = Embedding(rng, len(upos_inv), config.tag_emb_dim)
        self.xpos_scorer = BiaffineParams(
            rng, 2 * config.hidden_dim, config.tag_emb_dim, len(xpos_inv)
        )

    def params(self):
        out = {}
        out.update(self.emb.params("emb"))
        out.update(self.fwd.params("fwd"))
        out.update(self.bwd.params("bwd"))
        out.update(self.upos_head.params("upos_head"))
        out.update(self.upos_emb.params("upos_emb"))
        out.update(self.xpos_scorer.params("xpos_scorer"))
        return out

    def meta(self):
        return {
            "kind": self.KIND,
            "vocab": self.vocab.to_json(),
            "upos": self.upos_inv.to_json(),
            "xpos": self.xpos_inv.to_json(),
            "config": asdict(self.config),
            "pretrained_dim": None if self.pretrained is None else int(self.pretrained.shape[1]),
        }

    @classmethod
    def from_meta(cls, meta):
        config = TaggerConfig(**meta["config"])
        pre = None
        if meta.get("pretrained_dim"):
            pre = np.zeros((len(meta["vocab"]), meta["pretrained_dim"]))
        return cls(
            np.random.default_rng(0),
            Vocab.from_json(meta["vocab"]),
            ClosedVocab.from_json(meta["upos"]),
            ClosedVocab.from_json(meta["xpos"]),
            config,
            pretrained=pre,
        )

    def extra_arrays(self):
        """Non-trainable arrays that must travel with the weights."""
        if self.pretrained is None:
            return {}
        return {"pretrained": self.pretrained}

    def set_extra_arrays(self, arrays):
        if "pretrained" in arrays:
            self.pretrained = arrays["pretrained"]

    def _inputs(self, word_ids):
        xs = []
        for i in word_ids:
            e = self.emb.one(int(i))
            if self.pretrained is not None:
                e = ad.concat([e, ad.constant(self.pretrained[int(i)])])
            xs.append(e)
        return xs

    def encode(self, word_ids):
        return bilstm_encode(self._inputs(word_ids), self.fwd, self.bwd)


def read_word_vectors(path) -> tuple[list[str], np.ndarray]:
    """Parse whitespace-separated vectors: one token followed by floats per line."""
    words: list[str] = []
    rows: list[list[float]] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.rstrip("\n").split()
            if not parts:
                continue
            if len(parts) < 2:
                raise DataError(f"word-vector line {lineno}: token without values")
            try:
                rows.append([float(v) for v in parts[1:]])
            except ValueError as exc:
                raise DataError(f"word-vector line {lineno}: non-numeric value") from exc
            words.append(parts[0])
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise DataError("word-vector rows have inconsistent dimensions")
    return words, np.asarray(rows, dtype=np.float64)


def tag_sentence(model: TaggerModel, words: list[str]) -> tuple[list[str], list[str]]:
    """Predict (UPOS, XPOS) per word; XPOS conditions on the predicted UPOS."""
    if not words:
        raise DomainError("cannot tag an empty sentence")
    states = model.encode(model.vocab.ids(words))
    upos_out = []
    xpos_out = []
    for state in states:
        upos_id = int(np.argmax(model.upos_head(state).data))
        upos_out.append(model.upos_inv.symbol(upos_id))
        xpos_logits = biaffine_score(state, model.upos_emb.one(upos_id), model.xpos_scorer)
        xpos_out.append(model.xpos_inv.symbol(int(np.argmax(xpos_logits.data))))
    return upos_out, xpos_out


def _training_rows(treebank: Treebank):
    rows = []
    for sent in treebank.sentences:
        forms = sent.forms()
        upos = [w.upos for w in sent.words]
        xpos = [w.xpos for w in sent.words]
        rows.append((forms, upos, xpos))
    if all(t == "_" for _, us, _ in rows for t in us):
        raise DataError("treebank has no UPOS annotation; fill the UPOS column before training")
    if all(t == "_" for _, _, xs in rows for t in xs):
        raise DataError("treebank has no XPOS annotation; fill the XPOS column before training")
    for forms, us, xs in rows:
        for f, u, x in zip(forms, us, xs):
            if u == "_" or x == "_":
                raise DataError(f"word {f!r} is missing a gold UPOS or XPOS tag")
    return rows


def train_tagger(
    treebank: Treebank,
    config: TaggerConfig | None = None,
    seed: int = 0,
    pretrained: tuple[list[str], np.ndarray] | None = None,
) -> TaggerModel:
    if not treebank.sentences:
        raise DataError("empty treebank")
    config = config or TaggerConfig()
    rows = _training_rows(treebank)

    freq = Counter(f for forms, _, _ in rows for f in forms)
    vocab = Vocab(freq.keys())
    upos_inv = ClosedVocab(t for _, us, _ in rows for t in us)
    xpos_inv = ClosedVocab(t for _, _, xs in rows for t in xs)

    rng = np.random.default_rng(seed)
    pre = None
    if pretrained is not None:
        ext_words, ext_vecs = pretrained
        lookup = {w: i for i, w in enumerate(ext_words)}
        pre = np.zeros((len(vocab), ext_vecs.shape[1]))
        for sym, idx in vocab.index.items():
            if sym in lookup:
                pre[idx] = ext_vecs[lookup[sym]]
    model = TaggerModel(rng, vocab, upos_inv, xpos_inv, config, pretrained=pre)
    opt = Adam(model.params(), lr=config.lr)

    examples = [
        (
            np.asarray(vocab.ids(forms), dtype=np.intp),
            np.asarray([freq[f] for f in forms], dtype=np.float64),
            np.asarray([upos_inv.id(u) for u in us], dtype=np.intp),
            np.asarray([xpos_inv.id(x) for x in xs], dtype=np.intp),
        )
        for forms, us, xs in rows
    ]

    for _ in range(config.epochs):
        order = rng.permutation(len(examples))
        for k in order:
            word_ids, freqs, gold_upos, gold_xpos = examples[k]
            if config.word_dropout:
                drop = rng.random(word_ids.shape[0]) < WORD_DROP_C / (WORD_DROP_C + freqs)
                word_ids = np.where(drop, 0, word_ids)
            states = model.encode(word_ids)
            upos_logits = ad.stack([model.upos_head(s) for s in states])
            xpos_logits = ad.stack(
                [
                    biaffine_score(s, model.upos_emb.one(int(u)), model.xpos_scorer)
                    for s, u in zip(states, gold_upos)
                ]
            )
            loss = ad.cross_entropy(upos_logits, gold_upos) + ad.cross_entropy(
                xpos_logits, gold_xpos
            )
            opt.zero_grad()
            backward(loss, model.params().values())
            opt.step()
        if _training_accuracy(model, rows) == 1.0:
            break
    return model


def _training_accuracy(model: TaggerModel, rows) -> float:
    good = total = 0
    for forms, us, xs in rows:
        pu, px = tag_sentence(model, forms)
        good += sum(a == b and c == d for a, b, c, d in zip(pu, us, px, xs))
        total += len(forms)
    return good / total
