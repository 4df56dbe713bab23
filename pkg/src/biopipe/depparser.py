"""Deep biaffine dependency parser with single-root MST decoding.

A learned root vector is prepended to the embedded sentence before the
BiLSTM, four ReLU projection heads split the encoder states into arc-head,
arc-dependent, relation-head and relation-dependent views, and two biaffine
scorers produce the arc matrix and the relation logits.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from . import autodiff as ad
from .autodiff import Tensor, backward
from .conllu import Treebank
from .errors import DataError, ShapeError
from .layers import (
    BiaffineParams,
    Embedding,
    Linear,
    LstmParams,
    biaffine_matrix,
    biaffine_score,
    bilstm_encode,
    init_weight,
)
from .mst import is_arborescence, mst_decode
from .optim import Adam
from .vocab import ClosedVocab, Vocab

SELF_MASK = -1e9


@dataclass
class ParserConfig:
    word_emb_dim: int = 24
    tag_emb_dim: int = 8
    hidden_dim: int = 32
    arc_dim: int = 32
    rel_dim: int = 16
    epochs: int = 200
    lr: float = 2e-3


@dataclass
class DependencyTree:
    heads: list[int]
    deprels: list[str]


class ParserModel:
    KIND = "depparse"

    def __init__(
        self,
        rng: np.random.Generator,
        vocab: Vocab,
        upos_inv: ClosedVocab,
        xpos_inv: ClosedVocab,
        rel_inv: ClosedVocab,
        config: ParserConfig,
    ):
        self.vocab = vocab
        self.upos_inv = upos_inv
        self.xpos_inv = xpos_inv
        self.rel_inv = rel_inv
        self.config = config
        c = config
        in_dim = c.word_emb_dim + 2 * c.tag_emb_dim
        self.word_emb = Embedding(rng, len(vocab), c.word_emb_dim)
        self.upos_emb = Embedding(rng, len(upos_inv), c.tag_emb_dim)
        self.xpos_emb = Embedding(rng, len(xpos_inv), c.tag_emb_dim)
        self.root_vec = init_weight(rng, in_dim)
        self.fwd = LstmParams(rng, in_dim, c.hidden_dim)
        self.bwd = LstmParams(rng, in_dim, c.hidden_dim)
        self.arc_head = Linear(rng, 2 * c.hidden_dim, c.arc_dim)
        self.arc_dep = Linear(rng, 2 * c.hidden_dim, c.arc_dim)
        self.rel_head = Linear(rng, 2 * c.hidden_dim, c.rel_dim)
        self.rel_dep = Linear(rng, 2 * c.hidden_dim, c.rel_dim)
        self.arc_scorer = BiaffineParams(rng, c.arc_dim, c.arc_dim, 1)
        self.rel_scorer = BiaffineParams(rng, c.rel_dim, c.rel_dim, len(rel_inv))

    def params(self):
        out = {"root_vec": self.root_vec}
        out.update(self.word_emb.params("word_emb"))
        out.update(self.upos_emb.params("upos_emb"))
        out.update(self.xpos_emb.params("xpos_emb"))
        out.update(self.fwd.params("fwd"))
        out.update(self.bwd.params("bwd"))
        out.update(self.arc_head.params("arc_head"))
        out.update(self.arc_dep.params("arc_dep"))
        out.update(self.rel_head.params("rel_head"))
        out.update(self.rel_dep.params("rel_dep"))
        out.update(self.arc_scorer.params("arc_scorer"))
        out.update(self.rel_scorer.params("rel_scorer"))
        return out

    def meta(self):
        return {
            "kind": self.KIND,
            "vocab": self.vocab.to_json(),
            "upos": self.upos_inv.to_json(),
            "xpos": self.xpos_inv.to_json(),
            "rels": self.rel_inv.to_json(),
            "config": asdict(self.config),
        }

    @classmethod
    def from_meta(cls, meta):
        return cls(
            np.random.default_rng(0),
            Vocab.from_json(meta["vocab"]),
            ClosedVocab.from_json(meta["upos"]),
            ClosedVocab.from_json(meta["xpos"]),
            ClosedVocab.from_json(meta["rels"]),
            ParserConfig(**meta["config"]),
        )

    def _encode(self, words, upos, xpos):
        """BiLSTM states over [root] + words; returns the four projections."""
        xs = [self.root_vec]
        for w, u, x in zip(words, upos, xpos):
            xs.append(
                ad.concat(
                    [
                        self.word_emb.one(self.vocab.id(w)),
                        self.upos_emb.one(self.upos_inv.index.get(u, 0)),
                        self.xpos_emb.one(self.xpos_inv.index.get(x, 0)),
                    ]
                )
            )
        states = ad.stack(bilstm_encode(xs, self.fwd, self.bwd))
        return (
            ad.relu(self.arc_head(states)),
            ad.relu(self.arc_dep(states)),
            ad.relu(self.rel_head(states)),
            ad.relu(self.rel_dep(states)),
        )


def _arc_matrix(model: ParserModel, arc_h: Tensor, arc_d: Tensor) -> Tensor:
    """(n+1, n+1) scores, entry [h, d] = head h over dependent d; unmasked."""
    return biaffine_matrix(arc_h, arc_d, model.arc_scorer)


def score_arcs(model: ParserModel, words, upos, xpos):
    """Masked arc scores and all-pairs relation logits for one sentence.

    Returns (arc_scores (n+1, n+1) float array with -inf on the diagonal and
    on column 0, rel_scores (n+1, n+1, |rels|)).
    """
    if not (len(words) == len(upos) == len(xpos)):
        raise ShapeError(
            f"length mismatch: {len(words)} words, {len(upos)} UPOS, {len(xpos)} XPOS"
        )
    if not words:
        raise ShapeError("cannot score an empty sentence")
    arc_h, arc_d, rel_h, rel_d = model._encode(words, upos, xpos)
    arcs = _arc_matrix(model, arc_h, arc_d).data.copy()
    np.fill_diagonal(arcs, -np.inf)
    arcs[:, 0] = -np.inf

    p = model.rel_scorer
    hs = rel_h.data
    ds = rel_d.data
    u = p.u.data.reshape(p.left_dim, p.right_dim, p.out_dim)
    bil = np.einsum("hi,ijo,dj->hdo", hs, u, ds)
    wl = p.w.data[:, : p.left_dim]
    wr = p.w.data[:, p.left_dim :]
    rels = bil + (hs @ wl.T)[:, None, :] + (ds @ wr.T)[None, :, :] + p.b.data
    return arcs, rels


def parse_sentence(model: ParserModel, words, upos, xpos) -> DependencyTree:
    """Decode the best single-root tree and label each chosen arc."""
    arcs, rels = score_arcs(model, words, upos, xpos)
    heads = mst_decode(arcs)
    deprels = [
        model.rel_inv.symbol(int(np.argmax(rels[h, d + 1])))
        for d, h in enumerate(heads)
    ]
    return DependencyTree(heads=list(heads), deprels=deprels)


def _gold_rows(treebank: Treebank):
    rows = []
    for idx, sent in enumerate(treebank.sentences):
        heads = [w.head for w in sent.words]
        rels = [w.deprel for w in sent.words]
        if any(r == "_" for r in rels):
            raise DataError(f"sentence {idx + 1}: missing gold deprel")
        if not is_arborescence(np.asarray(heads)):
            raise DataError(f"sentence {idx + 1}: gold heads are not a single-root tree")
        rows.append((sent.forms(), [w.upos for w in sent.words], [w.xpos for w in sent.words], heads, rels))
    return rows


def train_parser(
    treebank: Treebank, config: ParserConfig | None = None, seed: int = 0
) -> ParserModel:
    """Fit on gold trees: per-dependent head softmax plus relation CE at gold arcs."""
    if not treebank.sentences:
        raise DataError("empty treebank")
    config = config or ParserConfig()
    rows = _gold_rows(treebank)

    vocab = Vocab(f for forms, *_ in rows for f in forms)
    upos_inv = ClosedVocab(t for _, us, _, _, _ in rows for t in us)
    xpos_inv = ClosedVocab(t for _, _, xs, _, _ in rows for t in xs)
    rel_inv = ClosedVocab(r for *_, rels in rows for r in rels)
    rng = np.random.default_rng(seed)
    model = ParserModel(rng, vocab, upos_inv, xpos_inv, rel_inv, config)
    opt = Adam(model.params(), lr=config.lr)

    for _ in range(config.epochs):
        order = rng.permutation(len(rows))
        for k in order:
            words, upos, xpos, heads, rels = rows[k]
            n = len(words)
            arc_h, arc_d, rel_h, rel_d = model._encode(words, upos, xpos)
            arcs = _arc_matrix(model, arc_h, arc_d)
            # Rows = dependents 1..n, columns = candidate heads 0..n;
            # self-arcs are masked with a large negative constant.
            dep_logits = ad.narrow(ad.transpose(arcs), 1, n + 1)
            mask = np.zeros((n, n + 1))
            mask[np.arange(n), np.arange(1, n + 1)] = SELF_MASK
            arc_loss = ad.cross_entropy(dep_logits + ad.constant(mask), heads)
            rel_logits = ad.stack(
                [
                    biaffine_score(
                        ad.row(rel_h, h), ad.row(rel_d, d + 1), model.rel_scorer
                    )
                    for d, h in enumerate(heads)
                ]
            )
            rel_loss = ad.cross_entropy(rel_logits, rel_inv.ids(rels))
            opt.zero_grad()
            backward(arc_loss + rel_loss, model.params().values())
            opt.step()
        if _training_las(model, rows) == 1.0:
            break
    return model


def _training_las(model: ParserModel, rows) -> float:
    """Fraction of training words with the gold head and the gold label.

    The early stop keys on labeled accuracy: heads alone can be exact while
    relation labels still lag behind.
    """
    good = total = 0
    for words, upos, xpos, heads, rels in rows:
        tree = parse_sentence(model, words, upos, xpos)
        good += sum(
            h == gh and r == gr
            for h, gh, r, gr in zip(tree.heads, heads, tree.deprels, rels)
        )
        total += len(heads)
    return good / total
