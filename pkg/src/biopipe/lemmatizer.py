"""Ensemble lemmatizer: frequency lexicon, shortcut classifier, char seq2seq.

Lookup order at inference: (form, UPOS) lexicon entry, then form-only entry,
then a three-way shortcut classifier over the encoder summary that routes to
IDENTITY (copy), LOWERCASE, or a greedy attentional character decoder.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import asdict, dataclass

import numpy as np

from . import autodiff as ad
from .autodiff import Tensor, backward
from .conllu import Treebank
from .errors import DataError, DomainError
from .layers import (
    Embedding,
    Linear,
    LstmParams,
    init_weight,
    lstm_step,
)
from .optim import Adam
from .vocab import ClosedVocab, Vocab

BOS = "<s>"
EOS = "</s>"

SEQ2SEQ = 0
LOWERCASE = 1
IDENTITY = 2
SHORTCUT_NAMES = ("SEQ2SEQ", "LOWERCASE", "IDENTITY")


@dataclass
class LemmatizerConfig:
    char_emb_dim: int = 16
    tag_emb_dim: int = 8
    enc_hidden: int = 24
    dec_hidden: int = 32
    attn_dim: int = 16
    epochs: int = 150
    lr: float = 2e-3
    max_extra: int = 5  # decode cap is 2 * len(form) + max_extra


class LemmaLexicon:
    """Most-frequent-lemma tables keyed by (form, UPOS) and by form alone."""

    def __init__(self, pair_map: dict | None = None, form_map: dict | None = None):
        self.pair_map = pair_map or {}
        self.form_map = form_map or {}

    def lookup(self, form: str, upos: str) -> str | None:
        hit = self.pair_map.get((form, upos))
        if hit is not None:
            return hit
        return self.form_map.get(form)

    def to_json(self):
        return {
            "pairs": [[f, u, l] for (f, u), l in sorted(self.pair_map.items())],
            "forms": [[f, l] for f, l in sorted(self.form_map.items())],
        }

    @classmethod
    def from_json(cls, data):
        return cls(
            pair_map={(f, u): l for f, u, l in data["pairs"]},
            form_map={f: l for f, l in data["forms"]},
        )


def build_lexicon(treebank: Treebank) -> LemmaLexicon:
    """Pick the most frequent gold lemma per key; ties go to the smallest lemma."""
    pair_counts: Counter = Counter()
    form_counts: Counter = Counter()
    for sent in treebank.sentences:
        for w in sent.words:
            if w.lemma == "_":
                continue
            pair_counts[((w.form, w.upos), w.lemma)] += 1
            form_counts[(w.form, w.lemma)] += 1

    def pick_best(counts):
        best: dict = {}
        for (key, lemma), c in sorted(counts.items()):
            cur = best.get(key)
            if cur is None or c > cur[1] or (c == cur[1] and lemma < cur[0]):
                best[key] = (lemma, c)
        return {k: v[0] for k, v in best.items()}

    return LemmaLexicon(pair_map=pick_best(pair_counts), form_map=pick_best(form_counts))


def shortcut_label(form: str, lemma: str) -> int:
    if lemma == form:
        return IDENTITY
    if lemma == form.lower():
        return LOWERCASE
    return SEQ2SEQ


class LemmaSeq2Seq:
    KIND = "lemma"

    def __init__(
        self,
        rng: np.random.Generator,
        chars: Vocab,
        upos_inv: ClosedVocab,
        config: LemmatizerConfig,
        lexicon: LemmaLexicon | None = None,
    ):
        self.chars = chars
        self.upos_inv = upos_inv
        self.config = config
        self.lexicon = lexicon or LemmaLexicon()
        c = config
        enc_in = c.char_emb_dim + c.tag_emb_dim
        self.char_emb = Embedding(rng, len(chars), c.char_emb_dim)
        self.tag_emb = Embedding(rng, len(upos_inv), c.tag_emb_dim)
        self.enc_fwd = LstmParams(rng, enc_in, c.enc_hidden)
        self.enc_bwd = LstmParams(rng, enc_in, c.enc_hidden)
        self.dec = LstmParams(rng, c.char_emb_dim + 2 * c.enc_hidden, c.dec_hidden)
        # Additive attention: v . tanh(Wa h_dec + Ua enc_j).
        self.attn_w = init_weight(rng, c.attn_dim, c.dec_hidden)
        self.attn_u = init_weight(rng, c.attn_dim, 2 * c.enc_hidden)
        self.attn_v = init_weight(rng, c.attn_dim)
        self.out = Linear(rng, c.dec_hidden + 2 * c.enc_hidden, len(chars))
        self.shortcut = Linear(rng, 2 * c.enc_hidden, 3)
        self.counters = Counter(lexicon=0, shortcut=0, decoded=0)

    def params(self):
        out = {}
        out.update(self.char_emb.params("char_emb"))
        out.update(self.tag_emb.params("tag_emb"))
        out.update(self.enc_fwd.params("enc_fwd"))
        out.update(self.enc_bwd.params("enc_bwd"))
        out.update(self.dec.params("dec"))
        out["attn.w"] = self.attn_w
        out["attn.u"] = self.attn_u
        out["attn.v"] = self.attn_v
        out.update(self.out.params("out"))
        out.update(self.shortcut.params("shortcut"))
        return out

    def meta(self):
        return {
            "kind": self.KIND,
            "chars": self.chars.to_json(),
            "upos": self.upos_inv.to_json(),
            "config": asdict(self.config),
            "lexicon": self.lexicon.to_json(),
        }

    @classmethod
    def from_meta(cls, meta):
        return cls(
            np.random.default_rng(0),
            Vocab.from_json(meta["chars"]),
            ClosedVocab.from_json(meta["upos"]),
            LemmatizerConfig(**meta["config"]),
            lexicon=LemmaLexicon.from_json(meta["lexicon"]),
        )

    def encode(self, form: str, upos: str) -> tuple[Tensor, Tensor]:
        """Returns (encoder state matrix (L, 2H), whole-word summary vector)."""
        tag_id = self.upos_inv.index.get(upos, 0)
        tag = self.tag_emb.one(tag_id)
        xs = [ad.concat([self.char_emb.one(i), tag]) for i in self.chars.ids(form)]
        h_f, c_f = self.enc_fwd.zero_state()
        f_states = []
        for x in xs:
            h_f, c_f = lstm_step(x, h_f, c_f, self.enc_fwd)
            f_states.append(h_f)
        h_b, c_b = self.enc_bwd.zero_state()
        b_states = []
        for x in reversed(xs):
            h_b, c_b = lstm_step(x, h_b, c_b, self.enc_bwd)
            b_states.append(h_b)
        b_states.reverse()
        states = ad.stack([ad.concat([f, b]) for f, b in zip(f_states, b_states)])
        summary = ad.concat([f_states[-1], b_states[0]])
        return states, summary

    def _attend(self, h_dec: Tensor, enc: Tensor, enc_proj: Tensor) -> Tensor:
        scores = ad.matmul(ad.tanh(enc_proj + ad.matmul(self.attn_w, h_dec)), self.attn_v)
        weights = ad.exp(scores - ad.logsumexp(scores))
        return ad.matmul(weights, enc)

    def _decode_step(self, prev_char_id, h, c, enc, enc_proj):
        context = self._attend(h, enc, enc_proj)
        x = ad.concat([self.char_emb.one(prev_char_id), context])
        h, c = lstm_step(x, h, c, self.dec)
        logits = self.out(ad.concat([h, self._attend(h, enc, enc_proj)]))
        return logits, h, c

    def decode_greedy(self, form: str, upos: str) -> str:
        enc, _ = self.encode(form, upos)
        enc_proj = ad.matmul(enc, ad.transpose(self.attn_u))
        h, c = self.dec.zero_state()
        prev = self.chars.id(BOS)
        eos = self.chars.id(EOS)
        out_chars = []
        for _ in range(2 * len(form) + self.config.max_extra):
            logits, h, c = self._decode_step(prev, h, c, enc, enc_proj)
            prev = int(np.argmax(logits.data))
            if prev == eos:
                break
            out_chars.append(self.chars.symbol(prev))
        return "".join(out_chars)


def lemmatize(lexicon: LemmaLexicon, model: LemmaSeq2Seq, form: str, upos: str) -> str:
    """Resolve one (form, UPOS) pair through the ensemble; never empty."""
    if form == "":
        raise DomainError("cannot lemmatize an empty form")
    hit = lexicon.lookup(form, upos)
    if hit is not None:
        model.counters["lexicon"] += 1
        return hit
    _, summary = model.encode(form, upos)
    route = int(np.argmax(model.shortcut(summary).data))
    model.counters["decoded" if route == SEQ2SEQ else "shortcut"] += 1
    return _routed_lemma(model, form, upos, route)


def _routed_lemma(model: LemmaSeq2Seq, form: str, upos: str, route: int) -> str:
    if route == IDENTITY:
        return form
    if route == LOWERCASE:
        return form.lower()
    decoded = model.decode_greedy(form, upos)
    return decoded if decoded else form


class Lemmatizer:
    """Bundles the lexicon with the network under the processor interface."""

    KIND = "lemma"

    def __init__(self, model: LemmaSeq2Seq):
        self.model = model

    @property
    def lexicon(self) -> LemmaLexicon:
        return self.model.lexicon

    def __call__(self, form: str, upos: str) -> str:
        return lemmatize(self.model.lexicon, self.model, form, upos)

    def params(self):
        return self.model.params()

    def meta(self):
        return self.model.meta()

    @classmethod
    def from_meta(cls, meta):
        return cls(LemmaSeq2Seq.from_meta(meta))


def train_lemmatizer(
    treebank: Treebank, config: LemmatizerConfig | None = None, seed: int = 0
) -> tuple[LemmaLexicon, LemmaSeq2Seq]:
    if not treebank.sentences:
        raise DataError("empty treebank")
    config = config or LemmatizerConfig()

    triples = sorted(
        {
            (w.form, w.upos, w.lemma)
            for sent in treebank.sentences
            for w in sent.words
            if w.lemma != "_" and w.form != ""
        }
    )
    if not triples:
        raise DataError("treebank has no gold lemmas")

    lexicon = build_lexicon(treebank)
    chars = Vocab(
        (ch for f, _, l in triples for ch in f + l),
        extra=[BOS, EOS],
    )
    upos_inv = ClosedVocab(u for _, u, _ in triples)
    rng = np.random.default_rng(seed)
    model = LemmaSeq2Seq(rng, chars, upos_inv, config, lexicon=lexicon)
    opt = Adam(model.params(), lr=config.lr)

    bos = chars.id(BOS)
    eos = chars.id(EOS)
    for _ in range(config.epochs):
        order = rng.permutation(len(triples))
        for k in order:
            form, upos, lemma = triples[k]
            enc, summary = model.encode(form, upos)
            enc_proj = ad.matmul(enc, ad.transpose(model.attn_u))
            targets = chars.ids(lemma) + [eos]
            prev_ids = [bos] + chars.ids(lemma)
            h, c = model.dec.zero_state()
            step_logits = []
            for prev in prev_ids:
                logits, h, c = model._decode_step(prev, h, c, enc, enc_proj)
                step_logits.append(logits)
            seq_loss = ad.cross_entropy(ad.stack(step_logits), targets)
            route_logits = ad.reshape(model.shortcut(summary), (1, 3))
            route_loss = ad.cross_entropy(route_logits, [shortcut_label(form, lemma)])
            loss = seq_loss + route_loss
            opt.zero_grad()
            backward(loss, model.params().values())
            opt.step()
        if _network_accuracy(model, triples) == 1.0:
            break
    return lexicon, model


def _network_accuracy(model, triples) -> float:
    """Training accuracy of the shortcut + seq2seq path alone.

    The lexicon already covers every training pair, so stopping on ensemble
    accuracy would leave the network untrained and out-of-vocabulary routing
    arbitrary. The network must reproduce the training lemmas by itself.
    """
    good = sum(_neural_lemma(model, f, u) == l for f, u, l in triples)
    return good / len(triples)


def _neural_lemma(model: LemmaSeq2Seq, form: str, upos: str) -> str:
    _, summary = model.encode(form, upos)
    route = int(np.argmax(model.shortcut(summary).data))
    return _routed_lemma(model, form, upos, route)
