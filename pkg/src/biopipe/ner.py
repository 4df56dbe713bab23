"""BiLSTM-CRF named entity recognition over BIOES tags.

Token features concatenate a trainable word embedding with contextual
character features: either boundary states of frozen pretrained character
language models, or (baseline mode, for ablations) a jointly trained
character BiLSTM initialized at random.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from . import autodiff as ad
from .autodiff import backward
from .charlm import CharLm, contextual_embed
from .crf import CrfParams, crf_nll, crf_viterbi
from .errors import DataError
from .layers import Embedding, Linear, LstmParams, bilstm_encode
from .optim import Adam
from .vocab import ClosedVocab, Vocab

MODE_CHARLM = "charlm"
MODE_CHAR_BILSTM = "char-bilstm"


@dataclass
class TaggedSpan:
    """Entity mention over token indices, half-open."""

    start: int
    end: int
    type: str
    text: str = ""

    def __post_init__(self):
        if not 0 <= self.start < self.end:
            raise DataError(f"bad entity span [{self.start}, {self.end})")

    def key(self):
        return (self.start, self.end, self.type)


@dataclass
class NerConfig:
    word_emb_dim: int = 24
    hidden_dim: int = 32
    char_emb_dim: int = 16
    char_hidden_dim: int = 16  # baseline character BiLSTM only
    epochs: int = 80
    lr: float = 2e-3
    # Training-time probability of replacing a word id with UNK, forcing the
    # tagger to lean on character-level features for rare mentions.
    word_dropout: float = 0.2


def encode_bioes(entities: list[TaggedSpan], length: int) -> list[str]:
    """Tags for one sentence; single-token entities get S-, longer ones B/I/E."""
    tags = ["O"] * length
    occupied = [False] * length
    for ent in sorted(entities, key=lambda e: e.start):
        if ent.end > length:
            raise DataError(f"entity span [{ent.start}, {ent.end}) exceeds length {length}")
        if any(occupied[ent.start : ent.end]):
            raise DataError(f"overlapping entity at [{ent.start}, {ent.end})")
        for i in range(ent.start, ent.end):
            occupied[i] = True
        if ent.end - ent.start == 1:
            tags[ent.start] = f"S-{ent.type}"
        else:
            tags[ent.start] = f"B-{ent.type}"
            for i in range(ent.start + 1, ent.end - 1):
                tags[i] = f"I-{ent.type}"
            tags[ent.end - 1] = f"E-{ent.type}"
    return tags


def split_tag(tag: str) -> tuple[str, str]:
    if tag == "O":
        return "O", ""
    if len(tag) > 2 and tag[1] == "-" and tag[0] in "BIES":
        return tag[0], tag[2:]
    raise DataError(f"malformed entity tag {tag!r}")


def decode_bioes(tags: list[str], tokens: list[str] | None = None) -> list[TaggedSpan]:
    """Spans from a tag sequence; illegal sequences are repaired, not rejected.

    An I/E without a matching open B of the same type starts a new entity;
    an entity left open at a type change, an O, or the end of the sentence is
    closed at its last consistent token.
    """
    spans: list[TaggedSpan] = []
    open_start = None
    open_type = None

    def close(end):
        nonlocal open_start, open_type
        if open_start is not None:
            spans.append(TaggedSpan(start=open_start, end=end, type=open_type))
            open_start = None
            open_type = None

    for i, tag in enumerate(tags):
        prefix, etype = split_tag(tag)
        if prefix == "O":
            close(i)
        elif prefix == "B":
            close(i)
            open_start, open_type = i, etype
        elif prefix == "S":
            close(i)
            spans.append(TaggedSpan(start=i, end=i + 1, type=etype))
        elif prefix == "I":
            if open_start is None or open_type != etype:
                close(i)
                open_start, open_type = i, etype
        elif prefix == "E":
            if open_start is None or open_type != etype:
                close(i)
                open_start, open_type = i, etype
            close(i + 1)
    close(len(tags))
    if tokens is not None:
        for s in spans:
            s.text = " ".join(tokens[s.start : s.end])
    return spans


class NerModel:
    KIND = "ner"

    def __init__(
        self,
        rng: np.random.Generator,
        vocab: Vocab,
        tag_inv: ClosedVocab,
        config: NerConfig,
        mode: str = MODE_CHARLM,
        charlm_fwd: CharLm | None = None,
        charlm_bwd: CharLm | None = None,
        char_vocab: Vocab | None = None,
    ):
        if mode not in (MODE_CHARLM, MODE_CHAR_BILSTM):
            raise DataError(f"unknown NER mode {mode!r}")
        if mode == MODE_CHARLM and (charlm_fwd is None or charlm_bwd is None):
            raise DataError("charlm mode requires both pretrained language models")
        self.vocab = vocab
        self.tag_inv = tag_inv
        self.config = config
        self.mode = mode
        self.charlm_fwd = charlm_fwd
        self.charlm_bwd = charlm_bwd
        c = config
        if mode == MODE_CHARLM:
            feat_dim = charlm_fwd.config.hidden_dim + charlm_bwd.config.hidden_dim
            self.char_vocab = None
            self.char_emb = None
            self.char_fwd = None
            self.char_bwd = None
        else:
            self.char_vocab = char_vocab or Vocab([])
            self.char_emb = Embedding(rng, len(self.char_vocab), c.char_emb_dim)
            self.char_fwd = LstmParams(rng, c.char_emb_dim, c.char_hidden_dim)
            self.char_bwd = LstmParams(rng, c.char_emb_dim, c.char_hidden_dim)
            feat_dim = 2 * c.char_hidden_dim
        self.word_emb = Embedding(rng, len(vocab), c.word_emb_dim)
        self.fwd = LstmParams(rng, c.word_emb_dim + feat_dim, c.hidden_dim)
        self.bwd = LstmParams(rng, c.word_emb_dim + feat_dim, c.hidden_dim)
        self.emit = Linear(rng, 2 * c.hidden_dim, len(tag_inv))
        self.crf = CrfParams(rng, len(tag_inv))

    def params(self):
        """Trainable parameters; frozen CharLM weights are deliberately absent."""
        out = {}
        out.update(self.word_emb.params("word_emb"))
        out.update(self.fwd.params("fwd"))
        out.update(self.bwd.params("bwd"))
        out.update(self.emit.params("emit"))
        out.update(self.crf.params("crf"))
        if self.mode == MODE_CHAR_BILSTM:
            out.update(self.char_emb.params("char_emb"))
            out.update(self.char_fwd.params("char_fwd"))
            out.update(self.char_bwd.params("char_bwd"))
        return out

    def meta(self):
        meta = {
            "kind": self.KIND,
            "vocab": self.vocab.to_json(),
            "tags": self.tag_inv.to_json(),
            "config": asdict(self.config),
            "mode": self.mode,
        }
        if self.mode == MODE_CHARLM:
            meta["charlm_fwd"] = self.charlm_fwd.meta()
            meta["charlm_bwd"] = self.charlm_bwd.meta()
        else:
            meta["char_vocab"] = self.char_vocab.to_json()
        return meta

    @classmethod
    def from_meta(cls, meta):
        rng = np.random.default_rng(0)
        kwargs = {}
        if meta["mode"] == MODE_CHARLM:
            kwargs["charlm_fwd"] = CharLm.from_meta(meta["charlm_fwd"])
            kwargs["charlm_bwd"] = CharLm.from_meta(meta["charlm_bwd"])
        else:
            kwargs["char_vocab"] = Vocab.from_json(meta["char_vocab"])
        return cls(
            rng,
            Vocab.from_json(meta["vocab"]),
            ClosedVocab.from_json(meta["tags"]),
            NerConfig(**meta["config"]),
            mode=meta["mode"],
            **kwargs,
        )

    def extra_params(self):
        """CharLM weights that ship with the package but never receive updates."""
        out = {}
        if self.mode == MODE_CHARLM:
            for prefix, lm in (("charlm_fwd", self.charlm_fwd), ("charlm_bwd", self.charlm_bwd)):
                for name, p in lm.params().items():
                    out[f"{prefix}.{name}"] = p
        return out

    def _char_feature(self, token: str):
        """Baseline mode: boundary states of the jointly trained char BiLSTM."""
        ids = self.char_vocab.ids(token)
        xs = [self.char_emb.one(i) for i in ids]
        states = bilstm_encode(xs, self.char_fwd, self.char_bwd)
        h = self.config.char_hidden_dim
        first = states[0]
        last = states[-1]
        return ad.concat([ad.narrow(last, 0, h), ad.narrow(first, h, 2 * h)])

    def emissions(self, tokens, spans=None):
        """(L, K) emission tensor for one sentence."""
        word_ids = self.vocab.ids(tokens)
        if self.mode == MODE_CHARLM:
            feats = contextual_embed(self.charlm_fwd, self.charlm_bwd, tokens, spans)
            xs = [
                ad.concat([self.word_emb.one(i), ad.constant(feats[k])])
                for k, i in enumerate(word_ids)
            ]
        else:
            xs = [
                ad.concat([self.word_emb.one(i), self._char_feature(t)])
                for i, t in zip(word_ids, tokens)
            ]
        states = bilstm_encode(xs, self.fwd, self.bwd)
        return self.emit(ad.stack(states))


def recognize(model: NerModel, tokens: list[str], spans=None) -> list[TaggedSpan]:
    if not tokens:
        return []
    emissions = model.emissions(tokens, spans).data
    path, _ = crf_viterbi(emissions, model.crf)
    tags = [model.tag_inv.symbol(i) for i in path]
    return decode_bioes(tags, tokens)


def _validate_corpus(corpus):
    if not corpus:
        raise DataError("empty NER corpus")
    types = set()
    for tokens, tags in corpus:
        if len(tokens) != len(tags):
            raise DataError(f"{len(tokens)} tokens with {len(tags)} tags")
        for tag in tags:
            prefix, etype = split_tag(tag)
            if prefix != "O":
                types.add(etype)
    tagset = {"O"}
    for t in sorted(types):
        tagset.update(f"{p}-{t}" for p in "BIES")
    return tagset


def train_ner(
    corpus: list[tuple[list[str], list[str]]],
    charlm_fwd: CharLm | None = None,
    charlm_bwd: CharLm | None = None,
    config: NerConfig | None = None,
    seed: int = 0,
    mode: str = MODE_CHARLM,
) -> NerModel:
    """Minimize sentence-level CRF negative log-likelihood.

    ``corpus`` rows are (tokens, BIOES tags). In charlm mode the language
    models stay frozen and their token features are precomputed once.
    """
    config = config or NerConfig()
    tagset = _validate_corpus(corpus)
    vocab = Vocab(t for tokens, _ in corpus for t in tokens)
    tag_inv = ClosedVocab(tagset)
    rng = np.random.default_rng(seed)
    char_vocab = None
    if mode == MODE_CHAR_BILSTM:
        char_vocab = Vocab(ch for tokens, _ in corpus for t in tokens for ch in t)
    model = NerModel(
        rng,
        vocab,
        tag_inv,
        config,
        mode=mode,
        charlm_fwd=charlm_fwd,
        charlm_bwd=charlm_bwd,
        char_vocab=char_vocab,
    )
    opt = Adam(model.params(), lr=config.lr)

    examples = []
    for tokens, tags in corpus:
        gold = [tag_inv.id(t) for t in tags]
        feats = None
        if mode == MODE_CHARLM:
            feats = contextual_embed(charlm_fwd, charlm_bwd, tokens)
        examples.append((tokens, gold, feats))

    word_ids = [vocab.ids(tokens) for tokens, _, _ in examples]
    for _ in range(config.epochs):
        order = rng.permutation(len(examples))
        for k in order:
            tokens, gold, feats = examples[k]
            drop = rng.random(len(tokens)) < config.word_dropout
            ids = [0 if d else i for i, d in zip(word_ids[k], drop)]
            if mode == MODE_CHARLM:
                xs = [
                    ad.concat([model.word_emb.one(i), ad.constant(feats[j])])
                    for j, i in enumerate(ids)
                ]
            else:
                xs = [
                    ad.concat([model.word_emb.one(i), model._char_feature(t)])
                    for i, t in zip(ids, tokens)
                ]
            states = bilstm_encode(xs, model.fwd, model.bwd)
            emissions = model.emit(ad.stack(states))
            loss = crf_nll(emissions, gold, model.crf)
            opt.zero_grad()
            backward(loss, model.params().values())
            opt.step()
    # No early stop here: the CRF keeps sharpening entity margins well after
    # training F1 saturates, and those margins carry the generalization.
    return model
