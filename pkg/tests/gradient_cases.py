"""Three-word loss fixtures for every trainable model, for gradient checking.

Each builder returns (loss_fn, params): a zero-argument loss that rebuilds its
graph from the current parameter values, and the full parameter dict, so a
finite-difference probe can sweep every scalar.
"""

from __future__ import annotations

import numpy as np

from biopipe import autodiff as ad
from biopipe.autodiff import backward  # noqa: F401  (re-export for callers)
from biopipe.charlm import CharLm, CharLmConfig, Direction, contextual_embed
from biopipe.crf import crf_nll
from biopipe.layers import biaffine_score, bilstm_encode, lstm_step
from biopipe.lemmatizer import LemmaSeq2Seq, LemmatizerConfig, shortcut_label
from biopipe.ner import MODE_CHAR_BILSTM, MODE_CHARLM, NerConfig, NerModel
from biopipe.depparser import ParserConfig, ParserModel, _arc_matrix
from biopipe.segmenter import SegmenterConfig, SegmenterModel, make_char_labels
from biopipe.tagger import TaggerConfig, TaggerModel
from biopipe.vocab import ClosedVocab, Vocab

WORDS = ["sore", "throat", "."]
UPOS = ["ADJ", "NOUN", "PUNCT"]
XPOS = ["JJ", "NN", "."]
HEADS = [2, 0, 2]
RELS = ["amod", "root", "punct"]


def segmenter_case(seed=0):
    text = "to my ear."
    spans = [[(0, 2), (3, 5), (6, 9), (9, 10)]]
    labels = make_char_labels(text, spans)
    config = SegmenterConfig(emb_dim=5, hidden_dim=6)
    model = SegmenterModel(np.random.default_rng(seed), Vocab(set(text)), config)
    ids = model.vocab.ids(text)

    def loss_fn():
        xs = [model.emb.one(int(i)) for i in ids]
        states = ad.stack(bilstm_encode(xs, model.fwd, model.bwd))
        return ad.cross_entropy(model.proj(states), labels)

    return loss_fn, model.params()


def tagger_case(seed=0):
    config = TaggerConfig(emb_dim=5, tag_emb_dim=4, hidden_dim=6)
    model = TaggerModel(
        np.random.default_rng(seed),
        Vocab(WORDS),
        ClosedVocab(UPOS),
        ClosedVocab(XPOS),
        config,
    )
    word_ids = model.vocab.ids(WORDS)
    gold_u = [model.upos_inv.id(u) for u in UPOS]
    gold_x = [model.xpos_inv.id(x) for x in XPOS]

    def loss_fn():
        states = model.encode(word_ids)
        upos_logits = ad.stack([model.upos_head(s) for s in states])
        xpos_logits = ad.stack(
            [
                biaffine_score(s, model.upos_emb.one(int(u)), model.xpos_scorer)
                for s, u in zip(states, gold_u)
            ]
        )
        return ad.cross_entropy(upos_logits, gold_u) + ad.cross_entropy(xpos_logits, gold_x)

    return loss_fn, model.params()


def lemmatizer_case(seed=0):
    form, upos, lemma = "Saw", "VERB", "see"
    config = LemmatizerConfig(char_emb_dim=5, tag_emb_dim=4, enc_hidden=5, dec_hidden=6, attn_dim=4)
    chars = Vocab(set(form + lemma), extra=["<s>", "</s>"])
    model = LemmaSeq2Seq(np.random.default_rng(seed), chars, ClosedVocab([upos]), config)
    bos, eos = chars.id("<s>"), chars.id("</s>")

    def loss_fn():
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
        return seq_loss + route_loss

    return loss_fn, model.params()


def parser_case(seed=0):
    config = ParserConfig(word_emb_dim=5, tag_emb_dim=4, hidden_dim=6, arc_dim=5, rel_dim=4)
    model = ParserModel(
        np.random.default_rng(seed),
        Vocab(WORDS),
        ClosedVocab(UPOS),
        ClosedVocab(XPOS),
        ClosedVocab(RELS),
        config,
    )
    n = len(WORDS)
    mask = np.zeros((n, n + 1))
    mask[np.arange(n), np.arange(1, n + 1)] = -1e9

    def loss_fn():
        arc_h, arc_d, rel_h, rel_d = model._encode(WORDS, UPOS, XPOS)
        arcs = _arc_matrix(model, arc_h, arc_d)
        dep_logits = ad.narrow(ad.transpose(arcs), 1, n + 1)
        arc_loss = ad.cross_entropy(dep_logits + ad.constant(mask), HEADS)
        rel_logits = ad.stack(
            [
                biaffine_score(ad.row(rel_h, h), ad.row(rel_d, d + 1), model.rel_scorer)
                for d, h in enumerate(HEADS)
            ]
        )
        rel_loss = ad.cross_entropy(rel_logits, model.rel_inv.ids(RELS))
        return arc_loss + rel_loss

    return loss_fn, model.params()


def charlm_case(seed=0):
    text = "throat hurts."
    config = CharLmConfig(emb_dim=5, hidden_dim=6, chunk_len=len(text))
    model = CharLm(np.random.default_rng(seed), Vocab(set(text)), Direction.FORWARD, config)
    ids = model.vocab.ids(text)
    inputs, targets = ids[:-1], ids[1:]

    def loss_fn():
        h, c = model.lstm.zero_state()
        hs = []
        for i in inputs:
            h, c = lstm_step(model.emb.one(int(i)), h, c, model.lstm)
            hs.append(h)
        return ad.cross_entropy(model.proj(ad.stack(hs)), targets)

    return loss_fn, model.params()


NER_TAGS = ["B-problem", "E-problem", "O"]


def _ner_tagset():
    return ClosedVocab(["O"] + [f"{p}-problem" for p in "BIES"])


def ner_charlm_case(seed=0):
    lm_cfg = CharLmConfig(emb_dim=4, hidden_dim=5)
    rng = np.random.default_rng(seed + 100)
    chars = Vocab(set(" ".join(WORDS)))
    fwd = CharLm(rng, chars, Direction.FORWARD, lm_cfg)
    bwd = CharLm(np.random.default_rng(seed + 200), chars, Direction.BACKWARD, lm_cfg)
    config = NerConfig(word_emb_dim=5, hidden_dim=6)
    model = NerModel(
        np.random.default_rng(seed),
        Vocab(WORDS),
        _ner_tagset(),
        config,
        mode=MODE_CHARLM,
        charlm_fwd=fwd,
        charlm_bwd=bwd,
    )
    gold = [model.tag_inv.id(t) for t in NER_TAGS]
    feats = contextual_embed(fwd, bwd, WORDS)
    word_ids = model.vocab.ids(WORDS)

    def loss_fn():
        xs = [
            ad.concat([model.word_emb.one(i), ad.constant(feats[k])])
            for k, i in enumerate(word_ids)
        ]
        states = bilstm_encode(xs, model.fwd, model.bwd)
        return crf_nll(model.emit(ad.stack(states)), gold, model.crf)

    return loss_fn, model.params()


def ner_baseline_case(seed=0):
    config = NerConfig(word_emb_dim=5, hidden_dim=6, char_emb_dim=4, char_hidden_dim=4)
    model = NerModel(
        np.random.default_rng(seed),
        Vocab(WORDS),
        _ner_tagset(),
        config,
        mode=MODE_CHAR_BILSTM,
        char_vocab=Vocab(set("".join(WORDS))),
    )
    gold = [model.tag_inv.id(t) for t in NER_TAGS]
    word_ids = model.vocab.ids(WORDS)

    def loss_fn():
        xs = [
            ad.concat([model.word_emb.one(i), model._char_feature(t)])
            for i, t in zip(word_ids, WORDS)
        ]
        states = bilstm_encode(xs, model.fwd, model.bwd)
        return crf_nll(model.emit(ad.stack(states)), gold, model.crf)

    return loss_fn, model.params()


ALL_CASES = {
    "segmenter": segmenter_case,
    "tagger": tagger_case,
    "lemmatizer": lemmatizer_case,
    "parser": parser_case,
    "charlm": charlm_case,
    "ner-charlm": ner_charlm_case,
    "ner-baseline": ner_baseline_case,
}
