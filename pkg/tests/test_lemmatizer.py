"""Ensemble lemmatizer: lexicon, shortcut routing, and the seq2seq decoder."""

import numpy as np
import pytest

from biopipe.conllu import Treebank, read_conllu
from biopipe.errors import DataError, DomainError
from biopipe.lemmatizer import (
    IDENTITY,
    LOWERCASE,
    SEQ2SEQ,
    LemmaSeq2Seq,
    LemmatizerConfig,
    _network_accuracy,
    _routed_lemma,
    build_lexicon,
    lemmatize,
    shortcut_label,
    train_lemmatizer,
)
from biopipe.vocab import ClosedVocab, Vocab

from helpers import tiny_treebank


def lexicon_treebank(rows):
    """rows: (form, upos, lemma) triples, one word per sentence."""
    lines = []
    for form, upos, lemma in rows:
        lines.append(f"1\t{form}\t{lemma}\t{upos}\tXT\t_\t0\troot\t_\t_")
        lines.append("")
    return read_conllu(("\n".join(lines) + "\n").encode())


def test_lexicon_picks_most_frequent_lemma():
    tb = lexicon_treebank([("saw", "NOUN", "saw"), ("saw", "VERB", "see"), ("saw", "VERB", "see")])
    lex = build_lexicon(tb)
    assert lex.lookup("saw", "VERB") == "see"
    assert lex.lookup("saw", "NOUN") == "saw"
    # Form-only fallback pools all tags: "see" wins 2-1.
    assert lex.lookup("saw", "ADJ") == "see"


def test_lexicon_breaks_ties_toward_smaller_lemma():
    tb = lexicon_treebank([("x", "X", "b"), ("x", "X", "a")])
    assert build_lexicon(tb).lookup("x", "X") == "a"


def test_lexicon_ignores_unset_lemmas():
    tb = read_conllu(b"1\tfoo\t_\tX\tXT\t_\t0\troot\t_\t_\n\n")
    lex = build_lexicon(tb)
    assert lex.lookup("foo", "X") is None


def test_lexicon_miss_returns_none():
    assert build_lexicon(lexicon_treebank([("a", "X", "a")])).lookup("zz", "X") is None


def test_shortcut_labels():
    assert shortcut_label("cat", "cat") == IDENTITY
    assert shortcut_label("The", "the") == LOWERCASE
    assert shortcut_label("sat", "sit") == SEQ2SEQ
    # Identity wins over lowercase when both apply.
    assert shortcut_label("cat", "cat") != LOWERCASE


def fast_config(**kw):
    base = dict(
        char_emb_dim=10, tag_emb_dim=6, enc_hidden=12, dec_hidden=16,
        attn_dim=8, epochs=200, lr=8e-3,
    )
    base.update(kw)
    return LemmatizerConfig(**base)


@pytest.fixture(scope="module")
def trained():
    lexicon, model = train_lemmatizer(tiny_treebank(), fast_config(), seed=0)
    return lexicon, model


def test_training_reproduces_gold_lemmas(trained):
    lexicon, model = trained
    for sent in tiny_treebank().sentences:
        for w in sent.words:
            assert lemmatize(lexicon, model, w.form, w.upos) == w.lemma


def test_network_alone_masters_the_training_set(trained):
    # The early-stop criterion: shortcut + decoder with the lexicon bypassed.
    _, model = trained
    triples = sorted(
        {(w.form, w.upos, w.lemma) for s in tiny_treebank().sentences for w in s.words}
    )
    assert _network_accuracy(model, triples) == 1.0


def test_counters_track_resolution_paths(trained):
    lexicon, model = trained
    model.counters.clear()
    lemmatize(lexicon, model, "cat", "NOUN")
    assert model.counters["lexicon"] == 1
    lemmatize(lexicon, model, "zzzgrok", "NOUN")  # out of vocabulary
    assert model.counters["shortcut"] + model.counters["decoded"] == 1


def test_routed_lemma_shortcuts_do_not_touch_the_decoder(trained):
    _, model = trained
    assert _routed_lemma(model, "Whatever", "X", IDENTITY) == "Whatever"
    assert _routed_lemma(model, "Whatever", "X", LOWERCASE) == "whatever"


def test_lemma_is_never_empty():
    # An untrained decoder may emit EOS immediately; the form must come back.
    rng_model = LemmaSeq2Seq(
        np.random.default_rng(0),
        Vocab("ab", extra=["<s>", "</s>"]),
        ClosedVocab(["X"]),
        fast_config(epochs=1),
    )
    for route in (IDENTITY, LOWERCASE, SEQ2SEQ):
        assert _routed_lemma(rng_model, "ab", "X", route) != ""


def test_decode_length_is_capped(trained):
    _, model = trained
    cap = 2 * len("cat") + model.config.max_extra
    assert len(model.decode_greedy("cat", "NOUN")) <= cap


def test_unknown_upos_is_tolerated(trained):
    lexicon, model = trained
    assert lemmatize(lexicon, model, "cat", "NO_SUCH_TAG") == "cat"


def test_empty_form_rejected(trained):
    lexicon, model = trained
    with pytest.raises(DomainError):
        lemmatize(lexicon, model, "", "NOUN")


def test_empty_treebank_rejected():
    with pytest.raises(DataError):
        train_lemmatizer(Treebank(sentences=[]), fast_config())


def test_lemma_free_treebank_rejected():
    raw = b"1\tfoo\t_\tX\tXT\t_\t0\troot\t_\t_\n\n"
    with pytest.raises(DataError):
        train_lemmatizer(read_conllu(raw), fast_config())
