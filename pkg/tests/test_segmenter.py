"""Character-level tokenizer/sentence-splitter: label codec and training."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from biopipe.conllu import Treebank
from biopipe.errors import ContractError, DataError
from biopipe.segmenter import (
    INSIDE,
    SENTENCE_END,
    TOKEN_END,
    SegmenterConfig,
    _window_starts,
    decode_boundaries,
    make_char_labels,
    predict_labels,
    segment,
    train_segmenter,
)

from helpers import tiny_treebank


def test_labels_for_simple_sentence():
    text = "A cat."
    labels = make_char_labels(text, [[(0, 1), (2, 5), (5, 6)]])
    expected = np.array([TOKEN_END, INSIDE, INSIDE, INSIDE, TOKEN_END, SENTENCE_END])
    assert (labels == expected).all()


def test_labels_express_splits_inside_a_run():
    # "up-regulation" as three tokens needs no whitespace between them.
    text = "up-regulation"
    labels = make_char_labels(text, [[(0, 2), (2, 3), (3, 13)]])
    assert labels[1] == TOKEN_END
    assert labels[2] == TOKEN_END
    assert labels[12] == SENTENCE_END
    assert (labels[3:12] == INSIDE).all()


def test_labels_two_sentences():
    text = "Hi. Go."
    labels = make_char_labels(text, [[(0, 2), (2, 3)], [(4, 6), (6, 7)]])
    assert labels[1] == TOKEN_END and labels[2] == SENTENCE_END
    assert labels[5] == TOKEN_END and labels[6] == SENTENCE_END


@pytest.mark.parametrize(
    "spans",
    [
        [[(0, 9)]],
        [[(2, 1)]],
        [[(0, 3), (2, 5)]],
        [[(0, 5)]],
    ],
)
def test_label_construction_rejects_bad_spans(spans):
    with pytest.raises(DataError):
        make_char_labels("ab cd", spans)


def test_decode_inverts_make_labels():
    text = "A cat. It ran."
    sents = [[(0, 1), (2, 5), (5, 6)], [(7, 9), (10, 13), (13, 14)]]
    doc = decode_boundaries(text, make_char_labels(text, sents))
    assert [[(w.start_char, w.end_char) for w in s.words] for s in doc.sentences] == sents
    assert doc.sentences[0].tokens == ["A", "cat", "."]


def test_decode_requires_one_label_per_char():
    with pytest.raises(ContractError):
        decode_boundaries("abc", np.zeros(2, dtype=np.intp))


def test_decode_is_total_on_any_labels():
    # All INSIDE: whitespace still separates tokens, the tail is flushed.
    doc = decode_boundaries("ab cd", np.zeros(5, dtype=np.intp))
    assert len(doc.sentences) == 1
    assert doc.sentences[0].tokens == ["ab", "cd"]


def test_decode_ignores_labels_on_whitespace():
    labels = np.array([INSIDE, SENTENCE_END, INSIDE], dtype=np.intp)
    doc = decode_boundaries("a b", labels)
    assert len(doc.sentences) == 1
    assert doc.sentences[0].tokens == ["a", "b"]


def test_decode_tokens_never_contain_whitespace():
    text = "a  b\nc"
    for labels in (np.zeros(6), np.full(6, TOKEN_END), np.full(6, SENTENCE_END)):
        doc = decode_boundaries(text, labels.astype(np.intp))
        for sent in doc.sentences:
            for w in sent.words:
                assert not any(ch.isspace() for ch in w.text)
                assert text[w.start_char : w.end_char] == w.text


def test_empty_text_segments_to_empty_document():
    model = train_segmenter(tiny_treebank(), fast_config(), seed=0)
    doc = segment(model, "")
    assert doc.text == "" and doc.sentences == []


@st.composite
def segmentations(draw):
    n_sents = draw(st.integers(1, 3))
    text_parts = []
    sents = []
    pos = 0
    for _ in range(n_sents):
        spans = []
        for _ in range(draw(st.integers(1, 4))):
            tok = draw(st.text(alphabet="abc.-", min_size=1, max_size=3))
            glue = draw(st.booleans()) and spans
            if not glue and text_parts:
                text_parts.append(" ")
                pos += 1
            text_parts.append(tok)
            spans.append((pos, pos + len(tok)))
            pos += len(tok)
        sents.append(spans)
    return "".join(text_parts), sents


@settings(max_examples=150, deadline=None)
@given(segmentations())
def test_label_round_trip_property(case):
    text, sents = case
    doc = decode_boundaries(text, make_char_labels(text, sents))
    got = [[(w.start_char, w.end_char) for w in s.words] for s in doc.sentences]
    assert got == sents


def test_window_starts_cover_the_text():
    for n, window, stride in [(5, 10, 5), (20, 8, 4), (21, 8, 4), (8, 8, 4)]:
        starts = _window_starts(n, window, stride)
        covered = set()
        for s in starts:
            covered.update(range(s, min(s + window, n)))
        assert covered == set(range(n))
        assert starts == sorted(starts)


def fast_config():
    return SegmenterConfig(emb_dim=8, hidden_dim=12, window=48, stride=24, epochs=400, lr=8e-3)


@pytest.fixture(scope="module")
def trained():
    return train_segmenter(tiny_treebank(), fast_config(), seed=0)


def test_training_reproduces_gold_segmentation(trained):
    tb = tiny_treebank()
    doc = segment(trained, tb.raw_text())
    gold_spans = [span for sent in tb.sentences for span in sent.spans()]
    assert doc.token_spans() == gold_spans
    assert len(doc.sentences) == len(tb.sentences)


def test_prediction_is_deterministic(trained):
    text = tiny_treebank().raw_text()
    a = predict_labels(trained, text)
    b = predict_labels(trained, text)
    assert (a == b).all()


def test_unseen_characters_fall_back_to_unk(trained):
    doc = segment(trained, "Zq#7 cat.")
    assert doc.num_tokens >= 1
    assert doc.text == "Zq#7 cat."


def test_training_rejects_empty_or_spanless_input():
    with pytest.raises(DataError):
        train_segmenter(Treebank(sentences=[]), fast_config())
    spanless = tiny_treebank()
    for sent in spanless.sentences:
        for w in sent.words:
            w.misc = "_"
    with pytest.raises(DataError):
        train_segmenter(spanless, fast_config())
