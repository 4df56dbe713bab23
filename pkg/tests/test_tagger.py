"""Bi-level POS tagger: word vectors, training, and error contracts."""

import numpy as np
import pytest

from biopipe.conllu import Treebank, read_conllu
from biopipe.errors import DataError, DomainError
from biopipe.tagger import (
    TaggerConfig,
    read_word_vectors,
    tag_sentence,
    train_tagger,
)

from helpers import TINY_SENTENCES, tiny_treebank


def fast_config(**kw):
    base = dict(emb_dim=10, tag_emb_dim=6, hidden_dim=14, epochs=200, lr=8e-3)
    base.update(kw)
    return TaggerConfig(**base)


@pytest.fixture(scope="module")
def trained():
    return train_tagger(tiny_treebank(), fast_config(), seed=0)


def test_training_reproduces_gold_tags(trained):
    for rows in TINY_SENTENCES:
        forms = [r[0] for r in rows]
        upos, xpos = tag_sentence(trained, forms)
        assert upos == [r[2] for r in rows]
        assert xpos == [r[3] for r in rows]


def test_tagging_is_deterministic(trained):
    forms = ["The", "cat", "sat", "."]
    assert tag_sentence(trained, forms) == tag_sentence(trained, forms)


def test_unknown_words_still_get_tags(trained):
    upos, xpos = tag_sentence(trained, ["Floober", "grokked", "."])
    assert len(upos) == len(xpos) == 3
    assert all(u in trained.upos_inv.index for u in upos)


def test_empty_sentence_rejected(trained):
    with pytest.raises(DomainError):
        tag_sentence(trained, [])


def test_empty_treebank_rejected():
    with pytest.raises(DataError):
        train_tagger(Treebank(sentences=[]), fast_config())


def test_unannotated_treebank_rejected():
    raw = b"1\tword\tword\t_\t_\t_\t0\troot\t_\t_\n\n"
    with pytest.raises(DataError) as err:
        train_tagger(read_conllu(raw), fast_config())
    assert "UPOS" in str(err.value)


def test_partially_tagged_treebank_rejected():
    raw = (
        b"1\ta\ta\tDET\tDT\t_\t2\tdet\t_\t_\n"
        b"2\tcat\tcat\tNOUN\t_\t_\t0\troot\t_\t_\n\n"
    )
    with pytest.raises(DataError) as err:
        train_tagger(read_conllu(raw), fast_config())
    assert "cat" in str(err.value)


def test_read_word_vectors(tmp_path):
    path = tmp_path / "vec.txt"
    path.write_text("cat 0.1 0.2\ndog 0.3 0.4\n\nsat -1 2\n")
    words, vecs = read_word_vectors(path)
    assert words == ["cat", "dog", "sat"]
    assert vecs.shape == (3, 2)
    assert vecs[2, 0] == pytest.approx(-1.0)


@pytest.mark.parametrize(
    "content, fragment",
    [
        ("cat\n", "line 1"),
        ("cat 0.1\ndog x\n", "line 2"),
        ("cat 0.1 0.2\ndog 0.3\n", "inconsistent"),
    ],
)
def test_read_word_vectors_errors(tmp_path, content, fragment):
    path = tmp_path / "vec.txt"
    path.write_text(content)
    with pytest.raises(DataError) as err:
        read_word_vectors(path)
    assert fragment in str(err.value)


def test_pretrained_vectors_are_attached_and_frozen(tmp_path):
    words = ["cat", "sat", "unrelated"]
    vecs = np.array([[1.0, 0.0], [0.0, 1.0], [5.0, 5.0]])
    model = train_tagger(
        tiny_treebank(), fast_config(epochs=2), seed=0, pretrained=(words, vecs)
    )
    assert model.pretrained is not None
    assert model.pretrained.shape[1] == 2
    cat_row = model.pretrained[model.vocab.id("cat")]
    assert cat_row == pytest.approx([1.0, 0.0])
    # Words absent from the external table get zero rows.
    dog_row = model.pretrained[model.vocab.id("Dogs")]
    assert dog_row == pytest.approx([0.0, 0.0])
    assert "pretrained" in model.extra_arrays()


def test_bundled_vector_file_parses():
    from pathlib import Path

    path = Path(__file__).resolve().parent.parent / "data" / "vectors" / "toy_vectors.txt"
    words, vecs = read_word_vectors(path)
    assert len(words) == vecs.shape[0] > 0
