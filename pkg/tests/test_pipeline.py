"""Pipeline assembly, annotation modes, and the bundled toy packages."""

from pathlib import Path

import pytest

from biopipe.conllu import read_conllu
from biopipe.errors import ConfigError, InputError
from biopipe.pipeline import (
    Pipeline,
    PipelineConfig,
    annotate,
    annotate_pretokenized,
    annotate_treebank,
    build_pipeline,
)

DATA = Path(__file__).resolve().parent.parent / "data"
REGISTRY = DATA / "registry"

CLINICAL = "He has a sore throat and was given Cepacol lozenges."


@pytest.fixture(scope="module")
def clinical():
    config = PipelineConfig(package="toy-mimic", processors={"ner": "toy-i2b2"})
    return build_pipeline(config, REGISTRY)


@pytest.fixture(scope="module")
def bio():
    return build_pipeline(PipelineConfig(package="toy-craft"), REGISTRY)


def test_unknown_processor_rejected():
    with pytest.raises(ConfigError):
        Pipeline({"frobnicate": object()})


def test_override_must_name_known_processor():
    config = PipelineConfig(package="toy-mimic", processors={"frobnicate": "toy-i2b2"})
    with pytest.raises(ConfigError):
        build_pipeline(config, REGISTRY)


def test_override_package_must_provide_the_slot():
    config = PipelineConfig(package="toy-mimic", processors={"pos": "toy-i2b2"})
    with pytest.raises(ConfigError) as err:
        build_pipeline(config, REGISTRY)
    assert "toy-i2b2" in str(err.value)


def test_unknown_package_lists_available():
    with pytest.raises(ConfigError) as err:
        build_pipeline(PipelineConfig(package="nope"), REGISTRY)
    assert "toy-mimic" in str(err.value)


def test_full_clinical_annotation(clinical):
    doc = clinical(CLINICAL)
    assert doc.text == CLINICAL
    assert len(doc.sentences) == 1
    words = doc.sentences[0].words
    assert [w.text for w in words] == CLINICAL.replace(".", " .").split()
    for w in words:
        assert w.upos is not None
        assert w.xpos is not None
        assert w.lemma is not None
        assert w.head is not None
        assert w.deprel is not None
        assert doc.text[w.start_char : w.end_char] == w.text
    assert sum(w.head == 0 for w in words) == 1


def test_clinical_entities(clinical):
    doc = annotate(clinical, CLINICAL)
    got = {(e.text, e.type) for e in doc.entities}
    assert got == {("sore throat", "problem"), ("Cepacol lozenges", "treatment")}
    for e in doc.entities:
        assert doc.text[e.start_char : e.end_char] == e.text


def test_annotation_is_deterministic(clinical):
    a = annotate(clinical, CLINICAL)
    b = annotate(clinical, CLINICAL)
    assert a == b


def test_empty_text(clinical):
    doc = annotate(clinical, "")
    assert doc.text == "" and doc.sentences == []


def test_missing_tokenizer_is_config_error(clinical):
    headless = Pipeline({"ner": clinical.models["ner"]})
    with pytest.raises(ConfigError):
        annotate(headless, "some text")


def test_pretokenized_tokens_adopted_verbatim(clinical):
    doc = annotate_pretokenized(clinical, [["Continue", "Cepacol", "lozenges"], ["Stable", "."]])
    assert doc.text == "Continue Cepacol lozenges Stable ."
    assert [s.tokens for s in doc.sentences] == [
        ["Continue", "Cepacol", "lozenges"],
        ["Stable", "."],
    ]
    # The pipeline's own tokenizer would split "lozenges." differently;
    # pretokenized input is never re-segmented.
    doc2 = annotate_pretokenized(clinical, [["lozenges."]])
    assert doc2.sentences[0].tokens == ["lozenges."]


def test_pretokenized_rejects_bad_tokens(clinical):
    with pytest.raises(InputError):
        annotate_pretokenized(clinical, [["ok", "has space"]])
    with pytest.raises(InputError):
        annotate_pretokenized(clinical, [[""]])


def test_pretokenized_skips_empty_sentences(clinical):
    doc = annotate_pretokenized(clinical, [[], ["fine", "."]])
    assert len(doc.sentences) == 1


def test_analyze_tokens_alignment(clinical):
    tokens = ["Continue", "Cepacol", "."]
    upos, xpos, lemmas, tree = clinical.analyze_tokens(tokens)
    assert len(upos) == len(xpos) == len(lemmas) == len(tree.heads) == 3
    assert tree.heads.count(0) == 1


def test_annotate_treebank_end2end_uses_raw_text(bio):
    gold = read_conllu((DATA / "treebanks" / "toy_bio-test.conllu").read_bytes())
    doc = annotate_treebank(bio, gold, mode="end2end")
    assert doc.text == gold.raw_text()


def test_annotate_treebank_goldtok_keeps_gold_spans(bio):
    gold = read_conllu((DATA / "treebanks" / "toy_bio-test.conllu").read_bytes())
    doc = annotate_treebank(bio, gold, mode="goldtok")
    gold_spans = [s for sent in gold.sentences for s in sent.spans()]
    assert doc.token_spans() == gold_spans
    assert all(w.upos is not None for s in doc.sentences for w in s.words)


def test_annotate_treebank_goldtag_keeps_gold_tags(bio):
    gold = read_conllu((DATA / "treebanks" / "toy_bio-test.conllu").read_bytes())
    doc = annotate_treebank(bio, gold, mode="goldtag")
    gold_words = [w for sent in gold.sentences for w in sent.words]
    sys_words = [w for sent in doc.sentences for w in sent.words]
    assert [w.upos for w in sys_words] == [w.upos for w in gold_words]
    assert [w.xpos for w in sys_words] == [w.xpos for w in gold_words]
    assert all(w.head is not None for w in sys_words)


def test_annotate_treebank_unknown_mode(bio):
    gold = read_conllu((DATA / "treebanks" / "toy_bio-test.conllu").read_bytes())
    with pytest.raises(ConfigError):
        annotate_treebank(bio, gold, mode="sideways")


def test_flagship_bio_sentence(bio):
    text = "A single-cell transcriptomic atlas characterizes ageing tissues in the mouse."
    doc = annotate(bio, text)
    tokens = [w.text for s in doc.sentences for w in s.words]
    assert "single" in tokens and "-" in tokens and "cell" in tokens
    assert tokens[-1] == "."
