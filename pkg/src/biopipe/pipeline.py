"""Pipeline assembly and the end-to-end annotation API.

Processors run in dependency order: tokenize -> pos -> lemma -> depparse,
with ner depending only on tokenize. Each downstream processor consumes the
predictions of its predecessors, never gold input, except in the dedicated
gold-token / gold-tag evaluation modes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .conllu import Treebank, treebank_to_document
from .document import Document, Entity, Sentence, Word
from .depparser import parse_sentence
from .errors import ConfigError, InputError
from .lemmatizer import Lemmatizer
from .ner import recognize
from .package import load_package, resolve_package
from .segmenter import segment
from .tagger import tag_sentence

PROCESSOR_ORDER = ("tokenize", "pos", "lemma", "depparse", "ner")


@dataclass
class PipelineConfig:
    package: str
    processors: dict[str, str] = field(default_factory=dict)
    pretokenized: bool = False


class Pipeline:
    """Immutable bundle of frozen processors; safe for concurrent annotate calls."""

    def __init__(self, models: dict, pretokenized: bool = False):
        for proc in models:
            if proc not in PROCESSOR_ORDER:
                raise ConfigError(f"unknown processor {proc!r}")
        self.models = dict(models)
        self.pretokenized = pretokenized

    def __contains__(self, proc: str) -> bool:
        return proc in self.models

    def analyze_tokens(self, tokens: list[str]):
        """Tag, lemmatize and parse one pre-segmented sentence.

        Returns (upos, xpos, lemmas, tree); the syntactic processors must all
        be present.
        """
        upos, xpos = tag_sentence(self.models["pos"], tokens)
        lemmatizer: Lemmatizer = self.models["lemma"]
        lemmas = [lemmatizer(t, u) for t, u in zip(tokens, upos)]
        tree = parse_sentence(self.models["depparse"], tokens, upos, xpos)
        return upos, xpos, lemmas, tree

    def __call__(self, text: str) -> Document:
        return annotate(self, text)


def build_pipeline(config: PipelineConfig, registry) -> Pipeline:
    """Load a package from the registry and apply processor overrides.

    An override value names another package whose processor of that slot is
    attached in place of (or in addition to) the base package's.
    """
    base_dir = resolve_package(registry, config.package)
    models = load_package(base_dir)
    for proc, source in config.processors.items():
        if proc not in PROCESSOR_ORDER:
            raise ConfigError(f"unknown processor {proc!r}")
        other = load_package(resolve_package(registry, source))
        if proc not in other:
            raise ConfigError(f"package {source!r} does not provide {proc!r}")
        models[proc] = other[proc]
    # Training-time artifacts (pretrained language models) are not processors.
    models = {k: v for k, v in models.items() if k in PROCESSOR_ORDER}
    return Pipeline(models, pretokenized=config.pretokenized)


def _annotate_sentences(pipeline: Pipeline, doc: Document) -> Document:
    """Run pos/lemma/depparse/ner over tokenized sentences in place."""
    for sent in doc.sentences:
        tokens = sent.tokens
        if "pos" in pipeline:
            upos, xpos = tag_sentence(pipeline.models["pos"], tokens)
            for w, u, x in zip(sent.words, upos, xpos):
                w.upos = u
                w.xpos = x
        if "lemma" in pipeline:
            lemmatizer: Lemmatizer = pipeline.models["lemma"]
            for w in sent.words:
                w.lemma = lemmatizer(w.text, w.upos or "X")
        if "depparse" in pipeline:
            upos = [w.upos or "X" for w in sent.words]
            xpos = [w.xpos or "X" for w in sent.words]
            tree = parse_sentence(pipeline.models["depparse"], tokens, upos, xpos)
            for w, h, r in zip(sent.words, tree.heads, tree.deprels):
                w.head = int(h)
                w.deprel = r
    if "ner" in pipeline:
        entities = []
        for sent in doc.sentences:
            spans = [(w.start_char, w.end_char) for w in sent.words]
            for ent in recognize(pipeline.models["ner"], sent.tokens, spans):
                start_char = sent.words[ent.start].start_char
                end_char = sent.words[ent.end - 1].end_char
                entities.append(
                    Entity(
                        text=doc.text[start_char:end_char],
                        type=ent.type,
                        start_char=start_char,
                        end_char=end_char,
                    )
                )
        doc.entities = entities
    return doc


def annotate(pipeline: Pipeline, text: str) -> Document:
    """Segment raw text, then run every attached processor over it."""
    try:
        text.encode("utf-8")
    except UnicodeEncodeError as exc:
        raise InputError("text is not valid UTF-8") from exc
    if text == "":
        return Document(text="", sentences=[])
    if "tokenize" not in pipeline:
        raise ConfigError("pipeline has no tokenizer; use annotate_pretokenized")
    doc = segment(pipeline.models["tokenize"], text)
    return _annotate_sentences(pipeline, doc)


def annotate_pretokenized(pipeline: Pipeline, sentences: list[list[str]]) -> Document:
    """Adopt the caller's tokens verbatim, joining them with single spaces."""
    words_per_sent = []
    pos = 0
    for tokens in sentences:
        words = []
        for tok in tokens:
            if tok == "" or any(ch.isspace() for ch in tok):
                raise InputError(f"invalid pre-supplied token {tok!r}")
            words.append(
                Word(id=len(words) + 1, text=tok, start_char=pos, end_char=pos + len(tok))
            )
            pos += len(tok) + 1
        if words:
            words_per_sent.append(words)
    text = " ".join(" ".join(tokens) for tokens in sentences if tokens)
    doc = Document(text=text, sentences=[Sentence(words=w) for w in words_per_sent])
    return _annotate_sentences(pipeline, doc)


def annotate_treebank(pipeline: Pipeline, gold: Treebank, mode: str = "end2end") -> Document:
    """Annotate a gold treebank under one of the evaluation protocols.

    end2end: raw text in, everything predicted. goldtok: gold tokens and
    sentences, tags onward predicted. goldtag: gold tokens plus gold UPOS/XPOS
    fed to the lemmatizer and parser.
    """
    if mode == "end2end":
        return annotate(pipeline, gold.raw_text())
    if mode not in ("goldtok", "goldtag"):
        raise ConfigError(f"unknown evaluation mode {mode!r}")
    gold_doc = treebank_to_document(gold)
    doc = Document(
        text=gold_doc.text,
        sentences=[
            Sentence(
                words=[
                    Word(
                        id=w.id,
                        text=w.text,
                        start_char=w.start_char,
                        end_char=w.end_char,
                        upos=w.upos if mode == "goldtag" else None,
                        xpos=w.xpos if mode == "goldtag" else None,
                    )
                    for w in sent.words
                ]
            )
            for sent in gold_doc.sentences
        ],
    )
    if mode == "goldtag":
        # Tags are given; only lemma/depparse/ner get to predict.
        reduced = Pipeline(
            {k: v for k, v in pipeline.models.items() if k not in ("tokenize", "pos")},
        )
        return _annotate_sentences(reduced, doc)
    reduced = Pipeline({k: v for k, v in pipeline.models.items() if k != "tokenize"})
    return _annotate_sentences(reduced, doc)
