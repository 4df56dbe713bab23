"""Note collections, stratified splitting, NER corpus I/O, silver treebanks.

The silver-treebank harness annotates raw notes that were tokenized by an
injectable external hook, writing the result as a gold-format treebank; a
bundled regex tokenizer serves as the default hook so no external runtime is
needed.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .conllu import ConlluSentence, ConlluWord, Treebank
from .errors import DataError
from .ner import decode_bioes, encode_bioes, split_tag

_TOKEN_RE = re.compile(r"\w+|[^\w\s]", flags=re.UNICODE)
_SENT_FINAL = {".", "!", "?"}


@dataclass
class NoteCollection:
    """Raw clinical-style documents addressed by unique string identifiers."""

    notes: list[tuple[str, str]] = field(default_factory=list)

    def __post_init__(self):
        ids = [nid for nid, _ in self.notes]
        if len(ids) != len(set(ids)):
            raise DataError("duplicate note identifiers")

    def __len__(self):
        return len(self.notes)

    def ids(self):
        return [nid for nid, _ in self.notes]


def read_notes(directory) -> NoteCollection:
    """One UTF-8 file per note; the file name (sans suffix) is the identifier."""
    root = Path(directory)
    if not root.is_dir():
        raise DataError(f"note directory {root} does not exist")
    notes = []
    for path in sorted(root.iterdir()):
        if path.is_file():
            notes.append((path.stem, path.read_text(encoding="utf-8")))
    return NoteCollection(notes=notes)


def _largest_remainder(n: int, ratios) -> list[int]:
    total = float(sum(ratios))
    quotas = [n * r / total for r in ratios]
    base = [int(q) for q in quotas]
    short = n - sum(base)
    by_frac = sorted(range(len(ratios)), key=lambda i: (-(quotas[i] - base[i]), i))
    for i in by_frac[:short]:
        base[i] += 1
    return base


def stratified_split(
    notes: NoteCollection, ratios=(6, 1, 1), seed: int = 0
) -> tuple[NoteCollection, NoteCollection, NoteCollection]:
    """Disjoint, exhaustive train/dev/test split with largest-remainder sizes."""
    if len(notes) < 3:
        raise DataError(f"need at least 3 notes to split, got {len(notes)}")
    if len(ratios) != 3 or any(r <= 0 for r in ratios):
        raise DataError(f"ratios must be three positive numbers, got {ratios!r}")
    sizes = _largest_remainder(len(notes), ratios)
    rng = np.random.default_rng(seed)
    order = rng.permutation(len(notes))
    picked = [notes.notes[i] for i in order]
    train = picked[: sizes[0]]
    dev = picked[sizes[0] : sizes[0] + sizes[1]]
    test = picked[sizes[0] + sizes[1] :]
    return (
        NoteCollection(notes=sorted(train)),
        NoteCollection(notes=sorted(dev)),
        NoteCollection(notes=sorted(test)),
    )


def read_ner_corpus(data: bytes) -> list[tuple[list[str], list[str]]]:
    """Token-tab-tag lines, blank-line sentence breaks; BIO becomes BIOES."""
    text = data.decode("utf-8")
    sentences = []
    tokens: list[str] = []
    tags: list[str] = []

    def flush():
        nonlocal tokens, tags
        if tokens:
            # Normalizing through decode/encode turns BIO (and any stray
            # fragment) into canonical BIOES.
            spans = decode_bioes(tags)
            sentences.append((tokens, encode_bioes(spans, len(tokens))))
            tokens = []
            tags = []

    for lineno, line in enumerate(text.split("\n"), start=1):
        if line.strip() == "":
            flush()
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise DataError(f"line {lineno}: expected token<TAB>tag, got {line!r}")
        token, tag = parts
        try:
            split_tag(tag)
        except DataError as exc:
            raise DataError(f"line {lineno}: {exc}") from None
        tokens.append(token)
        tags.append(tag)
    flush()
    return sentences


def write_ner_corpus(sentences) -> bytes:
    blocks = []
    for tokens, tags in sentences:
        blocks.append("\n".join(f"{t}\t{g}" for t, g in zip(tokens, tags)))
    return ("\n\n".join(blocks) + "\n").encode("utf-8") if blocks else b""


def default_tokenization_hook(text: str):
    """Regex tokenizer standing in for an external rule-based one.

    Tokens are maximal word-character runs or single punctuation marks;
    sentences end after ., ! or ?. Returns per-sentence lists of (start, end)
    character spans.
    """
    sentences = []
    current: list[tuple[int, int]] = []
    for m in _TOKEN_RE.finditer(text):
        current.append((m.start(), m.end()))
        if m.group() in _SENT_FINAL:
            sentences.append(current)
            current = []
    if current:
        sentences.append(current)
    return sentences


def _check_hook_output(text: str, sentences) -> None:
    prev = 0
    for spans in sentences:
        if not spans:
            raise DataError("tokenization hook produced an empty sentence")
        for start, end in spans:
            if not (0 <= start < end <= len(text)):
                raise DataError(f"hook span [{start}, {end}) out of range")
            if start < prev:
                raise DataError(f"hook span [{start}, {end}) overlaps or goes backwards")
            if any(ch.isspace() for ch in text[start:end]):
                raise DataError(f"hook token [{start}, {end}) contains whitespace")
            prev = end


def build_silver_treebank(notes: NoteCollection, tokenization_hook, pipeline) -> Treebank:
    """Annotate externally tokenized notes into a UD treebank.

    Notes are laid out one after another in a shared coordinate space
    (separated by two characters) so that all offsets index one string.
    """
    sentences: list[ConlluSentence] = []
    offset = 0
    for _, text in notes.notes:
        hook_sents = tokenization_hook(text)
        _check_hook_output(text, hook_sents)
        for spans in hook_sents:
            tokens = [text[s:e] for s, e in spans]
            upos, xpos, lemmas, tree = pipeline.analyze_tokens(tokens)
            words = []
            for k, (tok, (s, e)) in enumerate(zip(tokens, spans)):
                words.append(
                    ConlluWord(
                        id=k + 1,
                        form=tok,
                        lemma=lemmas[k],
                        upos=upos[k],
                        xpos=xpos[k],
                        feats="_",
                        head=tree.heads[k],
                        deprel=tree.deprels[k],
                        deps="_",
                        misc=f"start_char={offset + s}|end_char={offset + e}",
                    )
                )
            sent_text = text[spans[0][0] : spans[-1][1]].replace("\n", " ")
            sentences.append(
                ConlluSentence(words=words, comments=[f"# text = {sent_text}"])
            )
        offset += len(text) + 2
    return Treebank(sentences=sentences)
