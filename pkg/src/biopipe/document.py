"""Annotated-text data model shared by all processors.

Offsets are Unicode scalar indices into the document's raw text, half-open.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Word:
    """One syntactic word with its annotation fields.

    ``id`` is 1-based within the sentence; ``head`` is a word id or 0 for the
    root; unset annotation fields are None.
    """

    id: int
    text: str
    start_char: int
    end_char: int
    lemma: str | None = None
    upos: str | None = None
    xpos: str | None = None
    head: int | None = None
    deprel: str | None = None

    def __post_init__(self):
        if not (0 <= self.start_char < self.end_char):
            raise ValueError(f"bad word span [{self.start_char}, {self.end_char})")


@dataclass
class Entity:
    """A typed mention; character offsets index the document raw text."""

    text: str
    type: str
    start_char: int
    end_char: int


@dataclass
class Sentence:
    words: list[Word] = field(default_factory=list)

    @property
    def start_char(self) -> int:
        return self.words[0].start_char

    @property
    def end_char(self) -> int:
        return self.words[-1].end_char

    @property
    def tokens(self) -> list[str]:
        return [w.text for w in self.words]

    def dependencies_text(self) -> str:
        return "\n".join(
            f"{w.id}\t{w.text}\t{w.head if w.head is not None else '_'}\t{w.deprel or '_'}"
            for w in self.words
        )

    def print_dependencies(self) -> None:
        print(self.dependencies_text())


@dataclass
class Document:
    text: str
    sentences: list[Sentence] = field(default_factory=list)
    entities: list[Entity] = field(default_factory=list)

    @property
    def num_tokens(self) -> int:
        return sum(len(s.words) for s in self.sentences)

    def token_spans(self) -> list[tuple[int, int]]:
        return [(w.start_char, w.end_char) for s in self.sentences for w in s.words]

    def sentence_spans(self) -> list[tuple[int, int]]:
        return [(s.start_char, s.end_char) for s in self.sentences if s.words]
