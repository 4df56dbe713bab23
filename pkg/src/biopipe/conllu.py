"""CoNLL-U reading and writing with byte-exact round trips.

Each word row keeps all ten columns verbatim, so columns this package does
not interpret (FEATS, DEPS, most of MISC) survive a read/write cycle
unchanged. Character offsets ride in MISC as ``start_char=``/``end_char=``
pairs and index the document-wide raw text.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field, replace

from .document import Document, Sentence, Word
from .errors import DataError

NUM_COLS = 10
_SPAN_RE = re.compile(r"(?:^|\|)start_char=(\d+)\|end_char=(\d+)(?:\||$)")


class Role(enum.Enum):
    TRAIN = "train"
    DEV = "dev"
    TEST = "test"


@dataclass
class ConlluWord:
    """One 10-column record; unread columns are carried as-is."""

    id: int
    form: str
    lemma: str
    upos: str
    xpos: str
    feats: str
    head: int
    deprel: str
    deps: str
    misc: str

    @property
    def span(self):
        """(start_char, end_char) parsed from MISC, or None."""
        m = _SPAN_RE.search(self.misc)
        if m is None:
            return None
        return int(m.group(1)), int(m.group(2))

    def to_line(self):
        return "\t".join(
            (
                str(self.id),
                self.form,
                self.lemma,
                self.upos,
                self.xpos,
                self.feats,
                str(self.head),
                self.deprel,
                self.deps,
                self.misc,
            )
        )


@dataclass
class ConlluSentence:
    words: list[ConlluWord]
    comments: list[str] = field(default_factory=list)

    def forms(self):
        return [w.form for w in self.words]

    def spans(self):
        out = []
        for w in self.words:
            s = w.span
            if s is None:
                return None
            out.append(s)
        return out


@dataclass
class Treebank:
    sentences: list[ConlluSentence]
    role: Role = Role.TRAIN

    def __len__(self):
        return len(self.sentences)

    @property
    def has_spans(self):
        return all(s.spans() is not None for s in self.sentences)

    def raw_text(self):
        """Rebuild the source string from forms and offsets.

        Characters not covered by any token default to a single space, which
        is exact for the whitespace-separated corpora this package bundles.
        """
        if not self.has_spans:
            raise DataError("treebank carries no character offsets")
        end = 0
        for sent in self.sentences:
            for w in sent.words:
                end = max(end, w.span[1])
        chars = [" "] * end
        for sent in self.sentences:
            for w in sent.words:
                start, stop = w.span
                if stop - start != len(w.form):
                    raise DataError(
                        f"span [{start}, {stop}) does not fit form {w.form!r}"
                    )
                chars[start:stop] = list(w.form)
        return "".join(chars)


def read_conllu(data: bytes) -> Treebank:
    """Parse CoNLL-U bytes; malformed records raise DataError with the line."""
    text = data.decode("utf-8")
    sentences = []
    comments: list[str] = []
    words: list[ConlluWord] = []

    def flush(lineno):
        if not words:
            if comments:
                raise DataError(f"comments without words near line {lineno}")
            return
        n = len(words)
        for w in words:
            if not 0 <= w.head <= n:
                raise DataError(
                    f"head {w.head} out of range 0..{n} near line {lineno}"
                )
        sentences.append(ConlluSentence(words=list(words), comments=list(comments)))
        comments.clear()
        words.clear()

    for lineno, line in enumerate(text.split("\n"), start=1):
        if line == "":
            flush(lineno)
            continue
        if line.startswith("#"):
            comments.append(line)
            continue
        cols = line.split("\t")
        if len(cols) != NUM_COLS:
            raise DataError(f"line {lineno}: expected 10 columns, got {len(cols)}")
        if "-" in cols[0] or "." in cols[0]:
            raise DataError(f"line {lineno}: multiword/empty node ids unsupported")
        try:
            wid = int(cols[0])
            head = int(cols[6])
        except ValueError as exc:
            raise DataError(f"line {lineno}: non-integer id or head") from exc
        if wid != len(words) + 1:
            raise DataError(f"line {lineno}: word id {wid} not contiguous")
        words.append(
            ConlluWord(
                id=wid,
                form=cols[1],
                lemma=cols[2],
                upos=cols[3],
                xpos=cols[4],
                feats=cols[5],
                head=head,
                deprel=cols[7],
                deps=cols[8],
                misc=cols[9],
            )
        )
    flush(len(text.split("\n")))
    return Treebank(sentences=sentences)


def write_conllu(treebank: Treebank) -> bytes:
    lines = []
    for sent in treebank.sentences:
        lines.extend(sent.comments)
        lines.extend(w.to_line() for w in sent.words)
        lines.append("")
    return ("\n".join(lines) + "\n").encode("utf-8") if lines else b""


def combine_treebanks(a: Treebank, b: Treebank) -> Treebank:
    """Concatenate sentences, a's first. Roles must agree.

    When both sides carry character offsets, b's are shifted past the end of
    a's text (plus a one-space gap) so the combined treebank still describes
    one consistent coordinate space.
    """
    if a.role != b.role:
        raise DataError(f"role mismatch: {a.role.value} vs {b.role.value}")
    b_sentences = list(b.sentences)
    if a.sentences and a.has_spans and b.has_spans:
        delta = max(w.span[1] for s in a.sentences for w in s.words) + 1
        b_sentences = [_shift_sentence(s, delta) for s in b_sentences]
    return Treebank(sentences=list(a.sentences) + b_sentences, role=a.role)


def _shift_sentence(sent: ConlluSentence, delta: int) -> ConlluSentence:
    def shift(m: re.Match) -> str:
        # The span pattern swallows its separators; keep them.
        head = "|" if m.group(0).startswith("|") else ""
        tail = "|" if m.group(0).endswith("|") else ""
        lo, hi = int(m.group(1)) + delta, int(m.group(2)) + delta
        return f"{head}start_char={lo}|end_char={hi}{tail}"

    words = [replace(w, misc=_SPAN_RE.sub(shift, w.misc)) for w in sent.words]
    return ConlluSentence(words=words, comments=list(sent.comments))


def treebank_to_document(treebank: Treebank) -> Document:
    """View a span-carrying treebank as an annotated Document."""
    text = treebank.raw_text()
    sentences = []
    for sent in treebank.sentences:
        words = []
        for w in sent.words:
            start, stop = w.span
            words.append(
                Word(
                    id=w.id,
                    text=w.form,
                    start_char=start,
                    end_char=stop,
                    lemma=None if w.lemma == "_" else w.lemma,
                    upos=None if w.upos == "_" else w.upos,
                    xpos=None if w.xpos == "_" else w.xpos,
                    head=w.head,
                    deprel=None if w.deprel == "_" else w.deprel,
                )
            )
        sentences.append(Sentence(words=words))
    return Document(text=text, sentences=sentences)


def document_to_treebank(doc: Document) -> Treebank:
    """Render pipeline output as CoNLL-U rows with offsets in MISC."""
    sentences = []
    for sent in doc.sentences:
        stext = doc.text[sent.start_char : sent.end_char].replace("\n", " ")
        words = []
        for w in sent.words:
            words.append(
                ConlluWord(
                    id=w.id,
                    form=w.text,
                    lemma=w.lemma if w.lemma is not None else "_",
                    upos=w.upos if w.upos is not None else "_",
                    xpos=w.xpos if w.xpos is not None else "_",
                    feats="_",
                    head=w.head if w.head is not None else 0,
                    deprel=w.deprel if w.deprel is not None else "_",
                    deps="_",
                    misc=f"start_char={w.start_char}|end_char={w.end_char}",
                )
            )
        sentences.append(
            ConlluSentence(words=words, comments=[f"# text = {stext}"])
        )
    return Treebank(sentences=sentences)


def with_role(treebank: Treebank, role: Role) -> Treebank:
    return replace(treebank, role=role)
