"""Alignment-based end-to-end scoring and the speed benchmark harness.

System and gold tokens are matched by exact character spans over the same
raw text; each aligned pair then contributes to UPOS/XPOS/Lemmas/UAS/LAS
counts. MLAS and BLEX are restricted to content relations. All scores use a
0-100 scale with two decimals. One deliberate deviation from the official
shared-task MLAS: morphological features are not compared, because this
pipeline does not predict FEATS; every report header says so.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .document import Document
from .errors import ContractError, DataError

CONTENT_DEPRELS = {
    "nsubj", "obj", "iobj", "csubj", "ccomp", "xcomp", "obl", "vocative",
    "expl", "dislocated", "advcl", "advmod", "discourse", "nmod", "appos",
    "nummod", "acl", "amod", "conj", "fixed", "flat", "compound", "list",
    "parataxis", "orphan", "goeswith", "reparandum", "root", "dep",
}

METRIC_ORDER = (
    "Tokens",
    "Sentences",
    "UPOS",
    "XPOS",
    "Lemmas",
    "UAS",
    "LAS",
    "MLAS",
    "BLEX",
)

REPORT_NOTE = "MLAS here ignores morphological features (FEATS is not predicted)."


@dataclass
class Score:
    correct: int = 0
    system_total: int = 0
    gold_total: int = 0

    @property
    def precision(self) -> float:
        if self.system_total == 0 and self.gold_total == 0:
            return 100.0
        if self.system_total == 0:
            return 0.0
        return 100.0 * self.correct / self.system_total

    @property
    def recall(self) -> float:
        if self.system_total == 0 and self.gold_total == 0:
            return 100.0
        if self.gold_total == 0:
            return 0.0
        return 100.0 * self.correct / self.gold_total

    @property
    def f1(self) -> float:
        p = self.precision
        r = self.recall
        if p + r == 0.0:
            return 0.0
        return 2 * p * r / (p + r)


@dataclass
class MetricReport:
    scores: dict[str, Score] = field(default_factory=dict)
    entity: Score | None = None
    warnings: list[str] = field(default_factory=list)

    def table(self) -> str:
        lines = [f"# {REPORT_NOTE}"]
        lines.extend(f"# warning: {w}" for w in self.warnings)
        lines.append(f"{'Metric':<10} {'P':>7} {'R':>7} {'F1':>7}")
        for name in METRIC_ORDER:
            if name in self.scores:
                s = self.scores[name]
                lines.append(
                    f"{name:<10} {s.precision:>7.2f} {s.recall:>7.2f} {s.f1:>7.2f}"
                )
        if self.entity is not None:
            s = self.entity
            lines.append(
                f"{'Entities':<10} {s.precision:>7.2f} {s.recall:>7.2f} {s.f1:>7.2f}"
            )
        return "\n".join(lines)

    def machine_lines(self) -> str:
        pairs = []
        for name in METRIC_ORDER:
            if name in self.scores:
                pairs.append(f"{name.lower()}_f1={self.scores[name].f1:.2f}")
        if self.entity is not None:
            pairs.append(f"entities_f1={self.entity.f1:.2f}")
        return "\n".join(pairs)


def _token_index(doc: Document):
    """span -> (sentence index, word index); spans are unique within a doc."""
    out = {}
    for si, sent in enumerate(doc.sentences):
        for wi, w in enumerate(sent.words):
            out[(w.start_char, w.end_char)] = (si, wi)
    return out


def align_tokens(system: Document, gold: Document) -> list[tuple]:
    """Pairs of (system word, gold word) whose character spans match exactly."""
    if system.text != gold.text:
        raise ContractError("system and gold documents cover different raw text")
    gold_index = _token_index(gold)
    pairs = []
    for sent in system.sentences:
        for w in sent.words:
            hit = gold_index.get((w.start_char, w.end_char))
            if hit is not None:
                g = gold.sentences[hit[0]].words[hit[1]]
                pairs.append((w, g))
    return pairs


def _aligned_span_set(pairs):
    return {(s.start_char, s.end_char) for s, _ in pairs}


def score_parse(system: Document, gold: Document, pairs) -> MetricReport:
    """Token/sentence F1 plus attribute and attachment scores over aligned pairs."""
    report = MetricReport()
    n_sys = system.num_tokens
    n_gold = gold.num_tokens
    report.scores["Tokens"] = Score(len(pairs), n_sys, n_gold)

    sys_sents = set(system.sentence_spans())
    gold_sents = set(gold.sentence_spans())
    report.scores["Sentences"] = Score(
        len(sys_sents & gold_sents), len(sys_sents), len(gold_sents)
    )

    aligned = _aligned_span_set(pairs)
    sys_lookup = {(w.start_char, w.end_char): si for si, sent in enumerate(system.sentences) for w in sent.words}
    gold_lookup = {(w.start_char, w.end_char): si for si, sent in enumerate(gold.sentences) for w in sent.words}

    def head_span(doc: Document, si: int, word):
        if not word.head:
            return None  # root
        head_word = doc.sentences[si].words[word.head - 1]
        return (head_word.start_char, head_word.end_char)

    counts = {k: 0 for k in ("UPOS", "XPOS", "Lemmas", "UAS", "LAS", "MLAS", "BLEX")}
    sys_content = gold_content = 0
    for s, g in pairs:
        if s.upos == g.upos:
            counts["UPOS"] += 1
        if s.xpos == g.xpos:
            counts["XPOS"] += 1
        if s.lemma == g.lemma:
            counts["Lemmas"] += 1
        s_head = head_span(system, sys_lookup[(s.start_char, s.end_char)], s)
        g_head = head_span(gold, gold_lookup[(g.start_char, g.end_char)], g)
        head_ok = (s_head is None and g_head is None) or (
            s_head is not None and s_head == g_head and s_head in aligned
        )
        if head_ok:
            counts["UAS"] += 1
            if s.deprel == g.deprel:
                counts["LAS"] += 1
                if _content(g.deprel) and _content(s.deprel):
                    if s.upos == g.upos:
                        counts["MLAS"] += 1
                    if s.lemma == g.lemma:
                        counts["BLEX"] += 1

    for sent in system.sentences:
        sys_content += sum(_content(w.deprel) for w in sent.words)
    for sent in gold.sentences:
        gold_content += sum(_content(w.deprel) for w in sent.words)

    for name in ("UPOS", "XPOS", "Lemmas", "UAS", "LAS"):
        report.scores[name] = Score(counts[name], n_sys, n_gold)
    if sys_content == 0 and gold_content == 0:
        report.warnings.append("no content words on either side; MLAS/BLEX vacuously 100")
    report.scores["MLAS"] = Score(counts["MLAS"], sys_content, gold_content)
    report.scores["BLEX"] = Score(counts["BLEX"], sys_content, gold_content)
    return report


def _content(deprel) -> bool:
    if deprel is None:
        return False
    return deprel.split(":")[0] in CONTENT_DEPRELS


def score_mlas_blex(system: Document, gold: Document, pairs) -> tuple[float, float]:
    report = score_parse(system, gold, pairs)
    return report.scores["MLAS"].f1, report.scores["BLEX"].f1


def entity_f1(system_spans, gold_spans) -> Score:
    """Micro P/R/F1 over exact (start, end, type) matches.

    Both arguments are per-sentence (or per-document) collections of span
    keys; corpus totals are pooled before computing the ratios.
    """
    score = Score()
    for sys_set, gold_set in zip(system_spans, gold_spans):
        s = set(sys_set)
        g = set(gold_set)
        score.correct += len(s & g)
        score.system_total += len(s)
        score.gold_total += len(g)
    return score


def evaluate_documents(system: Document, gold: Document) -> MetricReport:
    """Full report for one document pair, entities included."""
    pairs = align_tokens(system, gold)
    report = score_parse(system, gold, pairs)
    sys_ents = [{(e.start_char, e.end_char, e.type) for e in system.entities}]
    gold_ents = [{(e.start_char, e.end_char, e.type) for e in gold.entities}]
    if sys_ents[0] or gold_ents[0]:
        report.entity = entity_f1(sys_ents, gold_ents)
    return report


@dataclass
class BenchmarkRun:
    name: str
    tokens: int
    times: list[float]

    @property
    def mean_time(self) -> float:
        return sum(self.times) / len(self.times)

    @property
    def tokens_per_second(self) -> float:
        return self.tokens / self.mean_time if self.mean_time > 0 else float("inf")


def benchmark(annotate_fn, corpus_text: str, name: str = "pipeline", repetitions: int = 3) -> BenchmarkRun:
    """Wall-clock annotation speed averaged over sequential repetitions."""
    if not corpus_text:
        raise DataError("benchmark corpus is empty")
    times = []
    tokens = 0
    for _ in range(repetitions):
        t0 = time.perf_counter()
        doc = annotate_fn(corpus_text)
        times.append(time.perf_counter() - t0)
        tokens = doc.num_tokens
    return BenchmarkRun(name=name, tokens=tokens, times=times)


def benchmark_report(runs: list[BenchmarkRun], baseline: str | None = None) -> str:
    """Relative-runtime table; the baseline row defines ratio 1.00."""
    base = runs[0] if baseline is None else next(r for r in runs if r.name == baseline)
    lines = [
        f"{'System':<16} {'Tokens/s':>10} {'Runtime':>9}",
    ]
    for r in runs:
        ratio = r.mean_time / base.mean_time
        lines.append(f"{r.name:<16} {r.tokens_per_second:>10.1f} {ratio:>8.2f}x")
    lines.append(f"# runs per system: {len(runs[0].times)}; baseline: {base.name}")
    for r in runs:
        reps = " ".join(f"{t:.4f}s" for t in r.times)
        lines.append(f"# {r.name}: {reps}")
    return "\n".join(lines)
