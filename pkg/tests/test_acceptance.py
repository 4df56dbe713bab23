"""End-to-end acceptance gate: ten checks, one PASS/FAIL line each.

The checks pit the exact decoders against brute-force enumeration, the
analytic gradients against central finite differences, run full trainings
on the bundled toy corpora, and pin the scoring fixtures, serialization
round trips and the benchmark harness. The checklist is printed in the
pytest terminal summary.

Expensive trained artifacts (the toy-domain stacks, the character LMs) are
built once and shared across checks through memoized module helpers so the
whole gate stays well inside its time budgets.
"""

from __future__ import annotations

import functools
import time
from pathlib import Path

import numpy as np

from biopipe import autodiff as ad
from biopipe.charlm import CharLmConfig, Direction, filter_corpus, train_charlm
from biopipe.conllu import (
    combine_treebanks,
    read_conllu,
    treebank_to_document,
    write_conllu,
)
from biopipe.corpus import (
    build_silver_treebank,
    default_tokenization_hook,
    read_ner_corpus,
    read_notes,
    stratified_split,
)
from biopipe.crf import CrfParams, crf_log_partition, crf_viterbi
from biopipe.depparser import ParserConfig, train_parser
from biopipe.document import Document, Entity, Sentence, Word
from biopipe.lemmatizer import Lemmatizer, LemmatizerConfig, train_lemmatizer
from biopipe.mst import is_arborescence, mst_decode, tree_total
from biopipe.ner import (
    MODE_CHAR_BILSTM,
    MODE_CHARLM,
    NerConfig,
    TaggedSpan,
    decode_bioes,
    encode_bioes,
    recognize,
    train_ner,
)
from biopipe.package import load_package, save_package
from biopipe.pipeline import Pipeline, annotate, annotate_treebank
from biopipe.scorer import benchmark, benchmark_report, entity_f1, evaluate_documents
from biopipe.segmenter import SegmenterConfig, train_segmenter
from biopipe.tagger import TaggerConfig, tag_sentence, train_tagger

from conftest import record_acceptance
from gradient_cases import ALL_CASES
from helpers import brute_force_crf, brute_force_mst, finite_difference_check

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "data"

# Same recipe as the bundled toy packages; known to converge on these corpora.
SEED = 42
LR = 0.008

ENTITY_TYPES = ("problem", "test", "treatment")


def check(num: int, name: str, ok: bool, detail: str) -> None:
    line = f"[{num:>2}] {name:<44} {'PASS' if ok else 'FAIL'}  {detail}"
    record_acceptance(line)
    print(line)
    assert ok, line


def _load_treebank(name: str):
    return read_conllu((DATA / "treebanks" / name).read_bytes())


@functools.lru_cache(maxsize=None)
def _pipeline_for(*treebanks: str) -> Pipeline:
    """Train a full syntactic stack on the named training treebanks."""
    banks = [_load_treebank(f"{n}-train.conllu") for n in treebanks]
    tb = banks[0]
    for other in banks[1:]:
        tb = combine_treebanks(tb, other)
    seg = train_segmenter(tb, SegmenterConfig(lr=LR), seed=SEED)
    pos = train_tagger(tb, TaggerConfig(lr=LR), seed=SEED)
    _, seq2seq = train_lemmatizer(tb, LemmatizerConfig(lr=LR), seed=SEED)
    par = train_parser(tb, ParserConfig(lr=LR), seed=SEED)
    return Pipeline(
        {"tokenize": seg, "pos": pos, "lemma": Lemmatizer(seq2seq), "depparse": par}
    )


@functools.lru_cache(maxsize=None)
def _charlms():
    lines = filter_corpus(
        (DATA / "charlm" / "clinical_raw.txt").read_text(encoding="utf-8").splitlines()
    )
    corpus = "\n".join(lines)
    cfg = CharLmConfig(epochs=10, lr=LR)
    fwd = train_charlm(corpus, Direction.FORWARD, cfg, seed=SEED)
    bwd = train_charlm(corpus, Direction.BACKWARD, cfg, seed=SEED)
    return fwd, bwd


@functools.lru_cache(maxsize=None)
def _mimic_pipeline() -> Pipeline:
    return Pipeline(load_package(DATA / "registry" / "toy-mimic"))


def _ner_rows(split: str):
    return read_ner_corpus((DATA / "ner" / f"toy_i2b2-{split}.tsv").read_bytes())


def _ner_f1(model, rows) -> float:
    system = [{s.key() for s in recognize(model, tokens)} for tokens, _ in rows]
    gold = [{s.key() for s in decode_bioes(tags)} for _, tags in rows]
    return entity_f1(system, gold).f1


def test_01_crf_decoding_matches_enumeration():
    rng = np.random.default_rng(101)
    t0 = time.perf_counter()
    mismatches = 0
    worst_z = 0.0
    for _ in range(200):
        length = int(rng.integers(1, 7))
        k = int(rng.integers(2, 5))
        p = CrfParams(rng, k)
        p.transitions.data[:] = rng.normal(size=(k, k))
        p.start.data[:] = rng.normal(size=k)
        p.stop.data[:] = rng.normal(size=k)
        em = rng.normal(size=(length, k))
        ref_z, ref_path, ref_score = brute_force_crf(
            em, p.transitions.data, p.start.data, p.stop.data
        )
        path, score = crf_viterbi(em, p)
        if path != ref_path or abs(score - ref_score) > 1e-8:
            mismatches += 1
        log_z = crf_log_partition(ad.constant(em), p).item()
        worst_z = max(worst_z, abs(log_z - ref_z))
    elapsed = time.perf_counter() - t0
    ok = mismatches == 0 and worst_z < 1e-6 and elapsed < 10.0
    check(
        1,
        "viterbi + log-partition vs enumeration",
        ok,
        f"200 cases, worst |dlogZ| {worst_z:.1e}, {elapsed:.1f}s",
    )


def test_02_tree_decoding_matches_enumeration():
    rng = np.random.default_rng(202)
    t0 = time.perf_counter()
    bad = 0
    worst = 0.0
    for _ in range(200):
        n = int(rng.integers(1, 6))
        vals = rng.normal(size=(n + 1, n + 1))
        scores = vals.copy()
        scores[:, 0] = -np.inf
        scores[np.arange(n + 1), np.arange(n + 1)] = -np.inf
        heads = mst_decode(scores)
        _, ref_total = brute_force_mst(np.where(np.isneginf(scores), -1e18, vals))
        gap = abs(tree_total(scores, heads) - ref_total)
        worst = max(worst, gap)
        if not is_arborescence(heads) or gap > 1e-9:
            bad += 1
    elapsed = time.perf_counter() - t0
    ok = bad == 0 and elapsed < 30.0
    check(
        2,
        "maximum arborescence vs enumeration",
        ok,
        f"200 cases, worst score gap {worst:.1e}, {elapsed:.1f}s",
    )


def test_03_model_gradients_match_finite_differences():
    t0 = time.perf_counter()
    worst = 0.0
    worst_name = ""
    for name in sorted(ALL_CASES):
        loss_fn, params = ALL_CASES[name](seed=0)
        err = finite_difference_check(loss_fn, params, tol=float("inf"))
        if err > worst:
            worst, worst_name = err, name
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-4 and elapsed < 300.0
    check(
        3,
        "every loss gradient vs finite differences",
        ok,
        f"{len(ALL_CASES)} losses, worst rel err {worst:.1e} ({worst_name}), {elapsed:.0f}s",
    )


def test_04_training_overfits_the_toy_corpora():
    t0 = time.perf_counter()
    pipe = _pipeline_for("toy_bio")
    tb = _load_treebank("toy_bio-train.conllu")
    report = evaluate_documents(
        annotate_treebank(pipe, tb, mode="end2end"), treebank_to_document(tb)
    )
    tok = report.scores["Tokens"].f1
    upos = report.scores["UPOS"].f1
    lem = report.scores["Lemmas"].f1
    uas = report.scores["UAS"].f1

    fwd, bwd = _charlms()
    rows = _ner_rows("train")
    ner = train_ner(
        rows, fwd, bwd, NerConfig(lr=LR, epochs=60, word_dropout=0.0), seed=SEED
    )
    nf1 = _ner_f1(ner, rows)
    elapsed = time.perf_counter() - t0
    ok = (
        tok >= 99.0
        and upos >= 99.0
        and lem >= 99.0
        and uas >= 95.0
        and nf1 >= 95.0
        and elapsed < 900.0
    )
    check(
        4,
        "trained models overfit the toy corpora",
        ok,
        f"tok {tok:.1f} upos {upos:.1f} lemma {lem:.1f} uas {uas:.1f} "
        f"ner {nf1:.1f}, {elapsed:.0f}s",
    )


def _plain_doc(text: str, spans, heads=None) -> Document:
    words = []
    for i, (s, e) in enumerate(spans):
        head = heads[i] if heads else (0 if i == 0 else 1)
        words.append(
            Word(
                id=i + 1,
                text=text[s:e],
                start_char=s,
                end_char=e,
                lemma=text[s:e].lower(),
                upos="NOUN",
                xpos="NN",
                head=head,
                deprel="root" if head == 0 else "dep",
            )
        )
    return Document(text=text, sentences=[Sentence(words=words)])


def test_05_scoring_reproduces_worked_fixtures():
    results = []

    # One gold token split in two by the system: P 3/5, R 3/4.
    text = "We saw cats today"
    gold = _plain_doc(text, [(0, 2), (3, 6), (7, 11), (12, 17)])
    split = _plain_doc(text, [(0, 2), (3, 6), (7, 11), (12, 14), (14, 17)])
    f1 = evaluate_documents(split, gold).scores["Tokens"].f1
    results.append(("split token F1", f"{f1:.2f}", "66.67"))

    # Hyphenated compound glued on one side, split on the other: nothing aligns.
    comp = "up-regulation"
    glued = _plain_doc(comp, [(0, 13)])
    parts = _plain_doc(comp, [(0, 2), (2, 3), (3, 13)])
    f1 = evaluate_documents(parts, glued).scores["Tokens"].f1
    results.append(("disjoint tokenization F1", f"{f1:.2f}", "0.00"))

    # Four aligned words, one wrong head.
    spans = [(0, 2), (3, 6), (7, 11), (12, 17)]
    gold = _plain_doc(text, spans, heads=[2, 0, 2, 2])
    system = _plain_doc(text, spans, heads=[2, 0, 2, 3])
    uas = evaluate_documents(system, gold).scores["UAS"].f1
    results.append(("one wrong head UAS", f"{uas:.2f}", "75.00"))

    # Two gold entities; the system finds one plus a spurious one.
    ents = entity_f1(
        [{(0, 2, "problem"), (4, 6, "problem")}],
        [{(0, 2, "problem"), (8, 9, "test")}],
    )
    results.append(("half-right entities F1", f"{ents.f1:.2f}", "50.00"))

    # A document scored against itself is perfect across the board.
    same = evaluate_documents(gold, gold)
    for metric in ("Tokens", "UPOS", "Lemmas", "UAS", "LAS"):
        results.append((f"self {metric}", f"{same.scores[metric].f1:.2f}", "100.00"))

    bad = [f"{label}: {got} != {want}" for label, got, want in results if got != want]
    ok = not bad
    check(
        5,
        "scoring reproduces the worked fixtures",
        ok,
        "; ".join(bad) if bad else "66.67 / 0.00 / 75.00 / 50.00 / 100.00",
    )


def test_06_charlm_pretraining_lifts_dev_f1():
    t0 = time.perf_counter()
    fwd, bwd = _charlms()
    train_rows = _ner_rows("train")
    dev_rows = _ner_rows("dev")
    cfg = NerConfig(lr=LR, epochs=60, word_dropout=0.35)
    with_lm = train_ner(train_rows, fwd, bwd, cfg, seed=SEED, mode=MODE_CHARLM)
    baseline = train_ner(train_rows, config=cfg, seed=SEED, mode=MODE_CHAR_BILSTM)
    f_with = _ner_f1(with_lm, dev_rows)
    f_without = _ner_f1(baseline, dev_rows)
    elapsed = time.perf_counter() - t0
    ok = f_with >= f_without
    check(
        6,
        "pretrained charlm lifts NER dev F1",
        ok,
        f"with {f_with:.2f} vs baseline {f_without:.2f} (seed {SEED}), {elapsed:.0f}s",
    )


def test_07_combined_training_carries_across_domains():
    t0 = time.perf_counter()
    ewt = _pipeline_for("toy_ewt")
    bio = _pipeline_for("toy_bio")
    both = _pipeline_for("toy_ewt", "toy_bio")

    def measure(pipe: Pipeline, dev_name: str):
        dev = _load_treebank(dev_name)
        rep = evaluate_documents(
            annotate_treebank(pipe, dev, mode="end2end"), treebank_to_document(dev)
        )
        return rep.scores["Tokens"].f1, rep.scores["LAS"].f1

    ewt_on_bio, _ = measure(ewt, "toy_bio-dev.conllu")
    bio_on_ewt, _ = measure(bio, "toy_ewt-dev.conllu")
    _, ewt_las = measure(ewt, "toy_ewt-dev.conllu")
    _, bio_las = measure(bio, "toy_bio-dev.conllu")
    both_tok_bio, both_las_bio = measure(both, "toy_bio-dev.conllu")
    both_tok_ewt, both_las_ewt = measure(both, "toy_ewt-dev.conllu")
    elapsed = time.perf_counter() - t0

    ok = (
        both_tok_bio >= ewt_on_bio + 5.0
        and both_tok_ewt >= bio_on_ewt + 5.0
        and both_las_ewt >= ewt_las - 3.0
        and both_las_bio >= bio_las - 3.0
    )
    check(
        7,
        "combined model covers both domains",
        ok,
        f"ood tok +{both_tok_bio - ewt_on_bio:.1f}/+{both_tok_ewt - bio_on_ewt:.1f}, "
        f"in-domain LAS drop {ewt_las - both_las_ewt:.1f}/{bio_las - both_las_bio:.1f}, "
        f"{elapsed:.0f}s",
    )


def test_08_silver_treebank_is_valid_and_trainable():
    notes = read_notes(DATA / "notes")
    train_notes, dev_notes, test_notes = stratified_split(notes, (6, 1, 1), seed=0)
    sizes = (len(train_notes), len(dev_notes), len(test_notes))

    pipe = _mimic_pipeline()
    silver = build_silver_treebank(train_notes, default_tokenization_hook, pipe)
    data = write_conllu(silver)
    deterministic = (
        write_conllu(build_silver_treebank(train_notes, default_tokenization_hook, pipe))
        == data
    )
    parsed = read_conllu(data)
    valid = write_conllu(parsed) == data and all(
        is_arborescence([w.head for w in s.words]) for s in parsed.sentences
    )

    tagger = train_tagger(silver, TaggerConfig(epochs=3, lr=LR), seed=0)
    upos, xpos = tag_sentence(tagger, ["Patient", "denies", "pain", "."])
    trainable = len(upos) == len(xpos) == 4 and all(upos) and all(xpos)

    ok = sizes == (6, 1, 1) and deterministic and valid and trainable
    check(
        8,
        "silver treebank: split, build, retrain",
        ok,
        f"split {sizes[0]}/{sizes[1]}/{sizes[2]}, {len(parsed.sentences)} sentences, "
        f"deterministic={deterministic}, trainable={trainable}",
    )


def _doc_state(doc: Document):
    return (
        doc.text,
        [
            [
                (w.id, w.text, w.start_char, w.end_char, w.lemma, w.upos, w.xpos, w.head, w.deprel)
                for w in s.words
            ]
            for s in doc.sentences
        ],
        [(e.text, e.type, e.start_char, e.end_char) for e in doc.entities],
    )


def test_09_round_trips(tmp_path):
    files = sorted((DATA / "treebanks").glob("*.conllu"))
    conllu_ok = all(
        write_conllu(read_conllu(f.read_bytes())) == f.read_bytes() for f in files
    )

    pipe = _mimic_pipeline()
    note = (DATA / "notes" / "note01.txt").read_text(encoding="utf-8")
    before = annotate(pipe, note)
    save_package(pipe.models, tmp_path / "copy1", "copy")
    reloaded = Pipeline(load_package(tmp_path / "copy1"))
    after = annotate(reloaded, note)
    package_ok = _doc_state(before) == _doc_state(after)

    save_package(reloaded.models, tmp_path / "copy2", "copy")
    stable = all(
        (tmp_path / "copy2" / f.name).read_bytes() == f.read_bytes()
        for f in sorted((tmp_path / "copy1").iterdir())
    )

    rng = np.random.default_rng(909)
    cases = 1200
    fuzz_bad = 0
    for _ in range(cases):
        length = int(rng.integers(1, 13))
        spans = []
        pos = 0
        while pos < length:
            if rng.random() < 0.45:
                width = int(rng.integers(1, min(3, length - pos) + 1))
                kind = ENTITY_TYPES[int(rng.integers(0, len(ENTITY_TYPES)))]
                spans.append(TaggedSpan(pos, pos + width, kind))
                pos += width + int(rng.integers(0, 3))
            else:
                pos += 1
        decoded = decode_bioes(encode_bioes(spans, length))
        if [s.key() for s in decoded] != [s.key() for s in spans]:
            fuzz_bad += 1

    ok = conllu_ok and package_ok and stable and fuzz_bad == 0
    check(
        9,
        "round trips: conllu, package, BIOES",
        ok,
        f"{len(files)} treebanks byte-stable, annotations identical after reload, "
        f"{cases} BIOES fuzz cases, {fuzz_bad} bad",
    )


def test_10_benchmark_self_ratio_is_stable():
    pipe = _mimic_pipeline()
    raw = _load_treebank("toy_clinical-train.conllu").raw_text()
    corpus = raw + " " + raw

    def run(text: str) -> Document:
        return annotate(pipe, text)

    # The first couple of calls run measurably slower (allocator and cache
    # warm-up), so they stay outside the timed runs.
    run(corpus)
    run(corpus)
    first = benchmark(run, corpus, name="pipeline", repetitions=6)
    second = benchmark(run, corpus, name="pipeline-rerun", repetitions=6)
    ratio = second.mean_time / first.mean_time
    report = benchmark_report([first, second], baseline="pipeline")
    ok = abs(ratio - 1.0) <= 0.05 and "1.00x" in report
    check(
        10,
        "benchmark self-ratio within 1.00 +/- 0.05",
        ok,
        f"ratio {ratio:.3f}, {first.tokens_per_second:.0f} tokens/s",
    )
