"""Command-line interface: train, annotate, evaluate, benchmark, build-silver.

Exit codes: 0 success, 1 usage or configuration error, 2 data error
(malformed input files, corrupt packages, bad note collections).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .charlm import CharLmConfig, Direction, filter_corpus, train_charlm
from .conllu import (
    document_to_treebank,
    read_conllu,
    treebank_to_document,
    write_conllu,
)
from .corpus import (
    build_silver_treebank,
    default_tokenization_hook,
    read_ner_corpus,
    read_notes,
    stratified_split,
)
from .depparser import ParserConfig, train_parser
from .errors import ConfigError, DataError, InputError, PackageError
from .lemmatizer import Lemmatizer, LemmatizerConfig, train_lemmatizer
from .ner import MODE_CHAR_BILSTM, MODE_CHARLM, NerConfig, train_ner
from .package import (
    add_to_package,
    load_package,
    registry_root,
    resolve_package,
)
from .pipeline import (
    Pipeline,
    PipelineConfig,
    annotate,
    annotate_pretokenized,
    annotate_treebank,
    build_pipeline,
)
from .scorer import benchmark, benchmark_report, evaluate_documents
from .segmenter import SegmenterConfig, train_segmenter
from .tagger import TaggerConfig, train_tagger

PROCESSORS = ("tokenize", "pos", "lemma", "depparse", "ner", "charlm")


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage problems; the contract wants 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _build_parser() -> _Parser:
    parser = _Parser(prog="biopipe", description="Biomedical/clinical NLP pipelines.")
    sub = parser.add_subparsers(dest="command", required=True)

    t = sub.add_parser("train", parents=[], help="train one processor into a package")
    t.add_argument("processor", choices=PROCESSORS)
    t.add_argument("--treebank", help="CoNLL-U training file (syntactic processors)")
    t.add_argument("--corpus", help="token<TAB>tag NER corpus")
    t.add_argument("--raw-corpus", help="plain-text corpus for charlm pretraining")
    t.add_argument("--direction", choices=["forward", "backward"], default="forward")
    t.add_argument("--charlm", help="package directory holding charlm_fwd/charlm_bwd (ner)")
    t.add_argument("--baseline", action="store_true", help="ner ablation: random char BiLSTM instead of charlm")
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--epochs", type=int, default=None)
    t.add_argument("--out", required=True, help="package directory to create or extend")
    t.add_argument("--package-name", default=None)

    a = sub.add_parser("annotate", help="annotate text with a packaged pipeline")
    a.add_argument("--package", required=True)
    a.add_argument("--registry", default=None)
    a.add_argument("--processors", default="", help="overrides, e.g. ner=toy-i2b2")
    a.add_argument("--pretokenized", action="store_true")
    a.add_argument("--input", default="-", help="input file, - for stdin")
    a.add_argument("--output", default="-", help="output file, - for stdout")
    a.add_argument("--format", choices=["conllu", "entities"], default="conllu")

    e = sub.add_parser("evaluate", help="score system output against gold CoNLL-U")
    e.add_argument("--system", help="system CoNLL-U file (skip to run a package)")
    e.add_argument("--gold", required=True)
    e.add_argument("--mode", choices=["end2end", "goldtok", "goldtag"], default="end2end")
    e.add_argument("--package", help="annotate the gold file with this package first")
    e.add_argument("--registry", default=None)
    e.add_argument("--processors", default="")

    b = sub.add_parser("benchmark", help="annotation speed, averaged over repetitions")
    b.add_argument("--package", action="append", required=True, help="repeatable; first is the baseline")
    b.add_argument("--registry", default=None)
    b.add_argument("--corpus", required=True, help="plain-text file to annotate")
    b.add_argument("--reps", type=int, default=3)

    s = sub.add_parser("build-silver", help="silver-annotate notes into treebank splits")
    s.add_argument("--notes", required=True, help="directory of note files")
    s.add_argument("--package", required=True)
    s.add_argument("--registry", default=None)
    s.add_argument("--split", default="6:1:1")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", required=True, help="directory for train/dev/test CoNLL-U")
    return parser


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _write_output(path: str, data: str) -> None:
    if path == "-":
        sys.stdout.write(data)
    else:
        Path(path).write_text(data, encoding="utf-8")


def _parse_overrides(spec: str) -> dict[str, str]:
    out = {}
    for part in spec.split(","):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise ConfigError(f"processor override {part!r} is not name=package")
        key, value = part.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def _with_epochs(config, epochs):
    if epochs is not None:
        config.epochs = epochs
    return config


def _cmd_train(args) -> int:
    name = args.package_name or Path(args.out).name

    def need(flag, value):
        if value is None:
            raise ConfigError(f"train {args.processor} requires {flag}")
        return value

    if args.processor in ("tokenize", "pos", "lemma", "depparse"):
        treebank = read_conllu(Path(need("--treebank", args.treebank)).read_bytes())
        if args.processor == "tokenize":
            model = train_segmenter(
                treebank, _with_epochs(SegmenterConfig(), args.epochs), seed=args.seed
            )
        elif args.processor == "pos":
            model = train_tagger(
                treebank, _with_epochs(TaggerConfig(), args.epochs), seed=args.seed
            )
        elif args.processor == "lemma":
            _, seq2seq = train_lemmatizer(
                treebank, _with_epochs(LemmatizerConfig(), args.epochs), seed=args.seed
            )
            model = Lemmatizer(seq2seq)
        else:
            model = train_parser(
                treebank, _with_epochs(ParserConfig(), args.epochs), seed=args.seed
            )
        add_to_package(model, args.processor, args.out, name)
    elif args.processor == "charlm":
        raw = Path(need("--raw-corpus", args.raw_corpus)).read_text(encoding="utf-8")
        kept = filter_corpus(raw.split("\n"))
        direction = Direction(args.direction)
        model = train_charlm(
            "\n".join(kept), direction, _with_epochs(CharLmConfig(), args.epochs), seed=args.seed
        )
        proc = "charlm_fwd" if direction is Direction.FORWARD else "charlm_bwd"
        add_to_package(model, proc, args.out, name)
        print(f"perplexity by epoch: {[round(p, 3) for p in model.perplexities]}")
    else:  # ner
        corpus = read_ner_corpus(Path(need("--corpus", args.corpus)).read_bytes())
        if args.baseline:
            model = train_ner(
                corpus,
                config=_with_epochs(NerConfig(), args.epochs),
                seed=args.seed,
                mode=MODE_CHAR_BILSTM,
            )
        else:
            lm_dir = need("--charlm", args.charlm)
            lms = load_package(lm_dir)
            if "charlm_fwd" not in lms or "charlm_bwd" not in lms:
                raise ConfigError(f"{lm_dir} lacks charlm_fwd/charlm_bwd processors")
            model = train_ner(
                corpus,
                charlm_fwd=lms["charlm_fwd"],
                charlm_bwd=lms["charlm_bwd"],
                config=_with_epochs(NerConfig(), args.epochs),
                seed=args.seed,
                mode=MODE_CHARLM,
            )
        add_to_package(model, "ner", args.out, name)
    print(f"wrote {args.processor} into {args.out}")
    return 0


def _load_pipeline(args) -> Pipeline:
    registry = registry_root(args.registry)
    config = PipelineConfig(
        package=args.package,
        processors=_parse_overrides(args.processors) if hasattr(args, "processors") else {},
        pretokenized=getattr(args, "pretokenized", False),
    )
    return build_pipeline(config, registry)


def _cmd_annotate(args) -> int:
    pipeline = _load_pipeline(args)
    raw = _read_input(args.input)
    if args.pretokenized:
        sentences = [line.split() for line in raw.split("\n") if line.strip()]
        doc = annotate_pretokenized(pipeline, sentences)
    else:
        doc = annotate(pipeline, raw)
    if args.format == "conllu":
        _write_output(args.output, write_conllu(document_to_treebank(doc)).decode("utf-8"))
    else:
        lines = [
            f"{e.start_char}\t{e.end_char}\t{e.type}\t{e.text}" for e in doc.entities
        ]
        _write_output(args.output, "\n".join(lines) + ("\n" if lines else ""))
    return 0


def _cmd_evaluate(args) -> int:
    gold = read_conllu(Path(args.gold).read_bytes())
    if args.system:
        system_doc = treebank_to_document(read_conllu(Path(args.system).read_bytes()))
    elif args.package:
        pipeline = _load_pipeline(args)
        system_doc = annotate_treebank(pipeline, gold, mode=args.mode)
    else:
        raise ConfigError("evaluate needs --system or --package")
    report = evaluate_documents(system_doc, treebank_to_document(gold))
    print(report.table())
    print(report.machine_lines())
    return 0


def _cmd_benchmark(args) -> int:
    registry = registry_root(args.registry)
    corpus_text = Path(args.corpus).read_text(encoding="utf-8")
    runs = []
    for pkg in args.package:
        pipeline = build_pipeline(PipelineConfig(package=pkg), registry)
        runs.append(
            benchmark(lambda text, p=pipeline: annotate(p, text), corpus_text, name=pkg, repetitions=args.reps)
        )
    print(benchmark_report(runs, baseline=args.package[0]))
    return 0


def _cmd_build_silver(args) -> int:
    try:
        ratios = tuple(int(x) for x in args.split.split(":"))
    except ValueError as exc:
        raise ConfigError(f"bad --split {args.split!r}; expected like 6:1:1") from exc
    pipeline = _load_pipeline(args)
    notes = read_notes(args.notes)
    parts = stratified_split(notes, ratios=ratios, seed=args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for split_name, collection in zip(("train", "dev", "test"), parts):
        tb = build_silver_treebank(collection, default_tokenization_hook, pipeline)
        (out / f"{split_name}.conllu").write_bytes(write_conllu(tb))
        print(f"{split_name}: {len(collection)} notes, {len(tb)} sentences")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "train":
            return _cmd_train(args)
        if args.command == "annotate":
            return _cmd_annotate(args)
        if args.command == "evaluate":
            return _cmd_evaluate(args)
        if args.command == "benchmark":
            return _cmd_benchmark(args)
        return _cmd_build_silver(args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except ConfigError as exc:
        print(f"biopipe: error: {exc}", file=sys.stderr)
        return 1
    except (DataError, PackageError, InputError, OSError) as exc:
        print(f"biopipe: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
