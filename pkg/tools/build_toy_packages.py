"""Train and save the bundled toy packages under data/registry/.

toy-craft  - biomedical text: tokenize, pos, lemma, depparse
toy-mimic  - clinical notes:  tokenize, pos, lemma, depparse
toy-i2b2   - clinical NER backed by two pretrained character LMs

Deterministic given the bundled corpora. Run from the repo root:

    python tools/build_toy_packages.py
"""

from __future__ import annotations

import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from biopipe.charlm import CharLmConfig, Direction, filter_corpus, train_charlm
from biopipe.conllu import read_conllu
from biopipe.corpus import read_ner_corpus
from biopipe.depparser import ParserConfig, train_parser
from biopipe.lemmatizer import Lemmatizer, LemmatizerConfig, train_lemmatizer
from biopipe.ner import NerConfig, train_ner
from biopipe.package import save_package
from biopipe.segmenter import SegmenterConfig, train_segmenter
from biopipe.tagger import TaggerConfig, train_tagger

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "data"
REGISTRY = DATA / "registry"

SEED = 42
LR = 0.008


def build_syntactic(treebank_name: str, package_name: str):
    tb = read_conllu((DATA / "treebanks" / f"{treebank_name}-train.conllu").read_bytes())
    t0 = time.perf_counter()
    seg = train_segmenter(tb, SegmenterConfig(lr=LR), seed=SEED)
    pos = train_tagger(tb, TaggerConfig(lr=LR), seed=SEED)
    lexicon, seq2seq = train_lemmatizer(tb, LemmatizerConfig(lr=LR), seed=SEED)
    par = train_parser(tb, ParserConfig(lr=LR), seed=SEED)
    models = {"tokenize": seg, "pos": pos, "lemma": Lemmatizer(seq2seq), "depparse": par}
    save_package(models, REGISTRY / package_name, package_name)
    print(f"{package_name}: {time.perf_counter() - t0:.0f}s")


def build_ner(package_name: str):
    t0 = time.perf_counter()
    lines = filter_corpus(
        (DATA / "charlm" / "clinical_raw.txt").read_text(encoding="utf-8").splitlines()
    )
    corpus = "\n".join(lines)
    lm_cfg = CharLmConfig(epochs=10, lr=LR)
    fwd = train_charlm(corpus, Direction.FORWARD, lm_cfg, seed=SEED)
    bwd = train_charlm(corpus, Direction.BACKWARD, lm_cfg, seed=SEED)
    rows = read_ner_corpus((DATA / "ner" / "toy_i2b2-train.tsv").read_bytes())
    ner = train_ner(rows, fwd, bwd, NerConfig(lr=LR, epochs=60, word_dropout=0.35), seed=SEED)
    save_package({"ner": ner}, REGISTRY / package_name, package_name)
    print(f"{package_name}: {time.perf_counter() - t0:.0f}s")


def main():
    REGISTRY.mkdir(parents=True, exist_ok=True)
    build_syntactic("toy_bio", "toy-craft")
    build_syntactic("toy_clinical", "toy-mimic")
    build_ner("toy-i2b2")


if __name__ == "__main__":
    main()
