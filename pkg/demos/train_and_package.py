"""Train a two-processor pipeline from scratch and save it as a package.

Trains a sentence segmenter and a POS tagger on the bundled clinical toy
treebank, writes them into a fresh package directory, reloads that package
and annotates with it. Takes around half a minute on a laptop. Run from the
repo root: python demos/train_and_package.py
"""

import tempfile
from pathlib import Path

from biopipe.conllu import read_conllu
from biopipe.package import load_package, save_package
from biopipe.pipeline import Pipeline, annotate
from biopipe.segmenter import SegmenterConfig, train_segmenter
from biopipe.tagger import TaggerConfig, train_tagger

DATA = Path(__file__).resolve().parent.parent / "data"

treebank = read_conllu((DATA / "treebanks" / "toy_clinical-train.conllu").read_bytes())
print(f"training on {len(treebank)} sentences")

segmenter = train_segmenter(treebank, SegmenterConfig(lr=8e-3), seed=0)
print("segmenter done")
tagger = train_tagger(treebank, TaggerConfig(lr=8e-3), seed=0)
print("tagger done")

with tempfile.TemporaryDirectory() as tmp:
    package_dir = Path(tmp) / "clinical-mini"
    save_package({"tokenize": segmenter, "pos": tagger}, package_dir, "clinical-mini")
    print(f"saved package: {sorted(p.name for p in package_dir.iterdir())}")

    pipeline = Pipeline(load_package(package_dir))
    doc = annotate(pipeline, "He denies nausea and cough. Blood pressure was elevated.")
    for sent in doc.sentences:
        print(" ".join(f"{w.text}/{w.upos}" for w in sent.words))
