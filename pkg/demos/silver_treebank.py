"""Bootstrap a treebank from raw clinical notes.

Splits the bundled notes 6:1:1, annotates the training notes with the
toy-mimic package under a rule-based tokenization hook, and retrains a
fresh tagger on the resulting silver treebank. Run from the repo root:
python demos/silver_treebank.py
"""

from pathlib import Path

from biopipe.conllu import write_conllu
from biopipe.corpus import (
    build_silver_treebank,
    default_tokenization_hook,
    read_notes,
    stratified_split,
)
from biopipe.package import load_package
from biopipe.pipeline import Pipeline
from biopipe.tagger import TaggerConfig, tag_sentence, train_tagger

DATA = Path(__file__).resolve().parent.parent / "data"

notes = read_notes(DATA / "notes")
train, dev, test = stratified_split(notes, (6, 1, 1), seed=0)
print(f"{len(notes)} notes -> train {len(train)}, dev {len(dev)}, test {len(test)}")

pipeline = Pipeline(load_package(DATA / "registry" / "toy-mimic"))
silver = build_silver_treebank(train, default_tokenization_hook, pipeline)
print(f"silver treebank: {len(silver)} sentences")
print(write_conllu(silver).decode("utf-8").split("\n\n")[0])

tagger = train_tagger(silver, TaggerConfig(epochs=30, lr=8e-3), seed=0)
tokens = [w.form for w in silver.sentences[0].words]
upos, _ = tag_sentence(tagger, tokens)
print("\nretrained tagger on the silver data:")
print(" ".join(f"{t}/{u}" for t, u in zip(tokens, upos)))
