"""Clinical entity extraction: a syntactic package plus an NER override.

The toy-mimic package handles tokenization through parsing; the ner slot is
filled from toy-i2b2, whose tagger was trained on top of two pretrained
character LMs. Run from the repo root: python demos/clinical_ner.py
"""

from pathlib import Path

from biopipe.pipeline import PipelineConfig, annotate, build_pipeline

REGISTRY = Path(__file__).resolve().parent.parent / "data" / "registry"

NOTE = (
    "He has a sore throat and was given Cepacol lozenges. "
    "The patient reports chest pain. "
    "Chest CT showed no lesions."
)

config = PipelineConfig(package="toy-mimic", processors={"ner": "toy-i2b2"})
pipeline = build_pipeline(config, REGISTRY)
doc = annotate(pipeline, NOTE)

print("entities:")
for e in doc.entities:
    print(f"  [{e.start_char:>3}, {e.end_char:>3})  {e.type:<10} {e.text}")

print("\ndependencies of the first sentence:")
doc.sentences[0].print_dependencies()
