"""Annotate a biomedical abstract with the bundled toy-craft package.

Run from the repo root: python demos/annotate_biomedical.py
"""

from pathlib import Path

from biopipe.pipeline import PipelineConfig, annotate, build_pipeline

REGISTRY = Path(__file__).resolve().parent.parent / "data" / "registry"

TEXT = (
    "Down-regulation of enzymes inhibits protein genes. "
    "Phosphorylated proteins activate mitochondrial kinases."
)

pipeline = build_pipeline(PipelineConfig(package="toy-craft"), REGISTRY)
doc = annotate(pipeline, TEXT)

print(f"{len(doc.sentences)} sentences, {doc.num_tokens} tokens\n")
for i, sent in enumerate(doc.sentences, 1):
    print(f"sentence {i}: {' '.join(sent.tokens)}")
    for w in sent.words:
        print(f"  {w.id:>2} {w.text:<16} {w.upos:<6} {w.xpos:<5} "
              f"lemma={w.lemma:<16} head={w.head} {w.deprel}")
    print()
