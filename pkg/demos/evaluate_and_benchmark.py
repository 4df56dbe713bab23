"""Score a packaged pipeline against gold CoNLL-U and time it.

Evaluates toy-mimic on the clinical dev split under two protocols (raw text
in, and gold tokens in), then reports annotation speed. Run from the repo
root: python demos/evaluate_and_benchmark.py
"""

from pathlib import Path

from biopipe.conllu import read_conllu, treebank_to_document
from biopipe.package import load_package
from biopipe.pipeline import Pipeline, annotate, annotate_treebank
from biopipe.scorer import benchmark, benchmark_report, evaluate_documents

DATA = Path(__file__).resolve().parent.parent / "data"

pipeline = Pipeline(load_package(DATA / "registry" / "toy-mimic"))
gold = read_conllu((DATA / "treebanks" / "toy_clinical-dev.conllu").read_bytes())
gold_doc = treebank_to_document(gold)

for mode in ("end2end", "goldtok"):
    system = annotate_treebank(pipeline, gold, mode=mode)
    report = evaluate_documents(system, gold_doc)
    print(f"--- {mode} ---")
    print(report.table())
    print()

corpus = read_conllu(
    (DATA / "treebanks" / "toy_clinical-train.conllu").read_bytes()
).raw_text()
run = benchmark(lambda text: annotate(pipeline, text), corpus, name="toy-mimic")
print(benchmark_report([run]))
