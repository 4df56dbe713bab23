"""Neural NLP pipelines for biomedical and clinical English.

Processors: character-level tokenizer/sentence splitter, UPOS/XPOS tagger,
ensemble lemmatizer, deep biaffine dependency parser, and a BiLSTM-CRF named
entity recognizer fed by pretrained character language models. Models are
trained with a small numpy-based autodiff engine, packaged into checksummed
binary bundles, and driven either from Python or the ``biopipe`` CLI.
"""

from .conllu import (
    Role,
    Treebank,
    combine_treebanks,
    document_to_treebank,
    read_conllu,
    treebank_to_document,
    write_conllu,
)
from .corpus import (
    NoteCollection,
    build_silver_treebank,
    default_tokenization_hook,
    read_ner_corpus,
    read_notes,
    stratified_split,
)
from .document import Document, Entity, Sentence, Word
from .errors import (
    BiopipeError,
    ConfigError,
    ContractError,
    DataError,
    DomainError,
    InputError,
    PackageError,
    ShapeError,
)
from .package import load_package, save_package
from .pipeline import (
    Pipeline,
    PipelineConfig,
    annotate,
    annotate_pretokenized,
    build_pipeline,
)
from .scorer import MetricReport, align_tokens, entity_f1, evaluate_documents

__version__ = "1.0.0"

__all__ = [
    "BiopipeError",
    "ConfigError",
    "ContractError",
    "DataError",
    "Document",
    "DomainError",
    "Entity",
    "InputError",
    "MetricReport",
    "NoteCollection",
    "PackageError",
    "Pipeline",
    "PipelineConfig",
    "Role",
    "Sentence",
    "ShapeError",
    "Treebank",
    "Word",
    "align_tokens",
    "annotate",
    "annotate_pretokenized",
    "build_pipeline",
    "build_silver_treebank",
    "combine_treebanks",
    "default_tokenization_hook",
    "document_to_treebank",
    "entity_f1",
    "evaluate_documents",
    "load_package",
    "read_conllu",
    "read_ner_corpus",
    "read_notes",
    "save_package",
    "stratified_split",
    "treebank_to_document",
    "write_conllu",
]
