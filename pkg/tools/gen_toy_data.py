"""Generate the bundled toy corpora under data/.

Three treebanks (general English with contractions, biomedical text with
hyphenated compounds split CRAFT-style, clinical notes language), a clinical
NER corpus, a raw character-LM corpus with anonymization masks, a directory
of toy notes, and a small word-vector fixture. The general and biomedical
treebanks share no vocabulary beyond "." and "," so that cross-domain
segmentation behavior is driven purely by domain-specific character patterns
(apostrophes vs hyphens).

Deterministic: a fixed seed drives all sampling. Run from the repo root:

    python tools/gen_toy_data.py
"""

from __future__ import annotations

import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from biopipe.conllu import ConlluSentence, ConlluWord, Treebank, write_conllu
from biopipe.corpus import write_ner_corpus

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "data"

SEED = 20240814

# ---------------------------------------------------------------------------
# Token helper: (form, lemma, upos, xpos, head, deprel, glue)
# glue=True means no space between this token and the previous one in raw text.
# ---------------------------------------------------------------------------


def tok(form, lemma, upos, xpos, head, deprel, glue=False):
    return {
        "form": form,
        "lemma": lemma,
        "upos": upos,
        "xpos": xpos,
        "head": head,
        "deprel": deprel,
        "glue": glue,
    }


def build_treebank(sentences) -> Treebank:
    """Lay sentences out in one coordinate space, one space between tokens
    and between sentences unless a token is glued to its predecessor."""
    out = []
    pos = 0
    for sent in sentences:
        words = []
        parts = []
        for i, t in enumerate(sent):
            if i > 0 and not t["glue"]:
                pos += 1
                parts.append(" ")
            elif i == 0 and out:
                pos += 1
            start = pos
            pos += len(t["form"])
            parts.append(t["form"])
            words.append(
                ConlluWord(
                    id=i + 1,
                    form=t["form"],
                    lemma=t["lemma"],
                    upos=t["upos"],
                    xpos=t["xpos"],
                    feats="_",
                    head=t["head"],
                    deprel=t["deprel"],
                    deps="_",
                    misc=f"start_char={start}|end_char={pos}",
                )
            )
        out.append(ConlluSentence(words=words, comments=[f"# text = {''.join(parts)}"]))
    return Treebank(sentences=out)


# ---------------------------------------------------------------------------
# General-English domain: contractions, everyday vocabulary
# ---------------------------------------------------------------------------

PRONOUNS = [
    ("He", "he"), ("She", "she"), ("They", "they"), ("We", "we"), ("You", "you"), ("It", "it"),
]
VERBS_PAST = [
    ("liked", "like"), ("played", "play"), ("worked", "work"), ("moved", "move"),
    ("stayed", "stay"), ("wanted", "want"), ("said", "say"), ("went", "go"),
    ("saw", "see"), ("made", "make"), ("took", "take"), ("helped", "help"),
]
VERBS_BASE = [
    ("like", "like"), ("play", "play"), ("work", "work"), ("move", "move"),
    ("stay", "stay"), ("help", "help"), ("visit", "visit"), ("leave", "leave"),
]
NOUNS_EN = [
    ("garden", "garden"), ("house", "house"), ("school", "school"), ("book", "book"),
    ("story", "story"), ("game", "game"), ("street", "street"), ("city", "city"),
    ("team", "team"), ("park", "park"), ("child", "child"), ("friend", "friend"),
    ("dog", "dog"), ("cat", "cat"), ("car", "car"), ("winter", "winter"),
]
ADJS_EN = [
    ("happy", "happy"), ("old", "old"), ("young", "young"), ("small", "small"),
    ("big", "big"), ("new", "new"), ("good", "good"), ("kind", "kind"), ("busy", "busy"),
]
ADVS_EN = [("quickly", "quickly"), ("slowly", "slowly"), ("often", "often"), ("never", "never"), ("again", "again")]
DETS_EN = [("the", "the"), ("a", "a"), ("this", "this"), ("that", "that")]
DETS_EN_CAP = [("The", "the"), ("A", "a"), ("This", "this"), ("That", "that")]
PREPS_EN = [("to", "to"), ("at", "at"), ("with", "with"), ("from", "from"), ("on", "on")]
CCS_EN = [("and", "and"), ("but", "but"), ("or", "or")]
AUX_PAIRS = [("did", "do", "VBD"), ("does", "do", "VBZ")]


def _dot(head):
    return tok(".", ".", "PUNCT", ".", head, "punct", glue=True)


def _comma(head):
    return tok(",", ",", "PUNCT", ",", head, "punct", glue=True)


def gen_english(rng, n):
    sents = []
    for k in range(n):
        t = k % 9
        pr, prl = PRONOUNS[rng.integers(len(PRONOUNS))]
        v, vl = VERBS_PAST[rng.integers(len(VERBS_PAST))]
        vb, vbl = VERBS_BASE[rng.integers(len(VERBS_BASE))]
        d, dl = DETS_EN[rng.integers(len(DETS_EN))]
        dc, dcl = DETS_EN_CAP[rng.integers(len(DETS_EN_CAP))]
        nn, nnl = NOUNS_EN[rng.integers(len(NOUNS_EN))]
        n2, n2l = NOUNS_EN[rng.integers(len(NOUNS_EN))]
        aj, ajl = ADJS_EN[rng.integers(len(ADJS_EN))]
        av, avl = ADVS_EN[rng.integers(len(ADVS_EN))]
        pp, ppl = PREPS_EN[rng.integers(len(PREPS_EN))]
        cc, ccl = CCS_EN[rng.integers(len(CCS_EN))]
        aux, auxl, auxx = AUX_PAIRS[rng.integers(len(AUX_PAIRS))]
        pr2, pr2l = PRONOUNS[rng.integers(len(PRONOUNS))]
        v2, v2l = VERBS_PAST[rng.integers(len(VERBS_PAST))]
        if t == 0:
            sents.append([
                tok(pr, prl, "PRON", "PRP", 2, "nsubj"),
                tok(v, vl, "VERB", "VBD", 0, "root"),
                tok(d, dl, "DET", "DT", 4, "det"),
                tok(nn, nnl, "NOUN", "NN", 2, "obj"),
                _dot(2),
            ])
        elif t == 1:
            # Contraction: "didn't" in raw text, two syntactic words.
            sents.append([
                tok(pr, prl, "PRON", "PRP", 4, "nsubj"),
                tok(aux, auxl, "AUX", auxx, 4, "aux"),
                tok("n't", "not", "PART", "RB", 4, "advmod", glue=True),
                tok(vb, vbl, "VERB", "VB", 0, "root"),
                tok(d, dl, "DET", "DT", 6, "det"),
                tok(nn, nnl, "NOUN", "NN", 4, "obj"),
                _dot(4),
            ])
        elif t == 2:
            sents.append([
                tok(pr, prl, "PRON", "PRP", 2, "nsubj"),
                tok(v, vl, "VERB", "VBD", 0, "root"),
                tok(av, avl, "ADV", "RB", 2, "advmod"),
                _dot(2),
            ])
        elif t == 3:
            sents.append([
                tok(dc, dcl, "DET", "DT", 2, "det"),
                tok(nn, nnl, "NOUN", "NN", 4, "nsubj"),
                tok("was", "be", "AUX", "VBD", 4, "cop"),
                tok(aj, ajl, "ADJ", "JJ", 0, "root"),
                _dot(4),
            ])
        elif t == 4:
            sents.append([
                tok(pr, prl, "PRON", "PRP", 3, "nsubj"),
                tok("'ll", "will", "AUX", "MD", 3, "aux", glue=True),
                tok(vb, vbl, "VERB", "VB", 0, "root"),
                tok(pp, ppl, "ADP", "IN", 6, "case"),
                tok(d, dl, "DET", "DT", 6, "det"),
                tok(nn, nnl, "NOUN", "NN", 3, "obl"),
                _dot(3),
            ])
        elif t == 5:
            sents.append([
                tok(pr, prl, "PRON", "PRP", 3, "nsubj"),
                tok("'s", "be", "AUX", "VBZ", 3, "cop", glue=True),
                tok(aj, ajl, "ADJ", "JJ", 0, "root"),
                _dot(3),
            ])
        elif t == 6:
            sents.append([
                tok(pr, prl, "PRON", "PRP", 2, "nsubj"),
                tok(v, vl, "VERB", "VBD", 0, "root"),
                tok(cc, ccl, "CCONJ", "CC", 5, "cc"),
                tok(pr2, pr2l, "PRON", "PRP", 5, "nsubj"),
                tok(v2, v2l, "VERB", "VBD", 2, "conj"),
                _dot(2),
            ])
        elif t == 7:
            sents.append([
                tok(pr, prl, "PRON", "PRP", 2, "nsubj"),
                tok(v, vl, "VERB", "VBD", 0, "root"),
                tok(d, dl, "DET", "DT", 5, "det"),
                tok(aj, ajl, "ADJ", "JJ", 5, "amod"),
                tok(nn, nnl, "NOUN", "NN", 2, "obj"),
                _dot(2),
            ])
        else:
            sents.append([
                tok(pr, prl, "PRON", "PRP", 2, "nsubj"),
                tok(v, vl, "VERB", "VBD", 0, "root"),
                tok(d, dl, "DET", "DT", 4, "det"),
                tok(nn, nnl, "NOUN", "NN", 2, "obj"),
                _comma(8),
                tok(cc, ccl, "CCONJ", "CC", 8, "cc"),
                tok(pr2, pr2l, "PRON", "PRP", 8, "nsubj"),
                tok(v2, v2l, "VERB", "VBD", 2, "conj"),
                _dot(2),
            ])
    return sents


# ---------------------------------------------------------------------------
# Biomedical domain: hyphenated compounds split into three tokens
# ---------------------------------------------------------------------------

NOUNS_BIO_SG = [
    ("receptor", "receptor"), ("kinase", "kinase"), ("pathway", "pathway"),
    ("mutation", "mutation"), ("enzyme", "enzyme"), ("membrane", "membrane"),
    ("tumor", "tumor"), ("signal", "signal"), ("protein", "protein"),
    ("gene", "gene"), ("atlas", "atlas"), ("genome", "genome"), ("mouse", "mouse"),
]
NOUNS_BIO_PL = [
    ("receptors", "receptor"), ("kinases", "kinase"), ("pathways", "pathway"),
    ("mutations", "mutation"), ("enzymes", "enzyme"), ("membranes", "membrane"),
    ("tumors", "tumor"), ("signals", "signal"), ("proteins", "protein"),
    ("genes", "gene"), ("cells", "cell"), ("tissues", "tissue"),
    ("molecules", "molecule"), ("mice", "mouse"),
]
VERBS_BIO_Z = [
    ("activates", "activate"), ("inhibits", "inhibit"), ("encodes", "encode"),
    ("regulates", "regulate"), ("binds", "bind"), ("induces", "induce"),
    ("mediates", "mediate"), ("suppresses", "suppress"), ("characterizes", "characterize"),
]
VERBS_BIO_P = [
    ("activate", "activate"), ("inhibit", "inhibit"), ("encode", "encode"),
    ("regulate", "regulate"), ("bind", "bind"), ("induce", "induce"),
    ("mediate", "mediate"), ("suppress", "suppress"), ("express", "express"),
]
ADJS_BIO = [
    ("nuclear", "nuclear"), ("cellular", "cellular"), ("molecular", "molecular"),
    ("embryonic", "embryonic"), ("mitochondrial", "mitochondrial"),
    ("transcriptomic", "transcriptomic"), ("ageing", "ageing"),
    ("mutated", "mutated"), ("phosphorylated", "phosphorylated"),
]
ADJS_BIO_CAP = [
    ("Nuclear", "nuclear"), ("Cellular", "cellular"), ("Molecular", "molecular"),
    ("Embryonic", "embryonic"), ("Mitochondrial", "mitochondrial"),
    ("Mutated", "mutated"), ("Phosphorylated", "phosphorylated"), ("Ageing", "ageing"),
]
COMP_NOUN = [("Up", "up", "regulation", "regulation"), ("Down", "down", "regulation", "regulation"),
             ("Cell", "cell", "cycle", "cycle"), ("Knock", "knock", "out", "out")]
COMP_ADJ = [("Single", "single", "cell", "cell"), ("Wild", "wild", "type", "type"),
            ("Long", "long", "term", "term")]


def _hyph(head):
    return tok("-", "-", "PUNCT", "HYPH", head, "punct", glue=True)


def gen_bio(rng, n):
    sents = []
    for k in range(n):
        t = k % 7
        np1, np1l = NOUNS_BIO_PL[rng.integers(len(NOUNS_BIO_PL))]
        np2, np2l = NOUNS_BIO_PL[rng.integers(len(NOUNS_BIO_PL))]
        np3, np3l = NOUNS_BIO_PL[rng.integers(len(NOUNS_BIO_PL))]
        ns1, ns1l = NOUNS_BIO_SG[rng.integers(len(NOUNS_BIO_SG))]
        vz, vzl = VERBS_BIO_Z[rng.integers(len(VERBS_BIO_Z))]
        vp, vpl = VERBS_BIO_P[rng.integers(len(VERBS_BIO_P))]
        aj, ajl = ADJS_BIO[rng.integers(len(ADJS_BIO))]
        ajc, ajcl = ADJS_BIO_CAP[rng.integers(len(ADJS_BIO_CAP))]
        cn = COMP_NOUN[rng.integers(len(COMP_NOUN))]
        ca = COMP_ADJ[rng.integers(len(COMP_ADJ))]
        if t == 0:
            sents.append([
                tok(ajc, ajcl, "ADJ", "JJ", 2, "amod"),
                tok(np1, np1l, "NOUN", "NNS", 3, "nsubj"),
                tok(vp, vpl, "VERB", "VBP", 0, "root"),
                tok(aj, ajl, "ADJ", "JJ", 5, "amod"),
                tok(np2, np2l, "NOUN", "NNS", 3, "obj"),
                _dot(3),
            ])
        elif t == 1:
            # "Up-regulation of kinases induces tumor signals."
            sents.append([
                tok(cn[0], cn[1], "NOUN", "NN", 3, "compound"),
                _hyph(3),
                tok(cn[2], cn[3], "NOUN", "NN", 6, "nsubj", glue=True),
                tok("of", "of", "ADP", "IN", 5, "case"),
                tok(np1, np1l, "NOUN", "NNS", 3, "nmod"),
                tok(vz, vzl, "VERB", "VBZ", 0, "root"),
                tok(ns1, ns1l, "NOUN", "NN", 8, "compound"),
                tok(np2, np2l, "NOUN", "NNS", 6, "obj"),
                _dot(6),
            ])
        elif t == 2:
            # "Single-cell atlas characterizes ageing tissues."
            sents.append([
                tok(ca[0], ca[1], "ADJ", "JJ", 3, "amod"),
                _hyph(3),
                tok(ca[2], ca[3], "NOUN", "NN", 4, "compound", glue=True),
                tok(ns1, ns1l, "NOUN", "NN", 5, "nsubj"),
                tok(vz, vzl, "VERB", "VBZ", 0, "root"),
                tok(aj, ajl, "ADJ", "JJ", 7, "amod"),
                tok(np2, np2l, "NOUN", "NNS", 5, "obj"),
                _dot(5),
            ])
        elif t == 3:
            sents.append([
                tok(ajc, ajcl, "ADJ", "JJ", 2, "amod"),
                tok(np1, np1l, "NOUN", "NNS", 3, "nsubj"),
                tok(vp, vpl, "VERB", "VBP", 0, "root"),
                tok(ns1, ns1l, "NOUN", "NN", 5, "compound"),
                tok(np2, np2l, "NOUN", "NNS", 3, "obj"),
                _dot(3),
            ])
        elif t == 4:
            # "Wild-type mice express nuclear kinases."
            sents.append([
                tok(ca[0], ca[1], "ADJ", "JJ", 3, "amod"),
                _hyph(3),
                tok(ca[2], ca[3], "NOUN", "NN", 4, "compound", glue=True),
                tok(np1, np1l, "NOUN", "NNS", 5, "nsubj"),
                tok(vp, vpl, "VERB", "VBP", 0, "root"),
                tok(aj, ajl, "ADJ", "JJ", 7, "amod"),
                tok(np2, np2l, "NOUN", "NNS", 5, "obj"),
                _dot(5),
            ])
        elif t == 5:
            sents.append([
                tok(ns1.capitalize(), ns1l, "NOUN", "NN", 2, "compound"),
                tok(np1, np1l, "NOUN", "NNS", 3, "nsubj"),
                tok(vp, vpl, "VERB", "VBP", 0, "root"),
                tok("in", "in", "ADP", "IN", 5, "case"),
                tok(np2, np2l, "NOUN", "NNS", 3, "obl"),
                _dot(3),
            ])
        else:
            sents.append([
                tok(np1.capitalize(), np1l, "NOUN", "NNS", 2, "nsubj"),
                tok(vp, vpl, "VERB", "VBP", 0, "root"),
                tok(np2, np2l, "NOUN", "NNS", 2, "obj"),
                _comma(5),
                tok(np3, np3l, "NOUN", "NNS", 3, "conj"),
                _dot(2),
            ])
    return sents


# ---------------------------------------------------------------------------
# Clinical domain: notes language, entity-bearing sentences
# ---------------------------------------------------------------------------

DRUGS_TRAIN = ["Cepacol", "Tylenol", "Motrin", "Lipitor", "Zocor", "Ativan"]
# Held-out drugs share no suffix with the training drugs, so nothing about
# their shape marks them as treatments; only the raw corpus covers them.
DRUGS_HELDOUT = ["Prednisone", "Keflex", "Zyrtec", "Buspar"]
PROBLEMS_ONE = [
    ("fever", "fever"), ("cough", "cough"), ("nausea", "nausea"),
    ("dizziness", "dizziness"), ("hypertension", "hypertension"), ("diabetes", "diabetes"),
]
SIMPLE_DRUGS = [("aspirin", "aspirin"), ("ibuprofen", "ibuprofen"), ("insulin", "insulin")]


def clinical_c0():
    """The sentence every clinical artifact revolves around."""
    return [
        tok("The", "the", "DET", "DT", 2, "det"),
        tok("patient", "patient", "NOUN", "NN", 3, "nsubj"),
        tok("had", "have", "VERB", "VBD", 0, "root"),
        tok("a", "a", "DET", "DT", 6, "det"),
        tok("sore", "sore", "ADJ", "JJ", 6, "amod"),
        tok("throat", "throat", "NOUN", "NN", 3, "obj"),
        tok("and", "and", "CCONJ", "CC", 9, "cc"),
        tok("was", "be", "AUX", "VBD", 9, "aux"),
        tok("treated", "treat", "VERB", "VBN", 3, "conj"),
        tok("with", "with", "ADP", "IN", 12, "case"),
        tok("Cepacol", "Cepacol", "PROPN", "NNP", 12, "compound"),
        tok("lozenges", "lozenge", "NOUN", "NNS", 9, "obl"),
        _dot(3),
    ]


def gen_clinical(rng, n, drugs=None):
    drugs = drugs or DRUGS_TRAIN
    sents = []
    for k in range(n):
        t = k % 8
        drug = drugs[rng.integers(len(drugs))]
        p1, p1l = PROBLEMS_ONE[rng.integers(len(PROBLEMS_ONE))]
        p2, p2l = PROBLEMS_ONE[rng.integers(len(PROBLEMS_ONE))]
        if t == 0:
            sents.append(clinical_c0())
        elif t == 1:
            sents.append([
                tok("The", "the", "DET", "DT", 2, "det"),
                tok("patient", "patient", "NOUN", "NN", 3, "nsubj"),
                tok("reports", "report", "VERB", "VBZ", 0, "root"),
                tok("chest", "chest", "NOUN", "NN", 5, "compound"),
                tok("pain", "pain", "NOUN", "NN", 3, "obj"),
                _dot(3),
            ])
        elif t == 2:
            sents.append([
                tok("Blood", "blood", "NOUN", "NN", 2, "compound"),
                tok("pressure", "pressure", "NOUN", "NN", 4, "nsubj"),
                tok("was", "be", "AUX", "VBD", 4, "cop"),
                tok("elevated", "elevated", "ADJ", "JJ", 0, "root"),
                _dot(4),
            ])
        elif t == 3:
            sents.append([
                tok("The", "the", "DET", "DT", 2, "det"),
                tok("patient", "patient", "NOUN", "NN", 4, "nsubj"),
                tok("was", "be", "AUX", "VBD", 4, "aux"),
                tok("given", "give", "VERB", "VBN", 0, "root"),
                tok(drug, drug, "PROPN", "NNP", 4, "obj"),
                _dot(4),
            ])
        elif t == 4:
            who = [("She", "she"), ("He", "he")][rng.integers(2)]
            sents.append([
                tok(who[0], who[1], "PRON", "PRP", 2, "nsubj"),
                tok("denies", "deny", "VERB", "VBZ", 0, "root"),
                tok(p1, p1l, "NOUN", "NN", 2, "obj"),
                tok("and", "and", "CCONJ", "CC", 5, "cc"),
                tok(p2, p2l, "NOUN", "NN", 3, "conj"),
                _dot(2),
            ])
        elif t == 5:
            sents.append([
                tok("Chest", "chest", "NOUN", "NN", 2, "compound"),
                tok("CT", "CT", "PROPN", "NNP", 3, "nsubj"),
                tok("showed", "show", "VERB", "VBD", 0, "root"),
                tok("no", "no", "DET", "DT", 5, "det"),
                tok("lesions", "lesion", "NOUN", "NNS", 3, "obj"),
                _dot(3),
            ])
        elif t == 6:
            sents.append([
                tok(drug, drug, "PROPN", "NNP", 2, "nsubj"),
                tok("improved", "improve", "VERB", "VBD", 0, "root"),
                tok("the", "the", "DET", "DT", 4, "det"),
                tok("symptoms", "symptom", "NOUN", "NNS", 2, "obj"),
                _dot(2),
            ])
        else:
            sents.append([
                tok("Examination", "examination", "NOUN", "NN", 3, "nsubj"),
                tok("was", "be", "AUX", "VBD", 3, "cop"),
                tok("normal", "normal", "ADJ", "JJ", 0, "root"),
                _dot(3),
            ])
    return sents


# ---------------------------------------------------------------------------
# Clinical NER corpus: problem / test / treatment
# ---------------------------------------------------------------------------


# Contexts where the entity type is decidable only from the mention itself.
AMBIG_CONTEXTS = [("History", "includes"), ("Assessment", "notes"), ("Course", "included")]


def ambiguous_bank(drugs):
    bank = [(d, "treatment") for d in drugs]
    bank += [(s, "treatment") for s, _ in SIMPLE_DRUGS]
    bank += [(p, "problem") for p, _ in PROBLEMS_ONE]
    bank += [(p.capitalize(), "problem") for p, _ in PROBLEMS_ONE]
    return bank


def ner_sentences(rng, n, drugs, bioes=True, ambig=None):
    """(tokens, tags) rows over the clinical sentence shapes."""
    ambig = ambig or ambiguous_bank(drugs)
    rows = []
    for k in range(n):
        t = k % 10
        drug = drugs[rng.integers(len(drugs))]
        sdrug, _ = SIMPLE_DRUGS[rng.integers(len(SIMPLE_DRUGS))]
        p1, _ = PROBLEMS_ONE[rng.integers(len(PROBLEMS_ONE))]
        p2, _ = PROBLEMS_ONE[rng.integers(len(PROBLEMS_ONE))]
        if t == 0:
            tokens = "The patient had a sore throat and was treated with".split() + [drug, "lozenges", "."]
            tags = ["O"] * 4 + ["B-problem", "E-problem" if bioes else "I-problem"] + ["O"] * 4 + [
                "B-treatment", "E-treatment" if bioes else "I-treatment", "O"]
        elif t == 1:
            tokens = "The patient reports chest pain .".split()
            tags = ["O", "O", "O", "B-problem", "E-problem" if bioes else "I-problem", "O"]
        elif t == 2:
            tokens = "Blood pressure was elevated .".split()
            tags = ["B-test", "E-test" if bioes else "I-test", "O", "O", "O"]
        elif t == 3:
            tokens = ["The", "patient", "was", "given", drug, "."]
            tags = ["O", "O", "O", "O", "S-treatment" if bioes else "B-treatment", "O"]
        elif t == 4:
            who = ["She", "He"][rng.integers(2)]
            tokens = [who, "denies", p1, "and", p2, "."]
            tags = ["O", "O", "S-problem" if bioes else "B-problem", "O",
                    "S-problem" if bioes else "B-problem", "O"]
        elif t == 5:
            tokens = "Chest CT showed no lesions .".split()
            tags = ["B-test", "E-test" if bioes else "I-test", "O", "O", "O", "O"]
        elif t == 6:
            tokens = [drug, "improved", "the", "symptoms", "."]
            tags = ["S-treatment" if bioes else "B-treatment", "O", "O", "O", "O"]
        elif t == 7:
            tokens = ["The", "patient", "was", "given", sdrug, "for", p1, "."]
            tags = ["O", "O", "O", "O", "S-treatment" if bioes else "B-treatment", "O",
                    "S-problem" if bioes else "B-problem", "O"]
        else:
            lead, verb = AMBIG_CONTEXTS[rng.integers(len(AMBIG_CONTEXTS))]
            word, etype = ambig[rng.integers(len(ambig))]
            tokens = [lead, verb, word, "."]
            tags = ["O", "O", f"S-{etype}" if bioes else f"B-{etype}", "O"]
        rows.append((tokens, tags))
    return rows


# ---------------------------------------------------------------------------
# CharLM raw corpus and notes
# ---------------------------------------------------------------------------

MASK_LINES = [
    "Seen by [**First Name8 (NamePattern2)**] on admission .",
    "Transferred from [**Hospital1 18**] for further care .",
    "Follow up with [**Last Name (STitle) 2920**] in clinic .",
    "Discharged on [**2119-7-14**] in stable condition .",
    "Note dictated by [**First Name8 (NamePattern2)**] [**Last Name (NamePattern1)**] .",
]


def charlm_lines(rng, n):
    """Unlabeled clinical text: every mention is followed by a continuation
    typical for its kind, which is what lets the language model's states
    carry word knowledge the labeled corpus lacks."""
    lines = []
    all_drugs = DRUGS_TRAIN + DRUGS_HELDOUT
    for k in range(n):
        t = k % 12
        drug = all_drugs[rng.integers(len(all_drugs))]
        sdrug, _ = SIMPLE_DRUGS[rng.integers(len(SIMPLE_DRUGS))]
        p1, _ = PROBLEMS_ONE[rng.integers(len(PROBLEMS_ONE))]
        pc = p1.capitalize()
        if t == 0:
            lines.append(f"The patient was given {drug} for relief .")
        elif t == 1:
            lines.append(f"{drug} improved the symptoms within days .")
        elif t == 2:
            lines.append(f"She was treated with {drug} lozenges .")
        elif t == 3:
            lines.append(f"He reports {p1} since admission .")
        elif t == 4:
            lines.append(f"Daily {sdrug} was continued on discharge .")
        elif t == 5:
            lines.append(f"Patient denies {p1} at this time .")
        elif t == 6:
            lines.append(f"{pc} was noted on admission .")
        elif t == 7:
            lines.append(f"{pc} resolved before discharge .")
        elif t == 8:
            lines.append(f"The patient tolerated {drug} well .")
        elif t == 9:
            lines.append(f"{drug} was started at bedtime .")
        elif t == 10:
            lines.append(f"{pc} worsened overnight .")
        else:
            lines.append(f"A dose of {drug} relieved the {p1} .")
    return lines


NOTE_TEXTS = [
    "The patient was admitted with fever and cough. Blood pressure was elevated.\nShe was given aspirin.",
    "Chest CT showed no lesions. The patient reports chest pain.\nExamination was normal.",
    "The patient had a sore throat and was treated with Cepacol lozenges.\nSymptoms improved.",
    "He denies nausea and dizziness. Daily insulin was continued.",
    "Blood pressure was normal. The patient was given Tylenol for fever.",
    "The patient reports hypertension. Examination was normal.\nShe was discharged home.",
    "Motrin improved the symptoms. He denies fever and cough.",
    "The patient was admitted with diabetes. Daily insulin was given.\nChest CT was normal.",
]


# ---------------------------------------------------------------------------
# Word-vector fixture
# ---------------------------------------------------------------------------


def vector_lines(rng):
    words = [w for w, _ in NOUNS_EN[:8]] + [w for w, _ in VERBS_PAST[:4]]
    lines = []
    for w in words:
        vals = rng.normal(size=4).round(4)
        lines.append(w + " " + " ".join(str(v) for v in vals))
    return lines


def main():
    rng = np.random.default_rng(SEED)
    (DATA / "treebanks").mkdir(parents=True, exist_ok=True)
    (DATA / "ner").mkdir(parents=True, exist_ok=True)
    (DATA / "charlm").mkdir(parents=True, exist_ok=True)
    (DATA / "notes").mkdir(parents=True, exist_ok=True)
    (DATA / "vectors").mkdir(parents=True, exist_ok=True)

    for name, gen, sizes in (
        ("toy_ewt", gen_english, (80, 16, 16)),
        ("toy_bio", gen_bio, (100, 20, 20)),
        ("toy_clinical", gen_clinical, (80, 12, 12)),
    ):
        for split, size in zip(("train", "dev", "test"), sizes):
            tb = build_treebank(gen(rng, size))
            path = DATA / "treebanks" / f"{name}-{split}.conllu"
            path.write_bytes(write_conllu(tb))
            print(f"{path}: {len(tb)} sentences")

    # NER: train ships in BIO to exercise conversion on load; dev/test in BIOES.
    # Dev and test route held-out drug names (covered only by the raw charlm
    # corpus) through the word-identity contexts.
    heldout_ambig = ambiguous_bank(DRUGS_HELDOUT)
    train_rows = ner_sentences(rng, 120, DRUGS_TRAIN, bioes=False)
    dev_rows = ner_sentences(rng, 40, DRUGS_TRAIN + DRUGS_HELDOUT, bioes=True, ambig=heldout_ambig)
    test_rows = ner_sentences(rng, 40, DRUGS_TRAIN + DRUGS_HELDOUT, bioes=True, ambig=heldout_ambig)
    for split, rows in (("train", train_rows), ("dev", dev_rows), ("test", test_rows)):
        path = DATA / "ner" / f"toy_i2b2-{split}.tsv"
        path.write_bytes(write_ner_corpus(rows))
        print(f"{path}: {len(rows)} sentences")

    lines = charlm_lines(rng, 300)
    # Sprinkle mask lines through the raw corpus; training must drop them.
    for i, m in enumerate(MASK_LINES * 3):
        lines.insert((i * 11) % len(lines), m)
    (DATA / "charlm" / "clinical_raw.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"charlm corpus: {len(lines)} lines")

    for i, text in enumerate(NOTE_TEXTS, start=1):
        (DATA / "notes" / f"note{i:02d}.txt").write_text(text + "\n", encoding="utf-8")
    print(f"notes: {len(NOTE_TEXTS)}")

    (DATA / "vectors" / "toy_vectors.txt").write_text(
        "\n".join(vector_lines(rng)) + "\n", encoding="utf-8"
    )
    print("vectors written")


if __name__ == "__main__":
    main()
