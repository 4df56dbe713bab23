import { describe, expect, it } from "vitest";
import { bindPipeline } from "../src/index.js";
import { REGISTRY } from "./support.js";

// The three canonical usage patterns, run against the bundled toy packages.
describe("canonical usage", () => {
  it(
    "annotates biomedical text and prints a dependency parse",
    async () => {
      const nlp = await bindPipeline({ package: "toy-craft", registry: REGISTRY });
      const doc = await nlp.annotate(
        "Down-regulation of enzymes inhibits protein genes.",
      );

      expect(doc.sentences).toHaveLength(1);
      const sentence = doc.sentences[0];
      // Hyphenated compounds split into three tokens, as in the treebanks.
      expect(sentence.tokens).toEqual([
        "Down",
        "-",
        "regulation",
        "of",
        "enzymes",
        "inhibits",
        "protein",
        "genes",
        ".",
      ]);

      sentence.printDependencies();
      const lines = sentence.dependenciesText().split("\n");
      expect(lines).toHaveLength(sentence.words.length);
      lines.forEach((line, i) => {
        const fields = line.split("\t");
        expect(fields).toHaveLength(4);
        expect(fields[0]).toBe(String(i + 1));
        expect(fields[1]).toBe(sentence.words[i].text);
      });
      // Exactly one word hangs off the virtual root.
      const roots = sentence.words.filter((w) => w.head === 0);
      expect(roots).toHaveLength(1);
      expect(roots[0].deprel).toBe("root");
    },
    30_000,
  );

  it(
    "runs clinical NER with a swapped-in recognizer",
    async () => {
      const nlp = await bindPipeline({
        package: "toy-mimic",
        processors: { ner: "toy-i2b2" },
        registry: REGISTRY,
      });
      const doc = await nlp.annotate(
        "The patient had a sore throat and was treated with Cepacol lozenges.",
      );

      for (const ent of doc.entities) {
        console.log(`${ent.text}\t${ent.type}`);
      }
      expect(doc.entityLines()).toEqual([
        "sore throat\tproblem",
        "Cepacol lozenges\ttreatment",
      ]);
      expect(doc.entities.map((e) => [e.startChar, e.endChar])).toEqual([
        [18, 29],
        [51, 67],
      ]);
    },
    30_000,
  );

  it(
    "accepts caller tokenization and keeps it verbatim",
    async () => {
      const tokens = [
        ["Blood", "pressure", "was", "elevated", "."],
        ["He", "denies", "nausea", "and", "cough", "."],
      ];
      const nlp = await bindPipeline({
        package: "toy-mimic",
        pretokenized: true,
        registry: REGISTRY,
      });
      const doc = await nlp.annotate(tokens);

      expect(doc.sentences.map((s) => s.tokens)).toEqual(tokens);
      expect(doc.numTokens).toBe(11);
      for (const word of doc.sentences.flatMap((s) => s.words)) {
        expect(word.upos).not.toBeNull();
        expect(word.head).not.toBeNull();
      }
    },
    30_000,
  );
});
