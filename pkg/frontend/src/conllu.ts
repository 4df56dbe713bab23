import { Sentence, type Entity, type Word } from "./document.js";

const COLUMNS = 10;

function unsetToNull(field: string): string | null {
  return field === "_" ? null : field;
}

function miscOffset(misc: string, key: string): number {
  for (const part of misc.split("|")) {
    if (part.startsWith(`${key}=`)) {
      const value = Number(part.slice(key.length + 1));
      if (Number.isInteger(value)) return value;
    }
  }
  throw new Error(`misc ${JSON.stringify(misc)} carries no ${key} offset`);
}

/** Parse CoNLL-U text as emitted by `biopipe annotate --format conllu`. */
export function parseConllu(text: string): Sentence[] {
  const sentences: Sentence[] = [];
  let comments: string[] = [];
  let words: Word[] = [];

  const flush = () => {
    if (words.length > 0 || comments.length > 0) {
      sentences.push(new Sentence(words, comments));
    }
    comments = [];
    words = [];
  };

  for (const line of text.split("\n")) {
    if (line === "") {
      flush();
      continue;
    }
    if (line.startsWith("#")) {
      comments.push(line);
      continue;
    }
    const fields = line.split("\t");
    if (fields.length !== COLUMNS) {
      throw new Error(`expected ${COLUMNS} columns, got ${fields.length}: ${line}`);
    }
    const misc = fields[9];
    words.push({
      id: Number(fields[0]),
      text: fields[1],
      lemma: unsetToNull(fields[2]),
      upos: unsetToNull(fields[3]),
      xpos: unsetToNull(fields[4]),
      feats: unsetToNull(fields[5]),
      head: fields[6] === "_" ? null : Number(fields[6]),
      deprel: unsetToNull(fields[7]),
      deps: unsetToNull(fields[8]),
      misc,
      startChar: miscOffset(misc, "start_char"),
      endChar: miscOffset(misc, "end_char"),
    });
  }
  flush();
  return sentences;
}

/** Render sentences back to CoNLL-U, byte-identical to the native writer. */
export function serializeConllu(sentences: Sentence[]): string {
  const lines: string[] = [];
  for (const sent of sentences) {
    lines.push(...sent.comments);
    for (const w of sent.words) {
      lines.push(
        [
          w.id,
          w.text,
          w.lemma ?? "_",
          w.upos ?? "_",
          w.xpos ?? "_",
          w.feats ?? "_",
          w.head ?? "_",
          w.deprel ?? "_",
          w.deps ?? "_",
          w.misc,
        ].join("\t"),
      );
    }
    lines.push("");
  }
  return lines.length > 0 ? lines.join("\n") + "\n" : "";
}

/** Parse `--format entities` output: start, end, type, text per line. */
export function parseEntities(text: string): Entity[] {
  const entities: Entity[] = [];
  for (const line of text.split("\n")) {
    if (line === "") continue;
    const fields = line.split("\t");
    if (fields.length < 4) {
      throw new Error(`malformed entity line: ${line}`);
    }
    entities.push({
      startChar: Number(fields[0]),
      endChar: Number(fields[1]),
      type: fields[2],
      text: fields.slice(3).join("\t"),
    });
  }
  return entities;
}
