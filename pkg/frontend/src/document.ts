/** One annotated token. Unset columns ("_") are null; offsets are Unicode
 * scalar indices into the raw text, half-open. */
export interface Word {
  id: number;
  text: string;
  lemma: string | null;
  upos: string | null;
  xpos: string | null;
  feats: string | null;
  head: number | null;
  deprel: string | null;
  deps: string | null;
  misc: string;
  startChar: number;
  endChar: number;
}

/** A typed mention with character offsets into the raw text. */
export interface Entity {
  startChar: number;
  endChar: number;
  type: string;
  text: string;
}

export class Sentence {
  constructor(
    readonly words: Word[],
    readonly comments: string[] = [],
  ) {}

  get tokens(): string[] {
    return this.words.map((w) => w.text);
  }

  /** One line per word: id, form, head, deprel (tab separated). */
  dependenciesText(): string {
    return this.words
      .map((w) => `${w.id}\t${w.text}\t${w.head ?? "_"}\t${w.deprel ?? "_"}`)
      .join("\n");
  }

  printDependencies(): void {
    console.log(this.dependenciesText());
  }
}

export class Document {
  constructor(
    readonly sentences: Sentence[],
    readonly entities: Entity[] = [],
  ) {}

  get numTokens(): number {
    return this.sentences.reduce((n, s) => n + s.words.length, 0);
  }

  /** "text<TAB>type" per entity, the shape used for quick inspection. */
  entityLines(): string[] {
    return this.entities.map((e) => `${e.text}\t${e.type}`);
  }
}
