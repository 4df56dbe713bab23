import { runCli, type CliOptions } from "./cli.js";
import { parseConllu, parseEntities } from "./conllu.js";
import { Document } from "./document.js";

export interface PipelineOptions extends CliOptions {
  /** Base package name, resolved in the registry. */
  package: string;
  /** Per-slot overrides, e.g. { ner: "toy-i2b2" }. */
  processors?: Record<string, string>;
  /** Accept caller tokenization: annotate takes string[][] instead of text. */
  pretokenized?: boolean;
  /** Registry directory; defaults to the native BIOPIPE_REGISTRY lookup. */
  registry?: string;
}

/** A pipeline bound to the native CLI. All annotation work happens in the
 * native process; this class only encodes inputs and decodes outputs. */
export class BoundPipeline {
  private readonly baseArgs: string[];

  private constructor(readonly options: PipelineOptions) {
    this.baseArgs = ["annotate", "--package", options.package];
    if (options.registry) {
      this.baseArgs.push("--registry", options.registry);
    }
    const overrides = Object.entries(options.processors ?? {});
    if (overrides.length > 0) {
      this.baseArgs.push(
        "--processors",
        overrides.map(([slot, pkg]) => `${slot}=${pkg}`).join(","),
      );
    }
    if (options.pretokenized) {
      this.baseArgs.push("--pretokenized");
    }
  }

  /** Bind and eagerly validate: package resolution and overrides are checked
   * by a probe run, so configuration errors surface here, not at first use. */
  static async bind(options: PipelineOptions): Promise<BoundPipeline> {
    const pipeline = new BoundPipeline(options);
    await pipeline.run("conllu", "");
    return pipeline;
  }

  private run(format: "conllu" | "entities", stdin: string): Promise<string> {
    return runCli([...this.baseArgs, "--format", format], stdin, this.options);
  }

  private encode(input: string | string[][]): string {
    if (!this.options.pretokenized) {
      if (typeof input !== "string") {
        throw new TypeError("pipeline is not pretokenized; pass a string");
      }
      return input;
    }
    if (typeof input === "string") {
      throw new TypeError("pretokenized pipeline takes string[][] sentences");
    }
    // One line per sentence, tokens space-separated: the only shapes that
    // format cannot carry are empty and whitespace-bearing tokens.
    for (const sentence of input) {
      for (const token of sentence) {
        if (token === "" || /\s/.test(token)) {
          throw new TypeError(`token ${JSON.stringify(token)} cannot be encoded`);
        }
      }
    }
    return input.map((tokens) => tokens.join(" ")).join("\n") + "\n";
  }

  /** Annotate raw text (or token lists when pretokenized). The result mirrors
   * the native document: sentences of words plus document-level entities. */
  async annotate(input: string | string[][]): Promise<Document> {
    const stdin = this.encode(input);
    const conllu = await this.run("conllu", stdin);
    const entities = await this.run("entities", stdin);
    return new Document(parseConllu(conllu), parseEntities(entities));
  }
}

export function bindPipeline(options: PipelineOptions): Promise<BoundPipeline> {
  return BoundPipeline.bind(options);
}
