export { runCli, CliError, type CliOptions } from "./cli.js";
export { parseConllu, serializeConllu, parseEntities } from "./conllu.js";
export { Document, Sentence, type Word, type Entity } from "./document.js";
export { BoundPipeline, bindPipeline, type PipelineOptions } from "./pipeline.js";
