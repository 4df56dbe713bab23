import path from "node:path";
import { fileURLToPath } from "node:url";

const HERE = path.dirname(fileURLToPath(import.meta.url));

/** Repo-local model registry every test binds against. */
export const REGISTRY = path.resolve(HERE, "../../data/registry");

export const FIXTURES = path.join(HERE, "fixtures", "fixtures.json");
