import { spawn } from "node:child_process";

/** A non-zero exit from the native CLI, carrying its stderr verbatim. */
export class CliError extends Error {
  readonly exitCode: number;
  readonly stderr: string;

  constructor(args: string[], exitCode: number, stderr: string) {
    super(`biopipe ${args.join(" ")} exited with ${exitCode}: ${stderr.trim()}`);
    this.name = "CliError";
    this.exitCode = exitCode;
    this.stderr = stderr;
  }
}

export interface CliOptions {
  /** Executable to run; defaults to BIOPIPE_BIN or "biopipe" on PATH. */
  bin?: string;
}

/** Run one CLI invocation with `stdin` piped in; resolves to stdout. */
export function runCli(
  args: string[],
  stdin = "",
  options: CliOptions = {},
): Promise<string> {
  const bin = options.bin ?? process.env.BIOPIPE_BIN ?? "biopipe";
  return new Promise((resolve, reject) => {
    const child = spawn(bin, args, { stdio: ["pipe", "pipe", "pipe"] });
    let stdout = "";
    let stderr = "";
    child.stdout.setEncoding("utf8");
    child.stderr.setEncoding("utf8");
    child.stdout.on("data", (chunk: string) => (stdout += chunk));
    child.stderr.on("data", (chunk: string) => (stderr += chunk));
    child.on("error", reject);
    child.on("close", (code) => {
      if (code === 0) {
        resolve(stdout);
      } else {
        reject(new CliError(args, code ?? -1, stderr));
      }
    });
    child.stdin.end(stdin, "utf8");
  });
}
