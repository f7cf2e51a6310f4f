/**
 * Process transport: every binding call shells out to the engine CLI with a
 * throwaway scratch directory for the image and table files.
 *
 * The command defaults to `python3 -m ragfilter` and can be overridden with
 * the RAGFILTER_CLI environment variable (whitespace-separated argv prefix).
 */
import { execFile } from "node:child_process";
import { mkdtemp, readFile, rm, writeFile } from "node:fs/promises";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { promisify } from "node:util";

const execFileAsync = promisify(execFile);

function engineCommand(): string[] {
  const override = process.env["RAGFILTER_CLI"];
  if (override && override.trim().length > 0) return override.trim().split(/\s+/);
  return ["python3", "-m", "ragfilter"];
}

export class EngineError extends Error {
  constructor(
    message: string,
    public readonly exitCode: number,
  ) {
    super(message);
    this.name = "EngineError";
  }
}

export interface RunResult {
  stdout: string;
  stderr: string;
}

/** Run one engine subcommand; throws EngineError with the engine's message. */
export async function runEngine(args: string[]): Promise<RunResult> {
  const [cmd, ...prefix] = engineCommand();
  try {
    const { stdout, stderr } = await execFileAsync(cmd!, [...prefix, ...args], {
      maxBuffer: 64 * 1024 * 1024,
    });
    return { stdout, stderr };
  } catch (err) {
    const e = err as { code?: number; stderr?: string; message?: string };
    const detail = (e.stderr ?? "").trim() || e.message || "engine call failed";
    throw new EngineError(detail, typeof e.code === "number" ? e.code : -1);
  }
}

/** Scratch directory holding the files of a single engine call. */
export async function withScratchDir<T>(fn: (dir: string) => Promise<T>): Promise<T> {
  const dir = await mkdtemp(join(tmpdir(), "ragfilter-"));
  try {
    return await fn(dir);
  } finally {
    await rm(dir, { recursive: true, force: true });
  }
}

export async function writeBytes(path: string, bytes: Uint8Array): Promise<void> {
  await writeFile(path, bytes);
}

export async function readBytes(path: string): Promise<Uint8Array> {
  return new Uint8Array(await readFile(path));
}

export async function readText(path: string): Promise<string> {
  return readFile(path, "ascii");
}
