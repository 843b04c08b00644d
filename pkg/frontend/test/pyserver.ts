// Child-process plumbing for the integration suite: helper scripts run
// through the Python interpreter, and the curation API server is the real
// CLI `serve` command on a random local port.
import { type ChildProcess, spawn } from "node:child_process";
import { fileURLToPath } from "node:url";

export const PYTHON = process.env.PYTHON ?? "python3";

export function pyScript(name: string): string {
  return fileURLToPath(new URL(`./py/${name}`, import.meta.url));
}

export function runPy(script: string, args: string[]): Promise<string> {
  return new Promise((resolve, reject) => {
    const proc = spawn(PYTHON, [pyScript(script), ...args], {
      stdio: ["ignore", "pipe", "pipe"],
    });
    let out = "";
    proc.stdout.on("data", (d) => (out += d));
    proc.stderr.on("data", (d) => (out += d));
    proc.on("error", reject);
    proc.on("close", (code) => {
      if (code === 0) resolve(out);
      else reject(new Error(`${script} exited with ${code}:\n${out}`));
    });
  });
}

export interface ServerHandle {
  base: string;
  stop(): Promise<void>;
}

function sleep(ms: number): Promise<void> {
  return new Promise((r) => setTimeout(r, ms));
}

async function waitReady(proc: ChildProcess, base: string, log: () => string): Promise<void> {
  const deadline = Date.now() + 30_000;
  for (;;) {
    if (proc.exitCode !== null) {
      throw new Error(`server exited early (${proc.exitCode}):\n${log()}`);
    }
    try {
      const res = await fetch(`${base}/api/v1/clusters`);
      if (res.ok) return;
    } catch {
      // not listening yet
    }
    if (Date.now() > deadline) {
      proc.kill("SIGKILL");
      throw new Error(`server never became ready:\n${log()}`);
    }
    await sleep(150);
  }
}

/** Start `rolemine serve` on the state dir; resolves once the API answers. */
export async function startServer(stateDir: string, threshold: string): Promise<ServerHandle> {
  let lastError = "";
  // random ports collide occasionally; retry a few times
  for (let attempt = 0; attempt < 5; attempt++) {
    const port = 18000 + Math.floor(Math.random() * 4000);
    const proc = spawn(
      "rolemine",
      ["serve", "--state", stateDir, "--threshold", threshold, "--port", String(port)],
      { stdio: ["ignore", "pipe", "pipe"] },
    );
    let log = "";
    proc.stdout?.on("data", (d) => (log += d));
    proc.stderr?.on("data", (d) => (log += d));
    let exited = false;
    proc.once("exit", () => (exited = true));
    const base = `http://127.0.0.1:${port}`;
    try {
      await waitReady(proc, base, () => log);
    } catch (err) {
      lastError = String(err);
      if (/already bound/.test(lastError)) continue;
      throw err;
    }
    return {
      base,
      stop: () =>
        new Promise<void>((resolve) => {
          if (exited) return resolve();
          proc.once("exit", () => resolve());
          proc.kill("SIGTERM");
          setTimeout(() => proc.kill("SIGKILL"), 5_000).unref();
        }),
    };
  }
  throw new Error(`no free port after 5 attempts; last: ${lastError}`);
}
