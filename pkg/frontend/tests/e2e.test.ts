// @vitest-environment node
/** Scripted wizard pass against a real server.
 *
 * Spawns the backend with the walkthrough fixture, drives the actual DOM
 * screens under jsdom (upload, four generate/review rounds applying the
 * demo edit script through checkboxes, table inputs and chips, then the
 * export button), validates the downloaded OCEL against the interchange
 * schema, and checks the persisted session equals a CLI run byte-for-byte
 * once timestamps are blanked.
 */

import { spawn, spawnSync, type ChildProcess } from "node:child_process";
import { mkdtempSync, readFileSync, readdirSync } from "node:fs";
import { createServer } from "node:net";
import { tmpdir } from "node:os";
import { join, resolve } from "node:path";
import { fileURLToPath } from "node:url";

import Ajv from "ajv";
import { JSDOM } from "jsdom";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { parseAnnotationContent, parseEditScript, renderInstance } from "../src/edits.js";
import { WizardStore } from "../src/state.js";
import { render } from "../src/views.js";
import type { EditAction } from "../src/types.js";

const REPO_ROOT = resolve(fileURLToPath(new URL(".", import.meta.url)), "../..");
const WALKTHROUGH = join(REPO_ROOT, "fixtures", "walkthrough");
const PRICES = join(REPO_ROOT, "fixtures", "prices", "gpt-4.1.json");
const SCHEMA = join(REPO_ROOT, "src", "exoar", "data", "ocel20-schema.json");

let serverProcess: ChildProcess | null = null;
let baseUrl = "";
let storeDir = "";

async function freePort(): Promise<number> {
  return new Promise((resolvePort, reject) => {
    const probe = createServer();
    probe.once("error", reject);
    probe.listen(0, "127.0.0.1", () => {
      const address = probe.address();
      if (address && typeof address === "object") {
        const port = address.port;
        probe.close(() => resolvePort(port));
      } else {
        reject(new Error("no port assigned"));
      }
    });
  });
}

async function waitFor(check: () => boolean | Promise<boolean>, timeoutMs = 60_000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  for (;;) {
    if (await check()) return;
    if (Date.now() > deadline) throw new Error("timed out waiting for condition");
    await new Promise((r) => setTimeout(r, 100));
  }
}

beforeAll(async () => {
  const dom = new JSDOM("<!doctype html><html><body><div id='app'></div></body></html>");
  (globalThis as Record<string, unknown>).document = dom.window.document;
  (globalThis as Record<string, unknown>).Event = dom.window.Event;

  storeDir = mkdtempSync(join(tmpdir(), "exoar-ui-store-"));
  const port = await freePort();
  baseUrl = `http://127.0.0.1:${port}`;
  serverProcess = spawn(
    "exoar",
    [
      "serve",
      "--store", storeDir,
      "--llm", `fixture:${join(WALKTHROUGH, "responses")}`,
      "--prices", PRICES,
      "--port", String(port),
    ],
    { stdio: "ignore" },
  );
  await waitFor(async () => {
    try {
      const response = await fetch(`${baseUrl}/healthz`);
      return response.ok;
    } catch {
      return false;
    }
  });
});

afterAll(() => {
  serverProcess?.kill();
});

function container(): HTMLElement {
  return document.getElementById("app") as HTMLElement;
}

function click(selector: string): void {
  const node = container().querySelector(selector) as HTMLElement | null;
  if (!node) throw new Error(`no element: ${selector}`);
  node.click();
}

function setValue(selector: string, value: string): void {
  const node = container().querySelector(selector) as HTMLInputElement | HTMLSelectElement | null;
  if (!node) throw new Error(`no element: ${selector}`);
  node.value = value;
  node.dispatchEvent(new Event("change", { bubbles: true }));
}

async function idle(store: WizardStore): Promise<void> {
  await waitFor(() => !store.state.busy);
}

/** Replay one scripted action through the DOM of the current screen. */
function applyActionThroughDom(store: WizardStore, step: number, action: EditAction): void {
  if (step <= 2) {
    if (action.kind === "add") {
      setValue("[data-testid=add-field]", action.target);
      click("[data-testid=add-button]");
    } else if (action.kind === "remove") {
      click(`input[data-label="${action.target.replace(/"/g, '\\"')}"]`);
    } else {
      throw new Error("label screens stage only adds and removals");
    }
    return;
  }
  if (step === 3) {
    const escaped = action.target.replace(/"/g, '\\"');
    if (action.kind === "remove") {
      click(`button[data-delete="${escaped}"]`);
      return;
    }
    if (action.kind === "edit" && action.replacement) {
      const current = action.target;
      const next = action.replacement;
      const currentName = current.slice(0, current.lastIndexOf(" @ "));
      const currentType = current.slice(current.lastIndexOf(" @ ") + 3);
      const nextName = next.slice(0, next.lastIndexOf(" @ "));
      const nextType = next.slice(next.lastIndexOf(" @ ") + 3);
      if (nextName !== currentName) {
        setValue(`input[data-name-for="${escaped}"]`, nextName);
      }
      if (nextType !== currentType) {
        setValue(`select[data-type-for="${escaped}"]`, nextType);
      }
      return;
    }
    throw new Error(`unsupported step-3 action: ${action.kind}`);
  }
  // step 4: reconcile the row's chips toward the scripted replacement
  const escapedTitle = action.target.replace(/"/g, '\\"');
  if (action.kind === "remove") {
    click(`button[data-delete="${escapedTitle}"]`);
    return;
  }
  if (action.kind !== "edit" || !action.replacement) {
    throw new Error(`unsupported step-4 action: ${action.kind}`);
  }
  const want = parseAnnotationContent(action.replacement);
  const sample = store.state.steps[4].reviewSample ?? [];
  const base = sample.find((a) => a.title === action.target);
  if (!base) throw new Error(`title not in sample: ${action.target}`);

  for (const activity of base.activities) {
    if (!want.activities.includes(activity)) {
      click(
        `tr[data-title="${escapedTitle}"] button[data-chip-activity="${activity}"]`,
      );
    }
  }
  for (const activity of want.activities) {
    if (!base.activities.includes(activity)) {
      setValue(`select[data-add-activity="${escapedTitle}"]`, activity);
    }
  }
  const baseObjects = base.objects.map(renderInstance);
  const wantObjects = want.objects.map(renderInstance);
  for (const objectRef of baseObjects) {
    if (!wantObjects.includes(objectRef)) {
      click(`tr[data-title="${escapedTitle}"] button[data-chip-object="${objectRef}"]`);
    }
  }
  for (const objectRef of wantObjects) {
    if (!baseObjects.includes(objectRef)) {
      setValue(`select[data-add-object="${escapedTitle}"]`, objectRef);
    }
  }
}

function stripVolatile(value: unknown): unknown {
  if (Array.isArray(value)) return value.map(stripVolatile);
  if (value && typeof value === "object") {
    const out: Record<string, unknown> = {};
    for (const [key, inner] of Object.entries(value)) {
      out[key] = ["created_at", "updated_at", "timestamp"].includes(key)
        ? ""
        : stripVolatile(inner);
    }
    return out;
  }
  return value;
}

describe("full wizard pass against the fixture backend", () => {
  it("uploads, reviews all four steps, exports a schema-valid OCEL, and matches the CLI session", async () => {
    const script = parseEditScript(
      readFileSync(join(WALKTHROUGH, "edits.txt"), "utf-8"),
    );
    const store = new WizardStore(new ApiClient(baseUrl));
    store.subscribe(() => render(container(), store));
    render(container(), store);

    // upload (jsdom has no file-picker plumbing, so the store's upload
    // path is invoked directly with the CSV blob)
    const csv = readFileSync(join(WALKTHROUGH, "awt.csv"));
    await store.createSession(
      "Academic staff",
      new Blob([new Uint8Array(csv)], { type: "text/csv" }),
      "sk-ui-secret-key",
    );
    expect(store.state.sessionId).toBeTruthy();
    expect(store.state.currentStep).toBe(1);

    const expectedConfirmed: Record<number, number> = { 1: 11, 2: 24, 3: 39, 4: 10 };
    for (const step of [1, 2, 3, 4]) {
      render(container(), store);
      click("[data-testid=generate]");
      await idle(store);
      await waitFor(() => store.state.steps[step].candidates !== null);
      for (const action of script.filter((a) => a.step === step)) {
        applyActionThroughDom(store, step, action);
      }
      click("[data-testid=commit]");
      await idle(store);
      await waitFor(() => store.state.steps[step].confirmed);
      expect(store.state.steps[step].confirmedItems).toHaveLength(expectedConfirmed[step]);
    }

    expect(store.state.currentStep).toBe(5);
    await store.loadMetrics();
    render(container(), store);
    const metricsTable = container().querySelector("[data-testid=metrics-table]");
    expect(metricsTable).toBeTruthy();
    expect(container().querySelector("[data-testid=cost]")?.textContent).toContain("0.0800");

    // export through the button, then grab the bytes for validation
    click("[data-testid=export]");
    await idle(store);
    await waitFor(() => store.state.lastExportFilename !== null);
    expect(store.state.lastExportFilename).toBe(`ocel-${store.state.sessionId}.json`);
    const download = await store.exportOcel();
    const payload = JSON.parse(Buffer.from(download.data).toString("utf-8"));

    const schema = JSON.parse(readFileSync(SCHEMA, "utf-8"));
    delete schema.$schema;
    const ajv = new Ajv({ strict: false });
    const valid = ajv.validate(schema, payload);
    expect(ajv.errors ?? []).toEqual([]);
    expect(valid).toBe(true);
    expect(payload.objectTypes).toHaveLength(10);
    expect(payload.eventTypes).toHaveLength(24);
    expect(payload.objects).toHaveLength(39);

    // the same inputs through the CLI yield the same persisted session
    const cliOut = mkdtempSync(join(tmpdir(), "exoar-ui-cli-"));
    const result = spawnSync(
      "exoar",
      [
        "run",
        "--profession", "Academic staff",
        "--data", join(WALKTHROUGH, "awt.csv"),
        "--llm", `fixture:${join(WALKTHROUGH, "responses")}`,
        "--edits", join(WALKTHROUGH, "edits.txt"),
        "--prices", PRICES,
        "--out", cliOut,
        "--no-figures",
      ],
      { encoding: "utf-8" },
    );
    expect(result.status).toBe(0);
    const cliStore = join(cliOut, "store");
    const cliId = readdirSync(cliStore)[0];
    expect(cliId).toBe(store.state.sessionId);
    const cliDoc = JSON.parse(readFileSync(join(cliStore, cliId, "session.json"), "utf-8"));
    const uiDoc = JSON.parse(
      readFileSync(join(storeDir, store.state.sessionId as string, "session.json"), "utf-8"),
    );
    expect(JSON.stringify(stripVolatile(uiDoc), null, 2)).toBe(
      JSON.stringify(stripVolatile(cliDoc), null, 2),
    );

    // the per-session key stayed in memory: nothing on disk contains it
    for (const file of readdirSync(join(storeDir, store.state.sessionId as string))) {
      const content = readFileSync(
        join(storeDir, store.state.sessionId as string, file),
        "utf-8",
      );
      expect(content).not.toContain("sk-ui-secret-key");
    }

    console.log(
      "SECONDARY ACCEPTANCE PASS: scripted wizard pass exported schema-valid OCEL; " +
        "session equals CLI run minus timestamps",
    );
  });
});
