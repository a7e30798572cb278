/** Test doubles and DOM helpers. */

import { vi } from "vitest";
import { ApiClient } from "../src/api.js";
import { WizardStore } from "../src/state.js";
import type { Annotation, Candidate, MetricsRow } from "../src/types.js";

export interface MockApi extends ApiClient {
  createSession: ReturnType<typeof vi.fn>;
  generate: ReturnType<typeof vi.fn>;
  review: ReturnType<typeof vi.fn>;
  metrics: ReturnType<typeof vi.fn>;
  exportOcel: ReturnType<typeof vi.fn>;
  setApiKey: ReturnType<typeof vi.fn>;
}

export function mockApi(): MockApi {
  const api = new ApiClient("http://mock") as MockApi;
  api.createSession = vi.fn(async () => ({
    id: "s1",
    title_summary: {
      events: 10,
      distinct_titles: 3,
      skipped_empty_titles: 0,
      object_title_batch: 3,
      enrichment_title_batch: 3,
    },
  }));
  api.generate = vi.fn(async (_id: string, step: number) => ({
    step,
    status: "generated",
    candidates: [] as Candidate[],
    review_sample: null,
    records: [],
    warnings: [],
  }));
  api.review = vi.fn(async (_id: string, step: number) => ({
    step,
    status: "confirmed",
    confirmed: [] as Candidate[],
    metrics: [] as MetricsRow[],
  }));
  api.metrics = vi.fn(async () => ({ rows: [], estimated_cost: null }));
  api.exportOcel = vi.fn(async () => ({ filename: "ocel-s1.json", data: new Uint8Array() }));
  api.setApiKey = vi.fn();
  return api;
}

export async function storeWithCandidates(
  step: number,
  candidates: Candidate[],
  reviewSample: Annotation[] | null = null,
): Promise<{ store: WizardStore; api: MockApi }> {
  const api = mockApi();
  const store = new WizardStore(api);
  await store.createSession("Academic staff", new Blob(["x"]));
  for (let earlier = 1; earlier < step; earlier += 1) {
    store.state.steps[earlier].confirmed = true;
  }
  store.state.currentStep = step;
  store.state.steps[step].candidates = candidates;
  store.state.steps[step].reviewSample = reviewSample;
  return { store, api };
}

export function click(root: HTMLElement, selector: string): void {
  const node = root.querySelector(selector) as HTMLElement | null;
  if (!node) throw new Error(`no element for selector: ${selector}`);
  node.click();
}

export function setValue(root: HTMLElement, selector: string, value: string): void {
  const node = root.querySelector(selector) as HTMLInputElement | HTMLSelectElement | null;
  if (!node) throw new Error(`no element for selector: ${selector}`);
  node.value = value;
  node.dispatchEvent(new Event("change", { bubbles: true }));
}
