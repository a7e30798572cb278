/** Wizard store: navigation gating, drafts, busy handling. */

import { describe, expect, it } from "vitest";
import { WizardStore } from "../src/state.js";
import { mockApi } from "./helpers.js";

describe("navigation", () => {
  it("requires a session before any step", () => {
    const store = new WizardStore(mockApi());
    expect(store.canNavigateTo(1)).toBe(false);
    expect(store.canNavigateTo(0)).toBe(true);
  });

  it("blocks forward navigation past unconfirmed steps", async () => {
    const store = new WizardStore(mockApi());
    await store.createSession("Academic staff", new Blob(["x"]));
    expect(store.state.currentStep).toBe(1);
    expect(store.canNavigateTo(1)).toBe(true);
    expect(store.canNavigateTo(2)).toBe(false);
    expect(store.navigateTo(3)).toBe(false);
    store.state.steps[1].confirmed = true;
    expect(store.canNavigateTo(2)).toBe(true);
    expect(store.canNavigateTo(3)).toBe(false);
    expect(store.canNavigateTo(5)).toBe(true); // metrics once anything confirmed
  });
});

describe("drafts", () => {
  it("rejects duplicate adds locally without a request", async () => {
    const api = mockApi();
    const store = new WizardStore(api);
    await store.createSession("Academic staff", new Blob(["x"]));
    store.state.steps[1].candidates = ["students", "courses"];
    const ok = store.addDraft(1, { kind: "add", step: 1, target: "Students" });
    expect(ok).toBe(false);
    expect(store.state.lastError?.code).toBe("duplicate_add");
    expect(store.state.steps[1].drafts).toHaveLength(0);
    expect(api.review).not.toHaveBeenCalled();
  });

  it("allows re-adding a label staged for removal", async () => {
    const store = new WizardStore(mockApi());
    await store.createSession("Academic staff", new Blob(["x"]));
    store.state.steps[1].candidates = ["students"];
    store.addDraft(1, { kind: "remove", step: 1, target: "students" });
    expect(store.addDraft(1, { kind: "add", step: 1, target: "students" })).toBe(true);
  });

  it("discards drafts on regeneration", async () => {
    const api = mockApi();
    api.generate.mockResolvedValue({
      step: 1,
      status: "generated",
      candidates: ["fresh"],
      review_sample: null,
      records: [],
      warnings: [],
    });
    const store = new WizardStore(api);
    await store.createSession("Academic staff", new Blob(["x"]));
    store.state.steps[1].candidates = ["students"];
    store.addDraft(1, { kind: "add", step: 1, target: "conferences" });
    await store.generate(1);
    expect(store.state.steps[1].drafts).toHaveLength(0);
    expect(store.state.steps[1].candidates).toEqual(["fresh"]);
  });

  it("upserts row edits in place, keeping first-touch order", async () => {
    const store = new WizardStore(mockApi());
    await store.createSession("Academic staff", new Blob(["x"]));
    store.upsertEditDraft(3, "A @ t", "A1 @ t");
    store.upsertEditDraft(3, "B @ t", "B1 @ t");
    store.upsertEditDraft(3, "A @ t", "A2 @ t");
    expect(store.state.steps[3].drafts.map((d) => [d.target, d.replacement])).toEqual([
      ["A @ t", "A2 @ t"],
      ["B @ t", "B1 @ t"],
    ]);
  });
});

describe("busy flag", () => {
  it("blocks a second request while one is in flight", async () => {
    const api = mockApi();
    let release: () => void = () => undefined;
    api.review.mockImplementation(
      () =>
        new Promise((resolve) => {
          release = () =>
            resolve({ step: 1, status: "confirmed", confirmed: [], metrics: [] });
        }),
    );
    const store = new WizardStore(api);
    await store.createSession("Academic staff", new Blob(["x"]));
    store.state.steps[1].candidates = [];
    const first = store.commitReview(1);
    await expect(store.commitReview(1)).rejects.toMatchObject({ code: "busy" });
    release();
    await first;
    expect(api.review).toHaveBeenCalledTimes(1);
  });
});

describe("commit", () => {
  it("stores confirmed items and advances the wizard", async () => {
    const api = mockApi();
    api.review.mockResolvedValue({
      step: 1,
      status: "confirmed",
      confirmed: ["students", "conferences"],
      metrics: [
        { step: 1, generated: 2, kept_as_is: 1, added: 1, edited: 0, removed: 1, kept_pct: 50 },
      ],
    });
    const store = new WizardStore(api);
    await store.createSession("Academic staff", new Blob(["x"]));
    store.state.steps[1].candidates = ["students", "classes"];
    store.addDraft(1, { kind: "remove", step: 1, target: "classes" });
    store.addDraft(1, { kind: "add", step: 1, target: "conferences" });
    await store.commitReview(1);
    expect(api.review).toHaveBeenCalledWith("s1", 1, [
      { kind: "remove", step: 1, target: "classes" },
      { kind: "add", step: 1, target: "conferences" },
    ]);
    expect(store.state.steps[1].confirmed).toBe(true);
    expect(store.confirmedLabels(1)).toEqual(["students", "conferences"]);
    expect(store.state.currentStep).toBe(2);
  });

  it("surfaces server error codes", async () => {
    const api = mockApi();
    const { ApiRequestError } = await import("../src/api.js");
    api.review.mockRejectedValue(
      new ApiRequestError(409, { code: "step_order_violation", message: "nope" }),
    );
    const store = new WizardStore(api);
    await store.createSession("Academic staff", new Blob(["x"]));
    store.state.steps[1].candidates = [];
    await expect(store.commitReview(1)).rejects.toThrow();
    expect(store.state.lastError?.code).toBe("step_order_violation");
  });
});
