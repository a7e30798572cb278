/** Wizard state machine.
 *
 * Draft edits accumulate locally and hit the server only on an explicit
 * commit, so stray clicks never mutate server state. Navigation past a
 * step requires the server to have confirmed it, and a busy flag blocks
 * duplicate submissions (one in-flight request per session).
 */

import { ApiClient, ApiRequestError } from "./api.js";
import type {
  Annotation,
  ApiError,
  Candidate,
  EditAction,
  MetricsRow,
  TitleSummary,
} from "./types.js";
import { isInstance } from "./types.js";

export interface StepSlot {
  candidates: Candidate[] | null;
  reviewSample: Annotation[] | null;
  confirmed: boolean;
  confirmedItems: Candidate[];
  drafts: EditAction[];
  warnings: string[];
}

export interface WizardState {
  sessionId: string | null;
  profession: string;
  titleSummary: TitleSummary | null;
  currentStep: number; // 0 = home, 1..4 = reviews, 5 = metrics/export
  busy: boolean;
  lastError: ApiError | null;
  steps: Record<number, StepSlot>;
  metrics: MetricsRow[];
  estimatedCost: number | null;
  lastExportFilename: string | null;
}

function emptySlot(): StepSlot {
  return {
    candidates: null,
    reviewSample: null,
    confirmed: false,
    confirmedItems: [],
    drafts: [],
    warnings: [],
  };
}

function normalizeLabel(text: string): string {
  return text.trim().replace(/\s+/g, " ").toLowerCase();
}

export class WizardStore {
  readonly state: WizardState = {
    sessionId: null,
    profession: "",
    titleSummary: null,
    currentStep: 0,
    busy: false,
    lastError: null,
    steps: { 1: emptySlot(), 2: emptySlot(), 3: emptySlot(), 4: emptySlot() },
    metrics: [],
    estimatedCost: null,
    lastExportFilename: null,
  };

  private listeners: (() => void)[] = [];

  constructor(readonly api: ApiClient) {}

  subscribe(listener: () => void): void {
    this.listeners.push(listener);
  }

  private notify(): void {
    for (const listener of this.listeners) listener();
  }

  private setError(error: unknown): ApiError {
    const apiError: ApiError =
      error instanceof ApiRequestError
        ? { code: error.code, message: error.message, details: error.details }
        : { code: "internal", message: String(error) };
    this.state.lastError = apiError;
    this.notify();
    return apiError;
  }

  clearError(): void {
    this.state.lastError = null;
    this.notify();
  }

  get confirmedPrefix(): number {
    let prefix = 0;
    for (let step = 1; step <= 4; step += 1) {
      if (!this.state.steps[step].confirmed) break;
      prefix = step;
    }
    return prefix;
  }

  /** Forward navigation requires every earlier step to be confirmed. */
  canNavigateTo(screen: number): boolean {
    if (screen <= 0) return true;
    if (!this.state.sessionId) return false;
    if (screen <= 4) return screen <= this.confirmedPrefix + 1;
    return this.confirmedPrefix >= 1; // metrics screen needs one confirmed step
  }

  navigateTo(screen: number): boolean {
    if (!this.canNavigateTo(screen)) return false;
    this.state.currentStep = screen;
    this.state.lastError = null;
    this.notify();
    return true;
  }

  private async withBusy<T>(work: () => Promise<T>): Promise<T> {
    if (this.state.busy) {
      throw new ApiRequestError(409, { code: "busy", message: "a request is already in flight" });
    }
    this.state.busy = true;
    this.state.lastError = null;
    this.notify();
    try {
      return await work();
    } finally {
      this.state.busy = false;
      this.notify();
    }
  }

  async createSession(profession: string, file: Blob, apiKey?: string): Promise<void> {
    try {
      await this.withBusy(async () => {
        this.api.setApiKey(apiKey ?? null); // memory only, never persisted
        const result = await this.api.createSession(profession, file);
        this.state.sessionId = result.id;
        this.state.profession = profession;
        this.state.titleSummary = result.title_summary;
        this.state.currentStep = 1;
      });
    } catch (error) {
      this.setError(error);
      throw error;
    }
  }

  /** Regeneration discards uncommitted drafts for the step. */
  async generate(step: number): Promise<void> {
    try {
      await this.withBusy(async () => {
        const response = await this.api.generate(this.requireSession(), step);
        const slot = this.state.steps[step];
        slot.candidates = response.candidates;
        slot.reviewSample = response.review_sample;
        slot.drafts = [];
        slot.warnings = response.warnings;
        slot.confirmed = false;
        for (let later = step + 1; later <= 4; later += 1) {
          this.state.steps[later].confirmed = false;
        }
      });
    } catch (error) {
      this.setError(error);
      throw error;
    }
  }

  /** Queue a draft action; duplicate adds are rejected locally without a
   * request, surfacing an inline duplicate_add error. */
  addDraft(step: number, action: EditAction): boolean {
    const slot = this.state.steps[step];
    if (action.kind === "add" && step <= 2) {
      const existing = new Set<string>();
      for (const candidate of slot.candidates ?? []) {
        if (typeof candidate === "string") existing.add(normalizeLabel(candidate));
      }
      for (const draft of slot.drafts) {
        if (draft.kind === "add") existing.add(normalizeLabel(draft.target));
        if (draft.kind === "remove") existing.delete(normalizeLabel(draft.target));
      }
      if (existing.has(normalizeLabel(action.target))) {
        this.state.lastError = {
          code: "duplicate_add",
          message: `"${action.target}" is already in the list`,
        };
        this.notify();
        return false;
      }
    }
    slot.drafts.push(action);
    this.state.lastError = null;
    this.notify();
    return true;
  }

  removeDraft(step: number, predicate: (action: EditAction) => boolean): void {
    const slot = this.state.steps[step];
    slot.drafts = slot.drafts.filter((draft) => !predicate(draft));
    this.notify();
  }

  /** Row editors funnel through here: one edit draft per target, updated
   * in place so the submission order follows first touch. */
  upsertEditDraft(step: number, target: string, replacement: string): void {
    const slot = this.state.steps[step];
    const existing = slot.drafts.find(
      (draft) => draft.kind === "edit" && draft.target === target,
    );
    if (existing) {
      existing.replacement = replacement;
    } else {
      slot.drafts.push({ kind: "edit", step, target, replacement });
    }
    this.notify();
  }

  async commitReview(step: number): Promise<void> {
    try {
      await this.withBusy(async () => {
        const slot = this.state.steps[step];
        const response = await this.api.review(this.requireSession(), step, slot.drafts);
        slot.confirmed = true;
        slot.confirmedItems = response.confirmed;
        slot.drafts = [];
        this.state.metrics = response.metrics;
        this.state.currentStep = step < 4 ? step + 1 : 5;
      });
    } catch (error) {
      this.setError(error);
      throw error;
    }
  }

  async loadMetrics(): Promise<void> {
    try {
      await this.withBusy(async () => {
        const response = await this.api.metrics(this.requireSession());
        this.state.metrics = response.rows;
        this.state.estimatedCost = response.estimated_cost;
      });
    } catch (error) {
      this.setError(error);
      throw error;
    }
  }

  async exportOcel(): Promise<{ filename: string; data: Uint8Array }> {
    try {
      return await this.withBusy(async () => {
        const result = await this.api.exportOcel(this.requireSession());
        this.state.lastExportFilename = result.filename;
        return result;
      });
    } catch (error) {
      this.setError(error);
      throw error;
    }
  }

  /** Server-confirmed labels of a step (type dropdown, chip choices). */
  confirmedLabels(step: number): string[] {
    return this.state.steps[step].confirmedItems.filter(
      (item): item is string => typeof item === "string",
    );
  }

  confirmedObjects(): { name: string; object_type: string }[] {
    return this.state.steps[3].confirmedItems.filter(isInstance);
  }

  instanceCandidates(step: number): { name: string; object_type: string }[] {
    const slot = this.state.steps[step];
    return (slot.candidates ?? []).filter(isInstance);
  }

  private requireSession(): string {
    if (!this.state.sessionId) throw new ApiRequestError(409, {
      code: "step_order_violation",
      message: "no session yet",
    });
    return this.state.sessionId;
  }
}
