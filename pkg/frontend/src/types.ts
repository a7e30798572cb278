/** Shared payload types mirroring the HTTP API contract. */

export type EditKind = "add" | "remove" | "edit";

export interface EditAction {
  kind: EditKind;
  step: number;
  target: string;
  replacement?: string | null;
}

export interface ApiError {
  code: string;
  message: string;
  details?: unknown;
}

export interface InstanceRef {
  name: string;
  object_type: string;
}

export interface Annotation {
  title: string;
  activities: string[];
  objects: InstanceRef[];
}

/** Step 1-2 candidates are labels, step 3 instances, step 4 annotations. */
export type Candidate = string | InstanceRef | Annotation;

export interface TitleSummary {
  events: number;
  distinct_titles: number;
  skipped_empty_titles: number;
  object_title_batch: number;
  enrichment_title_batch: number;
}

export interface GenerateResponse {
  step: number;
  status: string;
  candidates: Candidate[];
  review_sample: Annotation[] | null;
  records: { attempts: number; prompt_tokens: number; completion_tokens: number; model_id: string }[];
  warnings: string[];
}

export interface MetricsRow {
  step: number;
  generated: number;
  kept_as_is: number;
  added: number;
  edited: number;
  removed: number;
  kept_pct: number;
}

export interface ReviewResponse {
  step: number;
  status: string;
  confirmed: Candidate[];
  metrics: MetricsRow[];
}

export interface MetricsResponse {
  rows: MetricsRow[];
  estimated_cost: number | null;
}

export function isInstance(candidate: Candidate): candidate is InstanceRef {
  return typeof candidate === "object" && "object_type" in candidate && !("title" in candidate);
}

export function isAnnotation(candidate: Candidate): candidate is Annotation {
  return typeof candidate === "object" && "title" in candidate;
}
