/** DOM renderers for the wizard screens.
 *
 * Steps 1-2 show a checkbox list (all pre-selected; deselection stages a
 * removal) plus a free-text add field. Step 3 is an editable two-column
 * table with a type dropdown limited to confirmed types. Step 4 shows
 * the verified sample with chip editors for activities and objects.
 * Nothing mutates server state until the commit button posts the drafts.
 */

import {
  annotationFromCandidate,
  parseAnnotationContent,
  parseInstance,
  renderAnnotationContent,
  renderInstance,
} from "./edits.js";
import type { WizardStore } from "./state.js";
import type { Annotation, InstanceRef } from "./types.js";
import { isAnnotation, isInstance } from "./types.js";

const STEP_TITLES: Record<number, string> = {
  1: "Step 1 - Object types",
  2: "Step 2 - Activities",
  3: "Step 3 - Objects",
  4: "Step 4 - Event sample",
};

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  if (text !== undefined) node.textContent = text;
  return node;
}

function normalizeLabel(text: string): string {
  return text.trim().replace(/\s+/g, " ").toLowerCase();
}

export function render(container: HTMLElement, store: WizardStore): void {
  container.textContent = "";
  container.appendChild(renderNav(store));
  const error = store.state.lastError;
  if (error) {
    const box = el("div", { class: "error", "data-testid": "error-box" });
    box.appendChild(el("strong", { "data-testid": "error-code" }, error.code));
    box.appendChild(el("span", {}, ` ${error.message}`));
    container.appendChild(box);
  }
  const screen = store.state.currentStep;
  if (screen === 0) container.appendChild(renderHome(store));
  else if (screen <= 2) container.appendChild(renderLabelReview(store, screen));
  else if (screen === 3) container.appendChild(renderInstanceReview(store));
  else if (screen === 4) container.appendChild(renderSampleReview(store));
  else container.appendChild(renderMetricsExport(store));
}

function renderNav(store: WizardStore): HTMLElement {
  const nav = el("nav", { class: "steps" });
  const names = ["Home", "1 Types", "2 Activities", "3 Objects", "4 Events", "Results"];
  names.forEach((name, screen) => {
    const button = el("button", { "data-nav": String(screen) }, name);
    button.disabled = !store.canNavigateTo(screen) || store.state.busy;
    if (screen === store.state.currentStep) button.classList.add("active");
    button.addEventListener("click", () => store.navigateTo(screen));
    nav.appendChild(button);
  });
  if (store.state.busy) nav.appendChild(el("span", { class: "busy" }, "working..."));
  return nav;
}

function renderHome(store: WizardStore): HTMLElement {
  const section = el("section", { class: "home" });
  section.appendChild(el("h1", {}, "Start a session"));
  const profession = el("input", {
    type: "text",
    placeholder: "Profession, e.g. Academic staff",
    "data-testid": "profession",
  });
  const apiKey = el("input", {
    type: "password",
    placeholder: "API key (kept in memory only)",
    "data-testid": "api-key",
  });
  const file = el("input", { type: "file", accept: ".csv", "data-testid": "awt-file" });
  const start = el("button", { "data-testid": "start" }, "Upload and start");
  start.addEventListener("click", () => {
    const chosen = file.files && file.files[0];
    if (!chosen || !profession.value.trim()) return;
    void store.createSession(profession.value, chosen, apiKey.value).catch(() => undefined);
  });
  for (const node of [profession, apiKey, file, start]) section.appendChild(node);
  return section;
}

function commitBar(store: WizardStore, step: number): HTMLElement {
  const bar = el("div", { class: "commit-bar" });
  const drafts = store.state.steps[step].drafts;
  bar.appendChild(
    el("span", { "data-testid": "draft-count" }, `${drafts.length} staged edit(s)`),
  );
  const commit = el("button", { "data-testid": "commit" }, "Confirm step");
  commit.disabled = store.state.busy;
  commit.addEventListener("click", () => {
    void store.commitReview(step).catch(() => undefined);
  });
  bar.appendChild(commit);
  return bar;
}

function generateBar(store: WizardStore, step: number): HTMLElement {
  const bar = el("div", { class: "generate-bar" });
  const slot = store.state.steps[step];
  const label = slot.candidates === null ? "Generate candidates" : "Regenerate (discards drafts)";
  const button = el("button", { "data-testid": "generate" }, label);
  button.disabled = store.state.busy;
  button.addEventListener("click", () => {
    void store.generate(step).catch(() => undefined);
  });
  bar.appendChild(button);
  for (const warning of slot.warnings) {
    bar.appendChild(el("div", { class: "warning" }, warning));
  }
  return bar;
}

function renderLabelReview(store: WizardStore, step: number): HTMLElement {
  const section = el("section", { class: `step step-${step}` });
  section.appendChild(el("h1", {}, STEP_TITLES[step]));
  section.appendChild(generateBar(store, step));
  const slot = store.state.steps[step];
  if (slot.candidates === null) return section;

  const removed = new Set(
    slot.drafts.filter((d) => d.kind === "remove").map((d) => normalizeLabel(d.target)),
  );
  const list = el("ul", { class: "candidates" });
  for (const candidate of slot.candidates) {
    if (typeof candidate !== "string") continue;
    const item = el("li");
    const box = el("input", { type: "checkbox", "data-label": candidate });
    box.checked = !removed.has(normalizeLabel(candidate));
    box.addEventListener("change", () => {
      if (box.checked) {
        store.removeDraft(
          step,
          (d) => d.kind === "remove" && normalizeLabel(d.target) === normalizeLabel(candidate),
        );
      } else {
        store.addDraft(step, { kind: "remove", step, target: candidate });
      }
    });
    item.appendChild(box);
    item.appendChild(el("span", {}, ` ${candidate}`));
    list.appendChild(item);
  }
  for (const draft of slot.drafts) {
    if (draft.kind !== "add") continue;
    const item = el("li", { class: "added" });
    item.appendChild(el("span", {}, `+ ${draft.target}`));
    const undo = el("button", { "data-undo-add": draft.target }, "x");
    undo.addEventListener("click", () => {
      store.removeDraft(step, (d) => d === draft);
    });
    item.appendChild(undo);
    list.appendChild(item);
  }
  section.appendChild(list);

  const addField = el("input", {
    type: "text",
    placeholder: "Add a missing entry",
    "data-testid": "add-field",
  });
  const addButton = el("button", { "data-testid": "add-button" }, "Add");
  addButton.addEventListener("click", () => {
    const value = addField.value.trim();
    if (!value) return;
    if (store.addDraft(step, { kind: "add", step, target: value })) addField.value = "";
  });
  section.appendChild(addField);
  section.appendChild(addButton);
  section.appendChild(commitBar(store, step));
  return section;
}

function draftedInstance(store: WizardStore, target: string, base: InstanceRef): InstanceRef {
  const draft = store.state.steps[3].drafts.find(
    (d) => d.kind === "edit" && d.target === target,
  );
  return draft && draft.replacement ? parseInstance(draft.replacement) : base;
}

function renderInstanceReview(store: WizardStore): HTMLElement {
  const section = el("section", { class: "step step-3" });
  section.appendChild(el("h1", {}, STEP_TITLES[3]));
  section.appendChild(generateBar(store, 3));
  const slot = store.state.steps[3];
  if (slot.candidates === null) return section;

  const typeOptions = store.confirmedLabels(1);
  const removedTargets = new Set(
    slot.drafts.filter((d) => d.kind === "remove").map((d) => d.target),
  );
  const table = el("table", { class: "instances" });
  const head = el("tr");
  for (const caption of ["Object", "Type", ""]) head.appendChild(el("th", {}, caption));
  table.appendChild(head);

  for (const candidate of slot.candidates) {
    if (!isInstance(candidate)) continue;
    const target = renderInstance(candidate);
    const row = el("tr", { "data-target": target });
    const current = draftedInstance(store, target, candidate);
    if (removedTargets.has(target)) {
      row.classList.add("removed");
      const cell = el("td", { colspan: "2" }, `${current.name} (${current.object_type})`);
      row.appendChild(cell);
      const restore = el("td");
      const undo = el("button", { "data-restore": target }, "restore");
      undo.addEventListener("click", () => {
        store.removeDraft(3, (d) => d.kind === "remove" && d.target === target);
      });
      restore.appendChild(undo);
      row.appendChild(restore);
      table.appendChild(row);
      continue;
    }

    const nameCell = el("td");
    const nameInput = el("input", { type: "text", "data-name-for": target });
    nameInput.value = current.name;
    nameInput.addEventListener("change", () => {
      store.upsertEditDraft(
        3,
        target,
        renderInstance({ name: nameInput.value, object_type: current.object_type }),
      );
    });
    nameCell.appendChild(nameInput);

    const typeCell = el("td");
    const select = el("select", { "data-type-for": target });
    for (const option of typeOptions) {
      const node = el("option", { value: option }, option);
      if (option === current.object_type) node.selected = true;
      select.appendChild(node);
    }
    select.addEventListener("change", () => {
      store.upsertEditDraft(
        3,
        target,
        renderInstance({ name: current.name, object_type: select.value }),
      );
    });
    typeCell.appendChild(select);

    const deleteCell = el("td");
    const deleteButton = el("button", { "data-delete": target }, "delete");
    deleteButton.addEventListener("click", () => {
      store.addDraft(3, { kind: "remove", step: 3, target });
    });
    deleteCell.appendChild(deleteButton);

    row.appendChild(nameCell);
    row.appendChild(typeCell);
    row.appendChild(deleteCell);
    table.appendChild(row);
  }
  section.appendChild(table);
  section.appendChild(commitBar(store, 3));
  return section;
}

function draftedAnnotation(store: WizardStore, base: Annotation): Annotation {
  const draft = store.state.steps[4].drafts.find(
    (d) => d.kind === "edit" && d.target === base.title,
  );
  if (!draft || !draft.replacement) return annotationFromCandidate(base);
  const content = parseAnnotationContent(draft.replacement);
  return { title: base.title, activities: content.activities, objects: content.objects };
}

function renderSampleReview(store: WizardStore): HTMLElement {
  const section = el("section", { class: "step step-4" });
  section.appendChild(el("h1", {}, STEP_TITLES[4]));
  section.appendChild(generateBar(store, 4));
  const slot = store.state.steps[4];
  if (slot.reviewSample === null) return section;

  const activityOptions = store.confirmedLabels(2);
  const objectOptions = store.confirmedObjects();
  const removedTitles = new Set(
    slot.drafts.filter((d) => d.kind === "remove").map((d) => d.target),
  );

  const stage = (annotation: Annotation) =>
    store.upsertEditDraft(
      4,
      annotation.title,
      renderAnnotationContent(annotation.activities, annotation.objects),
    );

  const table = el("table", { class: "sample" });
  const head = el("tr");
  for (const caption of ["Window title", "Activities", "Objects", ""]) {
    head.appendChild(el("th", {}, caption));
  }
  table.appendChild(head);

  for (const base of slot.reviewSample) {
    if (!isAnnotation(base)) continue;
    const row = el("tr", { "data-title": base.title });
    if (removedTitles.has(base.title)) {
      row.classList.add("removed");
      row.appendChild(el("td", { colspan: "3" }, base.title));
      const restoreCell = el("td");
      const undo = el("button", { "data-restore": base.title }, "restore");
      undo.addEventListener("click", () => {
        store.removeDraft(4, (d) => d.kind === "remove" && d.target === base.title);
      });
      restoreCell.appendChild(undo);
      row.appendChild(restoreCell);
      table.appendChild(row);
      continue;
    }
    const current = draftedAnnotation(store, base);
    row.appendChild(el("td", {}, base.title));

    const activityCell = el("td", { class: "chips" });
    current.activities.forEach((activity, index) => {
      const chip = el("span", { class: "chip" }, activity);
      const x = el("button", { "data-chip-activity": activity, "data-chip-title": base.title }, "x");
      x.addEventListener("click", () => {
        const next = annotationFromCandidate(current);
        next.activities.splice(index, 1);
        stage(next);
      });
      chip.appendChild(x);
      activityCell.appendChild(chip);
    });
    const activitySelect = el("select", { "data-add-activity": base.title });
    activitySelect.appendChild(el("option", { value: "" }, "add activity..."));
    for (const option of activityOptions) {
      if (!current.activities.includes(option)) {
        activitySelect.appendChild(el("option", { value: option }, option));
      }
    }
    activitySelect.addEventListener("change", () => {
      if (!activitySelect.value) return;
      const next = annotationFromCandidate(current);
      next.activities.push(activitySelect.value);
      stage(next);
    });
    activityCell.appendChild(activitySelect);
    row.appendChild(activityCell);

    const objectCell = el("td", { class: "chips" });
    current.objects.forEach((objectRef, index) => {
      const chip = el("span", { class: "chip" }, renderInstance(objectRef));
      const x = el("button", {
        "data-chip-object": renderInstance(objectRef),
        "data-chip-title": base.title,
      }, "x");
      x.addEventListener("click", () => {
        const next = annotationFromCandidate(current);
        next.objects.splice(index, 1);
        stage(next);
      });
      chip.appendChild(x);
      objectCell.appendChild(chip);
    });
    const objectSelect = el("select", { "data-add-object": base.title });
    objectSelect.appendChild(el("option", { value: "" }, "add object..."));
    for (const option of objectOptions) {
      const value = renderInstance(option);
      if (!current.objects.some((o) => renderInstance(o) === value)) {
        objectSelect.appendChild(el("option", { value }, value));
      }
    }
    objectSelect.addEventListener("change", () => {
      if (!objectSelect.value) return;
      const next = annotationFromCandidate(current);
      next.objects.push(parseInstance(objectSelect.value));
      stage(next);
    });
    objectCell.appendChild(objectSelect);
    row.appendChild(objectCell);

    const deleteCell = el("td");
    const deleteButton = el("button", { "data-delete": base.title }, "delete");
    deleteButton.addEventListener("click", () => {
      store.addDraft(4, { kind: "remove", step: 4, target: base.title });
    });
    deleteCell.appendChild(deleteButton);
    row.appendChild(deleteCell);
    table.appendChild(row);
  }
  section.appendChild(table);
  section.appendChild(commitBar(store, 4));
  return section;
}

const METRIC_ROW_NAMES: Record<number, string> = {
  1: "Object Types",
  2: "Activities",
  3: "Objects",
  4: "Events (verified sample)",
};

function renderMetricsExport(store: WizardStore): HTMLElement {
  const section = el("section", { class: "results" });
  section.appendChild(el("h1", {}, "Results"));
  if (!store.state.metrics.length) {
    section.appendChild(
      el("p", { class: "empty", "data-testid": "empty-state" }, "Nothing confirmed yet."),
    );
    return section;
  }
  const table = el("table", { class: "metrics", "data-testid": "metrics-table" });
  const head = el("tr");
  for (const caption of ["Step", "Generated", "Kept as-is", "Added", "Edited", "Removed"]) {
    head.appendChild(el("th", {}, caption));
  }
  table.appendChild(head);
  for (const row of store.state.metrics) {
    const tr = el("tr", { "data-metrics-step": String(row.step) });
    tr.appendChild(el("td", {}, METRIC_ROW_NAMES[row.step]));
    tr.appendChild(el("td", {}, String(row.generated)));
    tr.appendChild(el("td", {}, `${row.kept_as_is} (${row.kept_pct}%)`));
    tr.appendChild(el("td", {}, String(row.added)));
    tr.appendChild(el("td", {}, String(row.edited)));
    tr.appendChild(el("td", {}, String(row.removed)));
    table.appendChild(tr);
  }
  section.appendChild(table);

  if (store.state.estimatedCost !== null) {
    section.appendChild(
      el("p", { "data-testid": "cost" }, `Estimated cost: ${store.state.estimatedCost.toFixed(4)}`),
    );
  }

  const exportButton = el("button", { "data-testid": "export" }, "Download OCEL 2.0");
  const step4Confirmed = store.state.steps[4].confirmed;
  exportButton.disabled = !step4Confirmed || store.state.busy;
  if (!step4Confirmed) {
    exportButton.title = "Confirm step 4 to enable the export";
  }
  exportButton.addEventListener("click", () => {
    void store
      .exportOcel()
      .then(({ filename, data }) => triggerDownload(section, filename, data))
      .catch(() => undefined);
  });
  section.appendChild(exportButton);
  return section;
}

function triggerDownload(parent: HTMLElement, filename: string, data: Uint8Array): void {
  const anchor = el("a", { "data-testid": "download-link" }, filename);
  anchor.download = filename;
  let urlAssigned = false;
  try {
    const blob = new Blob([data as BlobPart], { type: "application/json" });
    anchor.href = URL.createObjectURL(blob);
    urlAssigned = true;
  } catch {
    // environments without object URLs (tests) still get the link node
  }
  parent.appendChild(anchor);
  if (urlAssigned) anchor.click();
}
