/** Edit-action string forms shared with the backend's script format. */

import type { Annotation, EditAction, InstanceRef } from "./types.js";

export function renderInstance(instance: InstanceRef): string {
  return `${instance.name} @ ${instance.object_type}`;
}

export function parseInstance(text: string): InstanceRef {
  const separator = text.lastIndexOf(" @ ");
  if (separator < 0) throw new Error(`expected "name @ type", got: ${text}`);
  return {
    name: text.slice(0, separator).trim(),
    object_type: text.slice(separator + 3).trim(),
  };
}

/** The step-4 replacement syntax: "activities: a; b | objects: N @ t; ...". */
export function renderAnnotationContent(activities: string[], objects: InstanceRef[]): string {
  const acts = activities.join("; ");
  const objs = objects.map(renderInstance).join("; ");
  return `activities: ${acts} | objects: ${objs}`;
}

export function parseAnnotationContent(content: string): { activities: string[]; objects: InstanceRef[] } {
  let text = content.trim();
  let objectPart = "";
  const marker = text.indexOf("objects:");
  if (marker >= 0) {
    objectPart = text.slice(marker + "objects:".length);
    text = text.slice(0, marker).trim();
  }
  if (text.endsWith("|")) text = text.slice(0, -1).trim();
  const activities: string[] = [];
  if (text.startsWith("activities:")) {
    for (const chunk of text.slice("activities:".length).split(";")) {
      if (chunk.trim()) activities.push(chunk.trim());
    }
  }
  const objects: InstanceRef[] = [];
  for (const chunk of objectPart.split(";")) {
    if (chunk.trim()) objects.push(parseInstance(chunk.trim()));
  }
  return { activities, objects };
}

/** Minimal parser for the CLI edit-script format (used by tests/fixtures). */
export function parseEditScript(text: string): EditAction[] {
  const actions: EditAction[] = [];
  for (const rawLine of text.split("\n")) {
    const line = rawLine.trim();
    if (!line || line.startsWith("#")) continue;
    const tokens = tokenize(line);
    if (tokens.length < 3) throw new Error(`bad edit line: ${line}`);
    const [kind, step, target, replacement] = tokens;
    if (kind !== "add" && kind !== "remove" && kind !== "edit") {
      throw new Error(`unknown action: ${kind}`);
    }
    actions.push({
      kind,
      step: Number(step),
      target,
      replacement: replacement ?? null,
    });
  }
  return actions;
}

function tokenize(line: string): string[] {
  const tokens: string[] = [];
  let i = 0;
  while (i < line.length) {
    const ch = line[i];
    if (ch === " " || ch === "\t") {
      i += 1;
    } else if (ch === "#") {
      break;
    } else if (ch === '"') {
      let value = "";
      i += 1;
      while (i < line.length && line[i] !== '"') {
        if (line[i] === "\\" && i + 1 < line.length) {
          value += line[i + 1];
          i += 2;
        } else {
          value += line[i];
          i += 1;
        }
      }
      if (line[i] !== '"') throw new Error(`unterminated string in: ${line}`);
      i += 1;
      tokens.push(value);
    } else {
      let value = "";
      while (i < line.length && line[i] !== " " && line[i] !== "\t") {
        value += line[i];
        i += 1;
      }
      tokens.push(value);
    }
  }
  return tokens;
}

export function annotationFromCandidate(annotation: Annotation): Annotation {
  return {
    title: annotation.title,
    activities: [...annotation.activities],
    objects: annotation.objects.map((o) => ({ ...o })),
  };
}
