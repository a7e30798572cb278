"""Lenient parsing of model responses into typed values.

Responses are expected to be a single JSON array but real chat output
arrives wrapped in prose, code fences, or both, so extraction scans for
the first parseable JSON array anywhere in the text. Individual records
that violate the vocabulary rules are dropped and reported as warnings
rather than failing the whole response; the human review loop, not the
parser, owns vocabulary growth.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

from .errors import AllRecordsInvalid, EmptyLabel, EmptyList, NoJsonFound
from .labels import Label, ObjectInstance, TitleAnnotation, normalize_label


@dataclass
class ParseResult:
    """Parsed values plus human-readable warnings about dropped records."""

    values: list
    warnings: list[str] = field(default_factory=list)


def extract_first_json_array(raw: str) -> list:
    """Return the first JSON array found anywhere in ``raw``.

    Tolerates surrounding prose and code fences. Raises NoJsonFound when
    no parseable array exists.
    """
    decoder = json.JSONDecoder()
    index = raw.find("[")
    while index != -1:
        try:
            value, _ = decoder.raw_decode(raw, index)
        except ValueError:
            value = None
        if isinstance(value, list):
            return value
        index = raw.find("[", index + 1)
    raise NoJsonFound("no JSON array in response")


def parse_labels(raw: str, kind: str = "label") -> ParseResult:
    """Parse a JSON array of strings into normalized Labels.

    Case-insensitive duplicates are dropped keeping the first occurrence;
    non-string or empty entries are skipped with a warning. Raises
    EmptyList when nothing valid remains.
    """
    array = extract_first_json_array(raw)
    labels: list[Label] = []
    seen: set[str] = set()
    warnings: list[str] = []
    for element in array:
        if not isinstance(element, str):
            warnings.append(f"skipped non-string {kind} entry: {element!r}")
            continue
        try:
            label = normalize_label(element)
        except EmptyLabel:
            warnings.append(f"skipped empty {kind} entry")
            continue
        if label.text in seen:
            continue
        seen.add(label.text)
        labels.append(label)
    if not labels:
        raise EmptyList(f"response contained no usable {kind} entries")
    return ParseResult(values=labels, warnings=warnings)


def _fold(name: str) -> str:
    return " ".join(name.split()).lower()


def parse_object_instances(
    raw: str, confirmed_types: Iterable[Label]
) -> ParseResult:
    """Parse a JSON array of {"object", "object_type"} records.

    Records referencing an unconfirmed type, naming the object after its
    own type, or duplicating an earlier (name, type) pair are dropped
    with warnings. Raises AllRecordsInvalid when no record survives.
    """
    array = extract_first_json_array(raw)
    allowed = {label.text: label for label in confirmed_types}
    instances: list[ObjectInstance] = []
    seen: set[tuple[str, str]] = set()
    warnings: list[str] = []
    for record in array:
        if not isinstance(record, dict) or "object" not in record or "object_type" not in record:
            warnings.append(f"skipped malformed object record: {record!r}")
            continue
        name = record["object"]
        type_raw = record["object_type"]
        if not isinstance(name, str) or not isinstance(type_raw, str) or not name.strip():
            warnings.append(f"skipped malformed object record: {record!r}")
            continue
        try:
            type_label = normalize_label(type_raw)
        except EmptyLabel:
            warnings.append(f"skipped object {name!r}: empty type")
            continue
        if type_label.text not in allowed:
            warnings.append(
                f"dropped object {name!r}: type {type_label.text!r} is not confirmed"
            )
            continue
        if _fold(name) == type_label.text:
            warnings.append(f"dropped object {name!r}: name equals its type")
            continue
        key = (_fold(name), type_label.text)
        if key in seen:
            warnings.append(f"dropped duplicate object {name!r} ({type_label.text})")
            continue
        seen.add(key)
        instances.append(ObjectInstance(name=name.strip(), object_type=type_label))
    if not instances:
        raise AllRecordsInvalid("no valid object records in response")
    return ParseResult(values=instances, warnings=warnings)


def parse_annotations(
    raw: str,
    activities: Iterable[Label],
    objects: Iterable[ObjectInstance],
    batch: Sequence[str],
) -> ParseResult:
    """Parse a JSON array of {"title", "activities", "objects"} records.

    Every title in ``batch`` appears exactly once in the output, in batch
    order; titles the response missed come back with empty lists. Unknown
    activities and objects are dropped with warnings, as are records for
    titles outside the batch. Objects may be referenced by bare name or
    by {"object", "object_type"} record.
    """
    array = extract_first_json_array(raw)
    allowed_activities = {label.text for label in activities}
    by_name: dict[str, list[ObjectInstance]] = {}
    for instance in objects:
        by_name.setdefault(_fold(instance.name), []).append(instance)
    batch_set = set(batch)

    annotated: dict[str, TitleAnnotation] = {}
    warnings: list[str] = []
    for record in array:
        if not isinstance(record, dict) or not isinstance(record.get("title"), str):
            warnings.append(f"skipped malformed annotation record: {record!r}")
            continue
        title = record["title"]
        if title not in batch_set:
            warnings.append(f"dropped annotation for title outside batch: {title!r}")
            continue
        if title in annotated:
            warnings.append(f"dropped duplicate annotation for title: {title!r}")
            continue
        annotated[title] = TitleAnnotation(
            title=title,
            activities=tuple(
                _collect_activities(record.get("activities"), allowed_activities, title, warnings)
            ),
            objects=tuple(
                _collect_objects(record.get("objects"), by_name, title, warnings)
            ),
        )
    values = [
        annotated.get(title, TitleAnnotation(title=title)) for title in batch
    ]
    return ParseResult(values=values, warnings=warnings)


def _collect_activities(
    entries: Any, allowed: set[str], title: str, warnings: list[str]
) -> list[Label]:
    labels: list[Label] = []
    seen: set[str] = set()
    for entry in entries if isinstance(entries, list) else []:
        if not isinstance(entry, str):
            warnings.append(f"{title!r}: skipped non-string activity {entry!r}")
            continue
        try:
            label = normalize_label(entry)
        except EmptyLabel:
            continue
        if label.text not in allowed:
            warnings.append(f"{title!r}: dropped unknown activity {label.text!r}")
            continue
        if label.text not in seen:
            seen.add(label.text)
            labels.append(label)
    return labels


def _collect_objects(
    entries: Any,
    by_name: dict[str, list[ObjectInstance]],
    title: str,
    warnings: list[str],
) -> list[ObjectInstance]:
    found: list[ObjectInstance] = []
    seen: set[tuple[str, str]] = set()
    for entry in entries if isinstance(entries, list) else []:
        if isinstance(entry, dict):
            name = entry.get("object")
            type_text = entry.get("object_type")
        else:
            name, type_text = entry, None
        if not isinstance(name, str) or not name.strip():
            warnings.append(f"{title!r}: skipped malformed object reference {entry!r}")
            continue
        candidates = by_name.get(_fold(name), [])
        if not candidates:
            warnings.append(f"{title!r}: dropped unknown object {name!r}")
            continue
        instance = candidates[0]
        if isinstance(type_text, str):
            for candidate in candidates:
                if candidate.object_type.text == _fold(type_text):
                    instance = candidate
                    break
        if instance.key not in seen:
            seen.add(instance.key)
            found.append(instance)
    return found
