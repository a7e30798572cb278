"""OCEL 2.0 export: propagate confirmed annotations and serialize.

Mapping choices: every window event whose title carries a confirmed
annotation with at least one activity yields one OCEL event per
(event, activity) pair, since an OCEL event has exactly one type while
an annotated title may carry several activities. Unannotated events are
excluded rather than emitted with a placeholder type. Object ids are
deterministic slugs of the instance name; relationship qualifiers are
fixed to "involves".
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from datetime import timezone
from importlib import resources
from typing import Iterable, Sequence

import jsonschema

from .awt import WindowEvent
from .errors import InvalidDocument, StepOrderViolation
from .labels import Label, ObjectInstance, TitleAnnotation

EPOCH = "1970-01-01T00:00:00+00:00"
QUALIFIER = "involves"


@dataclass(frozen=True)
class EnrichedEvent:
    source: WindowEvent
    activities: tuple[Label, ...]
    objects: tuple[ObjectInstance, ...]


@dataclass(frozen=True)
class TypeSpec:
    name: str
    attributes: tuple[dict, ...] = ()


@dataclass(frozen=True)
class OcelObject:
    id: str
    type: str
    attributes: tuple[dict, ...] = ()


@dataclass(frozen=True)
class Relationship:
    object_id: str
    qualifier: str = QUALIFIER


@dataclass(frozen=True)
class OcelEvent:
    id: str
    type: str
    time: str
    attributes: tuple[dict, ...] = ()
    relationships: tuple[Relationship, ...] = ()


@dataclass
class OcelDocument:
    object_types: list[TypeSpec] = field(default_factory=list)
    event_types: list[TypeSpec] = field(default_factory=list)
    objects: list[OcelObject] = field(default_factory=list)
    events: list[OcelEvent] = field(default_factory=list)


def propagate(
    events: Sequence[WindowEvent], annotations: Iterable[TitleAnnotation]
) -> list[EnrichedEvent]:
    """Annotate every event whose title matches a confirmed annotation with
    non-empty activities; everything else is excluded from the output."""
    by_title = {a.title: a for a in annotations if a.activities}
    enriched = []
    for event in events:
        annotation = by_title.get(event.title)
        if annotation is None:
            continue
        enriched.append(
            EnrichedEvent(
                source=event,
                activities=annotation.activities,
                objects=annotation.objects,
            )
        )
    return enriched


def slugify(name: str) -> str:
    slug = re.sub(r"[^a-z0-9]+", "-", name.lower()).strip("-")
    return slug or "obj"


def assign_object_ids(instances: Sequence[ObjectInstance]) -> dict[tuple[str, str], str]:
    """Deterministic slug ids with -2, -3... suffixes on collision."""
    ids: dict[tuple[str, str], str] = {}
    taken: set[str] = set()
    for instance in instances:
        base = slugify(instance.name)
        candidate = base
        suffix = 2
        while candidate in taken:
            candidate = f"{base}-{suffix}"
            suffix += 1
        taken.add(candidate)
        ids[instance.key] = candidate
    return ids


EVENT_ATTRIBUTE_SPECS = (
    {"name": "app", "type": "string"},
    {"name": "title", "type": "string"},
)
OBJECT_ATTRIBUTE_SPECS = ({"name": "name", "type": "string"},)


def build_ocel(
    object_types: Sequence[Label],
    activities: Sequence[Label],
    instances: Sequence[ObjectInstance],
    enriched: Sequence[EnrichedEvent],
) -> OcelDocument:
    """Assemble an OCEL document from confirmed artifacts.

    Event types cover every confirmed activity; object types cover only
    types that actually have instances, so the declared schema matches
    the objects present in the log.
    """
    instantiated = {instance.object_type.text for instance in instances}
    doc = OcelDocument(
        object_types=[
            TypeSpec(name=label.text, attributes=OBJECT_ATTRIBUTE_SPECS)
            for label in object_types
            if label.text in instantiated
        ],
        event_types=[
            TypeSpec(name=label.text, attributes=EVENT_ATTRIBUTE_SPECS)
            for label in activities
        ],
    )
    ids = assign_object_ids(instances)
    for instance in instances:
        doc.objects.append(
            OcelObject(
                id=ids[instance.key],
                type=instance.object_type.text,
                attributes=(
                    {"name": "name", "time": EPOCH, "value": instance.name},
                ),
            )
        )
    counter = 0
    for item in enriched:
        relationships = tuple(
            Relationship(object_id=ids[obj.key]) for obj in item.objects
        )
        for activity in item.activities:
            counter += 1
            doc.events.append(
                OcelEvent(
                    id=f"e{counter}",
                    type=activity.text,
                    time=item.source.start.astimezone(timezone.utc).isoformat(),
                    attributes=(
                        {"name": "app", "value": item.source.app},
                        {"name": "title", "value": item.source.title},
                    ),
                    relationships=relationships,
                )
            )
    return doc


def build_ocel_for_session(session, events: Sequence[WindowEvent]) -> OcelDocument:
    """Build the document from a session whose final step is confirmed."""
    from .session import StepStatus  # local import to avoid a cycle

    if session.step(4).status is not StepStatus.CONFIRMED:
        raise StepOrderViolation("OCEL export requires step 4 to be confirmed")
    return build_ocel(
        object_types=session.step(1).confirmed_items,
        activities=session.step(2).confirmed_items,
        instances=session.step(3).confirmed_items,
        enriched=propagate(events, session.step(4).confirmed_items),
    )


def validate_ocel(doc: OcelDocument) -> list[str]:
    """Referential-integrity check; returns one message per violation."""
    violations: list[str] = []
    type_names = {t.name for t in doc.object_types}
    event_type_names = {t.name for t in doc.event_types}
    seen_objects: set[str] = set()
    for obj in doc.objects:
        if obj.id in seen_objects:
            violations.append(f"duplicate object id: {obj.id}")
        seen_objects.add(obj.id)
        if obj.type not in type_names:
            violations.append(f"object {obj.id}: unknown object type {obj.type!r}")
    seen_events: set[str] = set()
    for event in doc.events:
        if event.id in seen_events:
            violations.append(f"duplicate event id: {event.id}")
        seen_events.add(event.id)
        if event.type not in event_type_names:
            violations.append(f"event {event.id}: unknown event type {event.type!r}")
        for rel in event.relationships:
            if rel.object_id not in seen_objects:
                violations.append(
                    f"event {event.id}: relationship to unknown object {rel.object_id!r}"
                )
    return violations


def document_to_json(doc: OcelDocument) -> dict:
    return {
        "objectTypes": [
            {"name": t.name, "attributes": list(t.attributes)} for t in doc.object_types
        ],
        "eventTypes": [
            {"name": t.name, "attributes": list(t.attributes)} for t in doc.event_types
        ],
        "objects": [
            {
                "id": o.id,
                "type": o.type,
                "attributes": list(o.attributes),
                "relationships": [],
            }
            for o in doc.objects
        ],
        "events": [
            {
                "id": e.id,
                "type": e.type,
                "time": e.time,
                "attributes": list(e.attributes),
                "relationships": [
                    {"objectId": r.object_id, "qualifier": r.qualifier}
                    for r in e.relationships
                ],
            }
            for e in doc.events
        ],
    }


def serialize_ocel(doc: OcelDocument) -> bytes:
    """Serialize to OCEL 2.0 JSON with deterministic ordering.

    Raises InvalidDocument when referential integrity does not hold.
    """
    violations = validate_ocel(doc)
    if violations:
        raise InvalidDocument(
            f"document has {len(violations)} violation(s): {violations[0]}"
        )
    return (json.dumps(document_to_json(doc), indent=2, ensure_ascii=False) + "\n").encode(
        "utf-8"
    )


def parse_ocel(data: bytes | str) -> OcelDocument:
    payload = json.loads(data)
    return OcelDocument(
        object_types=[
            TypeSpec(name=t["name"], attributes=tuple(t.get("attributes", [])))
            for t in payload["objectTypes"]
        ],
        event_types=[
            TypeSpec(name=t["name"], attributes=tuple(t.get("attributes", [])))
            for t in payload["eventTypes"]
        ],
        objects=[
            OcelObject(
                id=o["id"],
                type=o["type"],
                attributes=tuple(o.get("attributes", [])),
            )
            for o in payload["objects"]
        ],
        events=[
            OcelEvent(
                id=e["id"],
                type=e["type"],
                time=e["time"],
                attributes=tuple(e.get("attributes", [])),
                relationships=tuple(
                    Relationship(object_id=r["objectId"], qualifier=r["qualifier"])
                    for r in e.get("relationships", [])
                ),
            )
            for e in payload["events"]
        ],
    )


def ocel_schema() -> dict:
    text = resources.files("exoar.data").joinpath("ocel20-schema.json").read_text("utf-8")
    return json.loads(text)


def validate_against_schema(data: bytes | str | dict) -> None:
    """Check serialized output against the packaged OCEL 2.0 JSON schema."""
    payload = json.loads(data) if isinstance(data, (bytes, str)) else data
    jsonschema.validate(payload, ocel_schema())


def export_manifest(
    doc: OcelDocument, total_events: int, enriched_count: int
) -> dict:
    """Sidecar counts written next to an exported OCEL file."""
    return {
        "events": len(doc.events),
        "objects": len(doc.objects),
        "object_types": len(doc.object_types),
        "event_types": len(doc.event_types),
        "source_events": total_events,
        "annotated_source_events": enriched_count,
        "excluded_source_events": total_events - enriched_count,
    }
