"""Session engine: the four-step pipeline state machine.

A session owns the uploaded AWT data, the per-step generated and
confirmed artifacts, the edit audit trail, and every generation record.
Steps must be confirmed in order; re-confirming or re-generating an
earlier step invalidates everything downstream (old items are kept
read-only for diffing). Within one session mutations are single-writer:
a concurrent attempt gets a Busy error instead of queueing.

Sessions persist as one JSON document plus the raw AWT file in a store
directory; the document schema is described in docs/session-schema.md
and its field names are stable across minor versions.
"""

from __future__ import annotations

import hashlib
import json
import threading
from contextlib import contextmanager
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Any, Sequence

from .awt import (
    ParsedLog,
    TitleStat,
    parse_awt_log,
    select_enrichment_titles,
    select_object_titles,
    title_statistics,
)
from .backends import Backend, GenerationRecord
from .edits import (
    EditAction,
    EditKind,
    apply_edit_script,
    codec_for_step,
    step_metrics,
    utcnow,
)
from .errors import (
    Busy,
    CorruptSession,
    EmptyProfession,
    InvalidEdit,
    MissingPriceTable,
    NotFound,
    NothingConfirmed,
    StepOrderViolation,
)
from .gateway import generate_with_repair
from .labels import Label, ObjectInstance, StepMetrics, TitleAnnotation
from .prompts import ChatRequest, PromptContext, ResponseFormat

SCHEMA_VERSION = 1
STEP_NAMES = {1: "object types", 2: "activities", 3: "objects", 4: "events"}


class StepStatus(str, Enum):
    EMPTY = "empty"
    GENERATED = "generated"
    CONFIRMED = "confirmed"
    INVALIDATED = "invalidated"


@dataclass
class StepState:
    status: StepStatus = StepStatus.EMPTY
    generated_items: list = field(default_factory=list)
    confirmed_items: list = field(default_factory=list)
    edits: list[EditAction] = field(default_factory=list)
    review_sample: list[TitleAnnotation] | None = None


@dataclass(frozen=True)
class DatasetRef:
    path: str
    sha256: str


@dataclass
class Session:
    id: str
    profession: str
    dataset_ref: DatasetRef
    steps: list[StepState]
    records: list[GenerationRecord] = field(default_factory=list)
    price_table: dict[str, float] | None = None
    created_at: datetime = field(default_factory=utcnow)
    updated_at: datetime = field(default_factory=utcnow)

    def step(self, number: int) -> StepState:
        if number not in (1, 2, 3, 4):
            raise StepOrderViolation(f"no such step: {number}")
        return self.steps[number - 1]

    @property
    def confirmed_prefix(self) -> int:
        """Highest k such that steps 1..k are all confirmed."""
        k = 0
        for state in self.steps:
            if state.status is not StepStatus.CONFIRMED:
                break
            k += 1
        return k


@dataclass(frozen=True)
class EngineConfig:
    model_id: str = "gpt-4.1"
    temperature: float = 0.0
    object_title_count: int = 500
    object_title_min_days: int = 3
    enrichment_title_count: int = 100
    review_sample_size: int = 10
    annotation_batch_size: int | None = None  # None = single request


@dataclass
class GenerationOutcome:
    items: list
    records: list[GenerationRecord]
    warnings: list[str]
    review_sample: list[TitleAnnotation] | None = None


def content_hash(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


# --- serialization ----------------------------------------------------------


def _iso(stamp: datetime) -> str:
    return stamp.astimezone(timezone.utc).isoformat()


def _item_to_json(step: int, item: Any) -> Any:
    if step in (1, 2):
        return item.text
    if step == 3:
        return {"name": item.name, "object_type": item.object_type.text}
    return {
        "title": item.title,
        "activities": [label.text for label in item.activities],
        "objects": [
            {"name": obj.name, "object_type": obj.object_type.text}
            for obj in item.objects
        ],
    }


def _item_from_json(step: int, value: Any) -> Any:
    if step in (1, 2):
        return Label(value)
    if step == 3:
        return ObjectInstance(name=value["name"], object_type=Label(value["object_type"]))
    return TitleAnnotation(
        title=value["title"],
        activities=tuple(Label(text) for text in value["activities"]),
        objects=tuple(
            ObjectInstance(name=obj["name"], object_type=Label(obj["object_type"]))
            for obj in value["objects"]
        ),
    )


def session_to_document(session: Session) -> dict:
    """Render the stable JSON document for a session."""
    steps = []
    for number, state in enumerate(session.steps, start=1):
        steps.append(
            {
                "step": number,
                "status": state.status.value,
                "generated_items": [_item_to_json(number, i) for i in state.generated_items],
                "confirmed_items": [_item_to_json(number, i) for i in state.confirmed_items],
                "edits": [
                    {
                        "kind": edit.kind.value,
                        "step": edit.step,
                        "target": edit.target,
                        "replacement": edit.replacement,
                        "timestamp": _iso(edit.timestamp),
                    }
                    for edit in state.edits
                ],
                "review_sample": (
                    None
                    if state.review_sample is None
                    else [_item_to_json(4, a) for a in state.review_sample]
                ),
            }
        )
    records = [
        {
            "step": record.step,
            "request": {
                "system_text": record.request.system_text,
                "user_text": record.request.user_text,
                "model_id": record.request.model_id,
                "temperature": record.request.temperature,
                "response_format_hint": record.request.response_format_hint.value,
            },
            "raw_response": record.raw_response,
            "prompt_tokens": record.prompt_tokens,
            "completion_tokens": record.completion_tokens,
            "attempts": record.attempts,
            "created_at": _iso(record.created_at),
        }
        for record in session.records
    ]
    return {
        "schema_version": SCHEMA_VERSION,
        "id": session.id,
        "profession": session.profession,
        "dataset_ref": {"path": session.dataset_ref.path, "sha256": session.dataset_ref.sha256},
        "price_table": session.price_table,
        "created_at": _iso(session.created_at),
        "updated_at": _iso(session.updated_at),
        "steps": steps,
        "records": records,
    }


def session_from_document(doc: dict) -> Session:
    steps = []
    for block in doc["steps"]:
        number = block["step"]
        steps.append(
            StepState(
                status=StepStatus(block["status"]),
                generated_items=[_item_from_json(number, v) for v in block["generated_items"]],
                confirmed_items=[_item_from_json(number, v) for v in block["confirmed_items"]],
                edits=[
                    EditAction(
                        kind=EditKind(e["kind"]),
                        step=e["step"],
                        target=e["target"],
                        replacement=e["replacement"],
                        timestamp=datetime.fromisoformat(e["timestamp"]),
                    )
                    for e in block["edits"]
                ],
                review_sample=(
                    None
                    if block["review_sample"] is None
                    else [_item_from_json(4, v) for v in block["review_sample"]]
                ),
            )
        )
    records = [
        GenerationRecord(
            step=r["step"],
            request=ChatRequest(
                system_text=r["request"]["system_text"],
                user_text=r["request"]["user_text"],
                model_id=r["request"]["model_id"],
                temperature=r["request"]["temperature"],
                response_format_hint=ResponseFormat(r["request"]["response_format_hint"]),
            ),
            raw_response=r["raw_response"],
            prompt_tokens=r["prompt_tokens"],
            completion_tokens=r["completion_tokens"],
            attempts=r["attempts"],
            created_at=datetime.fromisoformat(r["created_at"]),
        )
        for r in doc["records"]
    ]
    return Session(
        id=doc["id"],
        profession=doc["profession"],
        dataset_ref=DatasetRef(path=doc["dataset_ref"]["path"], sha256=doc["dataset_ref"]["sha256"]),
        steps=steps,
        records=records,
        price_table=doc["price_table"],
        created_at=datetime.fromisoformat(doc["created_at"]),
        updated_at=datetime.fromisoformat(doc["updated_at"]),
    )


def dump_document(doc: dict) -> bytes:
    return (json.dumps(doc, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


_VOLATILE_KEYS = {"created_at", "updated_at", "timestamp"}


def strip_volatile(value: Any) -> Any:
    """Blank timestamps so two documents can be compared for replay equality."""
    if isinstance(value, dict):
        return {
            key: ("" if key in _VOLATILE_KEYS else strip_volatile(inner))
            for key, inner in value.items()
        }
    if isinstance(value, list):
        return [strip_volatile(inner) for inner in value]
    return value


# --- store ------------------------------------------------------------------


class SessionStore:
    """Directory-backed store: one subdirectory per session."""

    def __init__(self, root: str | Path) -> None:
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def _dir(self, session_id: str) -> Path:
        return self.root / session_id

    def exists(self, session_id: str) -> bool:
        return (self._dir(session_id) / "session.json").exists()

    def save(self, session: Session, awt_data: bytes | None = None) -> None:
        directory = self._dir(session.id)
        directory.mkdir(parents=True, exist_ok=True)
        if awt_data is not None:
            (directory / "awt.csv").write_bytes(awt_data)
        (directory / "session.json").write_bytes(dump_document(session_to_document(session)))

    def load(self, session_id: str) -> tuple[Session, bytes]:
        path = self._dir(session_id) / "session.json"
        if not path.exists():
            raise NotFound(f"no session {session_id!r}")
        doc = json.loads(path.read_text(encoding="utf-8"))
        session = session_from_document(doc)
        awt_path = self.root / session.dataset_ref.path
        if not awt_path.exists():
            raise CorruptSession(f"session {session_id!r}: AWT data file missing")
        data = awt_path.read_bytes()
        if content_hash(data) != session.dataset_ref.sha256:
            raise CorruptSession(f"session {session_id!r}: AWT data hash mismatch")
        return session, data

    def delete(self, session_id: str) -> None:
        directory = self._dir(session_id)
        if not (directory / "session.json").exists():
            raise NotFound(f"no session {session_id!r}")
        for child in sorted(directory.rglob("*"), reverse=True):
            if child.is_file():
                child.unlink()
            else:
                child.rmdir()
        directory.rmdir()

    def list_ids(self) -> list[str]:
        return sorted(
            child.name
            for child in self.root.iterdir()
            if (child / "session.json").exists()
        )


# --- engine -----------------------------------------------------------------


class SessionEngine:
    """Orchestrates generation, review, metrics and persistence."""

    def __init__(
        self,
        store: SessionStore,
        backend: Backend,
        config: EngineConfig | None = None,
        price_table: dict[str, float] | None = None,
    ) -> None:
        self.store = store
        self.backend = backend
        self.config = config or EngineConfig()
        self.price_table = price_table
        self._sessions: dict[str, Session] = {}
        self._logs: dict[str, ParsedLog] = {}
        self._stats: dict[str, list[TitleStat]] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()

    # -- lifecycle ---------------------------------------------------------

    def create(self, profession: str, awt_data: bytes) -> Session:
        if not profession.strip():
            raise EmptyProfession("profession must not be empty")
        parsed = parse_awt_log(awt_data)
        digest = content_hash(awt_data)
        with self._registry_lock:
            session_id = self._allocate_id(profession, digest)
            session = Session(
                id=session_id,
                profession=profession,
                dataset_ref=DatasetRef(path=f"{session_id}/awt.csv", sha256=digest),
                steps=[StepState(), StepState(), StepState(), StepState()],
                price_table=self.price_table,
            )
            self._sessions[session_id] = session
            self._logs[session_id] = parsed
            self._stats[session_id] = title_statistics(parsed.events)
        self.store.save(session, awt_data=awt_data)
        return session

    def _allocate_id(self, profession: str, digest: str) -> str:
        base = hashlib.sha256(
            profession.encode("utf-8") + b"\x00" + digest.encode("ascii")
        ).hexdigest()[:12]
        candidate = base
        suffix = 2
        while self.store.exists(candidate) or candidate in self._sessions:
            candidate = f"{base}-{suffix}"
            suffix += 1
        return candidate

    def get(self, session_id: str) -> Session:
        with self._registry_lock:
            if session_id in self._sessions:
                return self._sessions[session_id]
        session, data = self.store.load(session_id)
        parsed = parse_awt_log(data)
        with self._registry_lock:
            self._sessions[session_id] = session
            self._logs[session_id] = parsed
            self._stats[session_id] = title_statistics(parsed.events)
        return session

    def delete(self, session_id: str) -> None:
        self.store.delete(session_id)
        with self._registry_lock:
            self._sessions.pop(session_id, None)
            self._logs.pop(session_id, None)
            self._stats.pop(session_id, None)
            self._locks.pop(session_id, None)

    def parsed_log(self, session_id: str) -> ParsedLog:
        self.get(session_id)
        return self._logs[session_id]

    def title_stats(self, session_id: str) -> list[TitleStat]:
        self.get(session_id)
        return self._stats[session_id]

    @contextmanager
    def _mutation(self, session_id: str):
        with self._registry_lock:
            lock = self._locks.setdefault(session_id, threading.Lock())
        if not lock.acquire(blocking=False):
            raise Busy(f"session {session_id!r} has a mutation in flight")
        try:
            yield
        finally:
            lock.release()

    # -- pipeline ----------------------------------------------------------

    def _context(self, session: Session, step: int) -> PromptContext:
        stats = self._stats[session.id]
        object_types = activities = objects = None
        titles = None
        if step >= 2:
            object_types = tuple(session.step(1).confirmed_items)
        if step >= 3:
            activities = tuple(session.step(2).confirmed_items)
        if step == 3:
            titles = tuple(
                select_object_titles(
                    stats,
                    n=self.config.object_title_count,
                    min_days=self.config.object_title_min_days,
                )
            )
        if step == 4:
            objects = tuple(session.step(3).confirmed_items)
            titles = tuple(
                select_enrichment_titles(stats, n=self.config.enrichment_title_count)
            )
        return PromptContext(
            profession=session.profession,
            object_types=object_types,
            activities=activities,
            objects=objects,
            titles=titles,
        )

    def _check_order(self, session: Session, step: int) -> None:
        if step not in (1, 2, 3, 4):
            raise StepOrderViolation(f"no such step: {step}")
        if session.confirmed_prefix < step - 1:
            raise StepOrderViolation(
                f"step {step} requires steps 1..{step - 1} confirmed"
            )

    def generate(
        self, session_id: str, step: int, backend: Backend | None = None
    ) -> GenerationOutcome:
        """Run candidate generation for one step (re-runs allowed until
        the step is confirmed; an invalidated step may re-run)."""
        session = self.get(session_id)
        with self._mutation(session_id):
            self._check_order(session, step)
            state = session.step(step)
            if state.status is StepStatus.CONFIRMED:
                raise StepOrderViolation(
                    f"step {step} is confirmed; submit a new review instead of regenerating"
                )
            context = self._context(session, step)
            outcome = self._run_generation(session, step, context, backend or self.backend)
            state.generated_items = outcome.items
            state.confirmed_items = []
            state.edits = []
            state.review_sample = outcome.review_sample
            state.status = StepStatus.GENERATED
            session.records.extend(outcome.records)
            self._invalidate_downstream(session, step)
            session.updated_at = utcnow()
            self.store.save(session)
            return outcome

    def _run_generation(
        self, session: Session, step: int, context: PromptContext, backend: Backend
    ) -> GenerationOutcome:
        if step == 4 and self.config.annotation_batch_size:
            return self._run_batched_annotation(session, context, backend)
        result, record = generate_with_repair(
            step,
            context,
            backend,
            model_id=self.config.model_id,
            temperature=self.config.temperature,
        )
        sample = self._pick_review_sample(session, result.values) if step == 4 else None
        return GenerationOutcome(
            items=result.values,
            records=[record],
            warnings=result.warnings,
            review_sample=sample,
        )

    def _run_batched_annotation(
        self, session: Session, context: PromptContext, backend: Backend
    ) -> GenerationOutcome:
        size = self.config.annotation_batch_size or 0
        titles = context.titles or ()
        items: list[TitleAnnotation] = []
        records: list[GenerationRecord] = []
        warnings: list[str] = []
        for start in range(0, len(titles), size):
            chunk = replace(context, titles=titles[start : start + size])
            result, record = generate_with_repair(
                4,
                chunk,
                backend,
                model_id=self.config.model_id,
                temperature=self.config.temperature,
            )
            items.extend(result.values)
            records.append(record)
            warnings.extend(result.warnings)
        sample = self._pick_review_sample(session, items)
        return GenerationOutcome(
            items=items, records=records, warnings=warnings, review_sample=sample
        )

    def _pick_review_sample(
        self, session: Session, annotations: Sequence[TitleAnnotation]
    ) -> list[TitleAnnotation]:
        """The verification sample: non-empty annotations whose titles are
        most frequent in the log (deterministic stand-in for the manual
        sampling the workflow expects)."""
        occurrence = {s.title: s.occurrence_count for s in self._stats[session.id]}
        non_empty = [a for a in annotations if not a.is_empty]
        ranked = sorted(
            non_empty, key=lambda a: (-occurrence.get(a.title, 0), a.title)
        )
        return ranked[: self.config.review_sample_size]

    def review(
        self, session_id: str, step: int, edits: Sequence[EditAction]
    ) -> list:
        """Apply the reviewer's edit script and confirm the step."""
        session = self.get(session_id)
        with self._mutation(session_id):
            self._check_order(session, step)
            state = session.step(step)
            if state.status not in (StepStatus.GENERATED, StepStatus.CONFIRMED):
                raise StepOrderViolation(
                    f"step {step} has no generated candidates to review"
                )
            for edit in edits:
                if edit.step != step:
                    raise InvalidEdit(
                        f"edit for step {edit.step} submitted to step {step}"
                    )
            basis = state.review_sample if step == 4 else state.generated_items
            confirmed = apply_edit_script(basis or [], list(edits), codec_for_step(step))
            self._validate_confirmed(session, step, confirmed)
            state.confirmed_items = confirmed
            state.edits = list(edits)
            state.status = StepStatus.CONFIRMED
            self._invalidate_downstream(session, step)
            session.updated_at = utcnow()
            self.store.save(session)
            return confirmed

    def _validate_confirmed(self, session: Session, step: int, items: list) -> None:
        if step == 3:
            confirmed_types = {label.text for label in session.step(1).confirmed_items}
            for instance in items:
                if instance.object_type.text not in confirmed_types:
                    raise InvalidEdit(
                        f"object {instance.name!r} references unconfirmed type "
                        f"{instance.object_type.text!r}"
                    )
        if step == 4:
            confirmed_acts = {label.text for label in session.step(2).confirmed_items}
            confirmed_objects = {obj.key for obj in session.step(3).confirmed_items}
            for annotation in items:
                for label in annotation.activities:
                    if label.text not in confirmed_acts:
                        raise InvalidEdit(
                            f"{annotation.title!r}: activity {label.text!r} is not confirmed"
                        )
                for obj in annotation.objects:
                    if obj.key not in confirmed_objects:
                        raise InvalidEdit(
                            f"{annotation.title!r}: object {obj.name!r} is not confirmed"
                        )

    def _invalidate_downstream(self, session: Session, step: int) -> None:
        """Mark every later step stale after a re-confirmation or re-run;
        stale items stay readable for diffing but need a fresh generation."""
        for later in range(step + 1, 5):
            state = session.step(later)
            if state.status is not StepStatus.EMPTY:
                state.status = StepStatus.INVALIDATED

    # -- reporting ----------------------------------------------------------

    def metrics(self, session_id: str) -> list[StepMetrics]:
        session = self.get(session_id)
        rows: list[StepMetrics] = []
        for number in range(1, 5):
            state = session.step(number)
            if state.status is not StepStatus.CONFIRMED:
                continue
            if number == 4:
                generated = sum(1 for a in state.generated_items if not a.is_empty)
                basis = state.review_sample or []
            else:
                generated = len(state.generated_items)
                basis = state.generated_items
            rows.append(
                step_metrics(number, generated, basis, state.edits)
            )
        if not rows:
            raise NothingConfirmed("no step has been confirmed yet")
        return rows

    def estimate_cost(self, session_id: str) -> float:
        session = self.get(session_id)
        table = session.price_table
        if not table:
            raise MissingPriceTable("session has no price table configured")
        try:
            input_price = float(table["input_per_million"])
            output_price = float(table["output_per_million"])
        except (KeyError, TypeError, ValueError) as exc:
            raise MissingPriceTable(f"malformed price table: {exc}") from exc
        total = 0.0
        for record in session.records:
            total += record.prompt_tokens * input_price
            total += record.completion_tokens * output_price
        return total / 1_000_000

    def title_summary(self, session_id: str) -> dict:
        parsed = self.parsed_log(session_id)
        stats = self.title_stats(session_id)
        return {
            "events": len(parsed.events),
            "distinct_titles": len(stats),
            "skipped_empty_titles": parsed.skipped_empty_titles,
            "object_title_batch": len(
                select_object_titles(
                    stats,
                    n=self.config.object_title_count,
                    min_days=self.config.object_title_min_days,
                )
            ),
            "enrichment_title_batch": len(
                select_enrichment_titles(stats, n=self.config.enrichment_title_count)
            ),
        }


def metrics_table_tsv(rows: Sequence[StepMetrics]) -> str:
    """Render metrics in the shared TSV shape."""
    lines = ["step\tgenerated\tkept\tadded\tedited\tremoved\tkept_pct"]
    for row in rows:
        lines.append(
            f"{row.step}\t{row.generated}\t{row.kept_as_is}\t{row.added}"
            f"\t{row.edited}\t{row.removed}\t{row.kept_pct}"
        )
    return "\n".join(lines) + "\n"
