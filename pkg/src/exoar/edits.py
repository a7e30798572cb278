"""Edit scripts: the replayable audit trail of a review step.

An edit script is an ordered list of add/remove/edit actions applied
sequentially to a candidate list. Scripts can be serialized to a plain
text format (one action per line) that the CLI and fixtures share:

    # comments start with '#'
    add 1 "conferences"
    remove 1 "classes"
    edit 3 "Xixi Lu @ colleagues" "Lu, X. (Xixi) @ colleagues"
    edit 4 "Inbox - Outlook" "activities: grade exams | objects: BPM Exam Remindo @ exams"

Targets and replacements are step-specific string forms handled by the
codec for that step's item kind (see LabelCodec, InstanceCodec,
AnnotationCodec).
"""

from __future__ import annotations

import shlex
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from typing import Hashable, Sequence

from .errors import (
    DuplicateAdd,
    EditScriptError,
    InvalidEdit,
    NegativeCount,
    UnknownTarget,
)
from .labels import Label, ObjectInstance, StepMetrics, TitleAnnotation, normalize_label


def utcnow() -> datetime:
    return datetime.now(timezone.utc)


class EditKind(str, Enum):
    ADD = "add"
    REMOVE = "remove"
    EDIT = "edit"


@dataclass(frozen=True)
class EditAction:
    """One reviewer action against the candidate list of a step."""

    kind: EditKind
    step: int
    target: str
    replacement: str | None = None
    timestamp: datetime = field(default_factory=utcnow, compare=False)

    def __post_init__(self) -> None:
        if self.step not in (1, 2, 3, 4):
            raise InvalidEdit(f"step must be 1..4, got {self.step}")
        if not self.target:
            raise InvalidEdit("edit target is empty")
        if self.kind is EditKind.EDIT and self.replacement is None:
            raise InvalidEdit(f"edit of {self.target!r} needs a replacement")
        if self.kind is EditKind.REMOVE and self.replacement is not None:
            raise InvalidEdit("remove takes no replacement")
        if (
            self.kind is EditKind.ADD
            and self.replacement is not None
            and self.step != 4
        ):
            raise InvalidEdit("add takes no replacement outside step 4")


# --- per-step item codecs ---------------------------------------------------
#
# A codec maps between items and the string forms used in edit scripts:
# steps 1-2 labels are their own text, step-3 instances are "Name @ type",
# step-4 annotations are addressed by title with replacement content
# "activities: a; b | objects: Name @ type; ...".

_INSTANCE_SEP = " @ "
_PART_SEP = ";"


class LabelCodec:
    """Steps 1 and 2: items are Labels, identified case-insensitively."""

    def key_of_item(self, item: Label) -> Hashable:
        return item.text

    def key_of_target(self, target: str) -> Hashable:
        return normalize_label(target).text

    def new_item(self, target: str, replacement: str | None) -> Label:
        return normalize_label(target)

    def edited_item(self, item: Label, replacement: str) -> Label:
        return normalize_label(replacement)

    def render(self, item: Label) -> str:
        return item.text


def parse_instance(text: str) -> ObjectInstance:
    """Parse the "Name @ type" string form of an object instance."""
    if _INSTANCE_SEP not in text:
        raise InvalidEdit(
            f"expected 'name{_INSTANCE_SEP}type', got {text!r}"
        )
    name, _, type_text = text.rpartition(_INSTANCE_SEP)
    name = name.strip()
    try:
        return ObjectInstance(name=name, object_type=normalize_label(type_text))
    except ValueError as exc:
        raise InvalidEdit(str(exc)) from exc


def render_instance(instance: ObjectInstance) -> str:
    return f"{instance.name}{_INSTANCE_SEP}{instance.object_type.text}"


class InstanceCodec:
    """Step 3: items are ObjectInstances written as "Name @ type"."""

    def key_of_item(self, item: ObjectInstance) -> Hashable:
        return item.key

    def key_of_target(self, target: str) -> Hashable:
        return parse_instance(target).key

    def new_item(self, target: str, replacement: str | None) -> ObjectInstance:
        return parse_instance(target)

    def edited_item(self, item: ObjectInstance, replacement: str) -> ObjectInstance:
        return parse_instance(replacement)

    def render(self, item: ObjectInstance) -> str:
        return render_instance(item)


def parse_annotation_content(title: str, content: str | None) -> TitleAnnotation:
    """Parse the replacement syntax for step-4 annotations.

    Grammar: ``[activities: a; b] [|] [objects: Name @ type; ...]`` with
    both sections optional; an empty content string yields an empty
    annotation.
    """
    activities: list[Label] = []
    objects: list[ObjectInstance] = []
    text = (content or "").strip()
    obj_part = ""
    if "objects:" in text:
        text, _, obj_part = text.partition("objects:")
        text = text.strip()
    if text.endswith("|"):
        text = text[:-1].strip()
    if text:
        if not text.startswith("activities:"):
            raise InvalidEdit(
                f"annotation content must start with 'activities:' or 'objects:', got {text!r}"
            )
        for chunk in text[len("activities:") :].split(_PART_SEP):
            if chunk.strip():
                activities.append(normalize_label(chunk))
    for chunk in obj_part.split(_PART_SEP):
        if chunk.strip():
            objects.append(parse_instance(chunk.strip()))
    return TitleAnnotation(
        title=title, activities=tuple(activities), objects=tuple(objects)
    )


def render_annotation_content(annotation: TitleAnnotation) -> str:
    acts = f"{_PART_SEP} ".join(a.text for a in annotation.activities)
    objs = f"{_PART_SEP} ".join(render_instance(o) for o in annotation.objects)
    return f"activities: {acts} | objects: {objs}"


class AnnotationCodec:
    """Step 4: items are TitleAnnotations addressed by their exact title."""

    def key_of_item(self, item: TitleAnnotation) -> Hashable:
        return item.title

    def key_of_target(self, target: str) -> Hashable:
        return target

    def new_item(self, target: str, replacement: str | None) -> TitleAnnotation:
        return parse_annotation_content(target, replacement)

    def edited_item(self, item: TitleAnnotation, replacement: str) -> TitleAnnotation:
        return parse_annotation_content(item.title, replacement)

    def render(self, item: TitleAnnotation) -> str:
        return item.title


CODECS = {1: LabelCodec(), 2: LabelCodec(), 3: InstanceCodec(), 4: AnnotationCodec()}


def codec_for_step(step: int):
    return CODECS[step]


# --- applying scripts -------------------------------------------------------


def apply_edit_script(items: Sequence, edits: Sequence[EditAction], codec) -> list:
    """Apply ``edits`` sequentially to ``items`` and return the result.

    Order is preserved: removals drop in place, edits replace in place,
    additions append. Raises UnknownTarget for a remove/edit whose target
    is absent and DuplicateAdd when an add (or a duplicate-creating edit)
    would introduce an item already present.
    """
    out = list(items)
    keys = [codec.key_of_item(item) for item in out]
    for action in edits:
        if action.kind is EditKind.ADD:
            item = codec.new_item(action.target, action.replacement)
            key = codec.key_of_item(item)
            if key in keys:
                raise DuplicateAdd(f"already present: {action.target!r}")
            out.append(item)
            keys.append(key)
        elif action.kind is EditKind.REMOVE:
            key = codec.key_of_target(action.target)
            if key not in keys:
                raise UnknownTarget(f"no such item: {action.target!r}")
            idx = keys.index(key)
            del out[idx]
            del keys[idx]
        else:
            key = codec.key_of_target(action.target)
            if key not in keys:
                raise UnknownTarget(f"no such item: {action.target!r}")
            idx = keys.index(key)
            new_item = codec.edited_item(out[idx], action.replacement or "")
            new_key = codec.key_of_item(new_item)
            if new_key != key and new_key in keys:
                raise DuplicateAdd(
                    f"edit of {action.target!r} collides with an existing item"
                )
            out[idx] = new_item
            keys[idx] = new_key
    return out


def classify_dispositions(
    basis: Sequence, edits: Sequence[EditAction], codec
) -> tuple[int, int, int, int]:
    """Partition the reviewed basis into (kept, edited, removed) plus net adds.

    Identity is tracked through renames, so an item edited twice counts
    once and an item edited then removed counts as removed. Additions
    that are later removed cancel out.
    """
    state: dict[Hashable, tuple[str, bool]] = {
        codec.key_of_item(item): ("basis", False) for item in basis
    }
    removed = 0
    for action in edits:
        if action.kind is EditKind.ADD:
            key = codec.key_of_item(codec.new_item(action.target, action.replacement))
            if key in state:
                raise DuplicateAdd(f"already present: {action.target!r}")
            state[key] = ("added", False)
        elif action.kind is EditKind.REMOVE:
            key = codec.key_of_target(action.target)
            if key not in state:
                raise UnknownTarget(f"no such item: {action.target!r}")
            origin, _ = state.pop(key)
            if origin == "basis":
                removed += 1
        else:
            key = codec.key_of_target(action.target)
            if key not in state:
                raise UnknownTarget(f"no such item: {action.target!r}")
            origin, _ = state.pop(key)
            # re-keying is fine; a collision would have failed apply_edit_script
            new_key = codec.key_of_item(_edited_key_item(codec, action))
            state[new_key] = (origin, True)
    kept = sum(1 for origin, touched in state.values() if origin == "basis" and not touched)
    edited = sum(1 for origin, touched in state.values() if origin == "basis" and touched)
    added = sum(1 for origin, _ in state.values() if origin == "added")
    return kept, edited, removed, added


def _edited_key_item(codec, action: EditAction):
    if isinstance(codec, AnnotationCodec):
        # edits never re-title an annotation
        return TitleAnnotation(title=action.target)
    return codec.new_item(action.replacement or "", None)


def step_metrics(
    step: int,
    generated_count: int,
    basis: Sequence,
    edits: Sequence[EditAction],
    codec=None,
    review_basis: int | None = None,
) -> StepMetrics:
    """Compute the evaluation row for one reviewed step.

    ``basis`` is the reviewed list (generated candidates for steps 1-3,
    the verified sample for step 4); ``review_basis`` overrides its size
    when metrics are computed from counts alone.
    """
    codec = codec or codec_for_step(step)
    kept, edited, removed, added = classify_dispositions(basis, edits, codec)
    size = len(basis) if review_basis is None else review_basis
    kept = size - edited - removed
    if kept < 0:
        raise NegativeCount(
            f"step {step}: {edited} edits + {removed} removals exceed basis {size}"
        )
    pct = int(100 * kept / size + 0.5) if size else 0
    return StepMetrics(
        step=step,
        generated=generated_count,
        kept_as_is=kept,
        added=added,
        edited=edited,
        removed=removed,
        kept_pct=pct,
    )


# --- script file format ------------------------------------------------------


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def serialize_edit_script(edits: Sequence[EditAction]) -> str:
    lines = []
    for action in edits:
        parts = [action.kind.value, str(action.step), _quote(action.target)]
        if action.replacement is not None:
            parts.append(_quote(action.replacement))
        lines.append(" ".join(parts))
    return "\n".join(lines) + ("\n" if lines else "")


def parse_edit_script(text: str) -> list[EditAction]:
    """Parse the one-action-per-line script format. '#' starts a comment."""
    actions: list[EditAction] = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            tokens = shlex.split(line, comments=True, posix=True)
        except ValueError as exc:
            raise EditScriptError(f"line {line_no}: {exc}") from exc
        if not tokens:
            continue
        if tokens[0] not in (k.value for k in EditKind):
            raise EditScriptError(
                f"line {line_no}: unknown action {tokens[0]!r}"
            )
        if len(tokens) < 3 or len(tokens) > 4:
            raise EditScriptError(
                f"line {line_no}: expected '<kind> <step> \"<target>\" [\"<replacement>\"]'"
            )
        try:
            step = int(tokens[1])
        except ValueError as exc:
            raise EditScriptError(f"line {line_no}: bad step {tokens[1]!r}") from exc
        replacement = tokens[3] if len(tokens) == 4 else None
        try:
            actions.append(
                EditAction(
                    kind=EditKind(tokens[0]),
                    step=step,
                    target=tokens[2],
                    replacement=replacement,
                )
            )
        except InvalidEdit as exc:
            raise EditScriptError(f"line {line_no}: {exc.message}") from exc
    return actions
