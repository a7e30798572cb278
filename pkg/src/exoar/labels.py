"""Core vocabulary types: labels, object instances, title annotations.

Labels (object types and activities) are normalized lowercase strings.
Object instance names keep their original casing because they name
real-world entities ("Lu, X. (Xixi)" stays capitalized while its type
"colleagues" is a label).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EmptyLabel


def _collapse(text: str) -> str:
    """Trim and collapse internal whitespace runs to single spaces."""
    return " ".join(text.split())


@dataclass(frozen=True, order=True)
class Label:
    """A validated lowercase label. Construct via :func:`normalize_label`."""

    text: str

    def __post_init__(self) -> None:
        if not self.text:
            raise EmptyLabel("label text is empty")
        if self.text != _collapse(self.text).lower():
            raise ValueError(f"label text not normalized: {self.text!r}")

    def __str__(self) -> str:
        return self.text


def normalize_label(raw: str) -> Label:
    """Lowercase, trim and whitespace-collapse ``raw`` into a Label.

    Raises EmptyLabel when nothing is left after normalization.
    Idempotent: normalizing an existing label's text is a no-op.
    """
    text = _collapse(raw).lower()
    if not text:
        raise EmptyLabel(f"label is empty after normalization: {raw!r}")
    return Label(text)


@dataclass(frozen=True)
class ObjectInstance:
    """A concrete named entity bound to one object type.

    The name is case-preserving and must differ from the type name
    (case-insensitively); "courses" is not a valid name for an object of
    type "courses".
    """

    name: str
    object_type: Label

    def __post_init__(self) -> None:
        if not _collapse(self.name):
            raise ValueError("object name is empty")
        if _collapse(self.name).lower() == self.object_type.text:
            raise ValueError(
                f"object name equals its type: {self.name!r}"
            )

    @property
    def key(self) -> tuple[str, str]:
        """Identity for deduplication: (case-folded name, type)."""
        return (_collapse(self.name).lower(), self.object_type.text)


@dataclass(frozen=True)
class TitleAnnotation:
    """A window title with its associated activities and objects.

    Empty lists are legal: the title was seen but nothing could be
    unambiguously associated with it.
    """

    title: str
    activities: tuple[Label, ...] = ()
    objects: tuple[ObjectInstance, ...] = ()

    @property
    def is_empty(self) -> bool:
        return not self.activities and not self.objects


@dataclass(frozen=True)
class StepMetrics:
    """One evaluation row: what the reviewer did to a step's candidates.

    ``kept_as_is`` counts reviewed items left untouched; the basis is the
    generated list for steps 1-3 and the verified sample for step 4.
    """

    step: int
    generated: int
    kept_as_is: int
    added: int
    edited: int
    removed: int
    kept_pct: int

    def as_dict(self) -> dict:
        return {
            "step": self.step,
            "generated": self.generated,
            "kept_as_is": self.kept_as_is,
            "added": self.added,
            "edited": self.edited,
            "removed": self.removed,
            "kept_pct": self.kept_pct,
        }
