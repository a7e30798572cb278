"""Prompt construction for the four recognition steps.

Each step has a fixed system text (the step's instruction template) and a
user text assembled from the session context: the profession, previously
confirmed artifacts, and the title batch. A strict output-format suffix
is appended to every user text so responses can be parsed into typed
values; the exact suffix strings are part of the package's documented
interface (docs/prompts.md).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .edits import render_instance
from .errors import MissingContext
from .labels import Label, ObjectInstance


class ResponseFormat(str, Enum):
    JSON_ARRAY = "json_array"
    JSON_OBJECTS = "json_objects"


@dataclass(frozen=True)
class ChatRequest:
    """One fully rendered chat-completion request."""

    system_text: str
    user_text: str
    model_id: str
    temperature: float = 0.0
    response_format_hint: ResponseFormat = ResponseFormat.JSON_ARRAY


@dataclass(frozen=True)
class PromptContext:
    """Inputs available to a step: profession plus confirmed artifacts."""

    profession: str
    object_types: tuple[Label, ...] | None = None
    activities: tuple[Label, ...] | None = None
    objects: tuple[ObjectInstance, ...] | None = None
    titles: tuple[str, ...] | None = None


SYSTEM_TEXTS = {
    1: (
        "You are an assistant specialized in semantic object recognition. "
        "Your task is to identify high-level object types based on a user's profession. "
        "Object types represent general categories, human and non-human, and are used "
        "in object-centric event logs to group related entities.\n"
        "\n"
        "Task:\n"
        "1. Analyze the provided profession and reflect on the types of entities "
        "commonly involved in that work.\n"
        "2. Identify a list of relevant object types that could occur in the user's "
        "work processes.\n"
        "3. Focus on categories of entities, not specific instances or activities.\n"
        "\n"
        "Guidelines:\n"
        "- Output only lowercase string literals.\n"
        "- Do not include any explanation or commentary.\n"
        "- Include a broad range of object types that are reasonably relevant to the "
        "profession.\n"
        "- Ensure object types are distinct and profession-relevant.\n"
    ),
    2: (
        "You are an assistant specialized in semantic activity recognition. "
        "Your task is to identify high-level work activities based on a user's "
        "profession and relevant object types. Activities describe meaningful steps "
        "a user performs and often reflect actions in business processes.\n"
        "\n"
        "Task:\n"
        "1. Analyze the provided profession and reflect on the types of activities "
        "commonly involved in that work.\n"
        "2. Analyze the provided object types. For each, identify a set of activities "
        "that typically involve, affect, or support those object types.\n"
        "3. Generate a list of relevant activities for the provided profession and "
        "object types. Include both core and supportive tasks that are recognizable "
        "within the user's domain.\n"
        "\n"
        "Guidelines:\n"
        "- Return a list of lowercase strings.\n"
        "- Do not include explanations or additional formatting.\n"
        "- Focus on meaningful, commonly performed activities suitable for process "
        "mining.\n"
    ),
    3: (
        "You are an assistant specialized in extracting object instances from "
        "textual digital traces. Your task is to identify distinct object instances "
        "and assign them to appropriate object types. This is part of preparing "
        "structured data for object-centric process mining.\n"
        "\n"
        "Task:\n"
        "1. Analyze a list of window titles in context of a given profession, "
        "confirmed object types, and activities.\n"
        '2. Identify specific objects (e.g., "project alpha", "thesis john doe") '
        "mentioned or implied in those titles.\n"
        "3. Assign each object to the most appropriate type from the provided list.\n"
        "\n"
        "Guidelines:\n"
        "- Do not repeat objects (no duplicates).\n"
        "- Do not assign the object name to be exactly the same as its object type.\n"
        "- If the object type is a person (e.g., student, colleague), use a plausible "
        "name as object.\n"
        "- Consider abbreviations, concatenations, or project/document references in "
        "titles.\n"
        "- The result should help map interactions to real-world entities.\n"
    ),
    4: (
        "You are an assistant specialized in associating textual titles with objects "
        "and activities relevant to professional workflows. Your task is to infer "
        "meaningful semantic associations between window titles and known entities.\n"
        "\n"
        "Task:\n"
        "For each of the following window titles, determine whether it clearly "
        "relates to one or more of the given activities and one or more of the given "
        "objects. If so, return the title and its associated activities and objects. "
        "Otherwise, return only the title with empty lists.\n"
        "\n"
        "Guidelines:\n"
        "- Use your understanding of the user's profession to ground your "
        "associations.\n"
        "- Include objects and activities only if they are directly and unambiguously "
        "implied.\n"
        "- Avoid guessing or over-interpreting vague titles.\n"
    ),
}

OUTPUT_FORMAT_SUFFIXES = {
    1: (
        "Output format: respond with exactly one JSON array of lowercase strings, "
        'for example ["first object type", "second object type"]. '
        "Do not wrap the array in code fences and do not add any other text."
    ),
    2: (
        "Output format: respond with exactly one JSON array of lowercase strings, "
        'for example ["first activity", "second activity"]. '
        "Do not wrap the array in code fences and do not add any other text."
    ),
    3: (
        "Output format: respond with exactly one JSON array of objects of the shape "
        '{"object": "...", "object_type": "..."}, for example '
        '[{"object": "project alpha", "object_type": "research projects"}]. '
        "Do not wrap the array in code fences and do not add any other text."
    ),
    4: (
        "Output format: respond with exactly one JSON array containing one object "
        'per window title, each of the shape {"title": "...", "activities": ["..."], '
        '"objects": ["..."]}, where objects are referenced by name and empty lists '
        "mean no clear association. Do not wrap the array in code fences and do not "
        "add any other text."
    ),
}

RESPONSE_FORMATS = {
    1: ResponseFormat.JSON_ARRAY,
    2: ResponseFormat.JSON_ARRAY,
    3: ResponseFormat.JSON_OBJECTS,
    4: ResponseFormat.JSON_OBJECTS,
}

_REQUIRED = {
    1: (),
    2: ("object_types",),
    3: ("object_types", "activities", "titles"),
    4: ("object_types", "activities", "objects", "titles"),
}


def _label_block(heading: str, labels: Sequence[Label]) -> str:
    lines = [f"{heading}:"]
    lines.extend(f"- {label.text}" for label in labels)
    return "\n".join(lines)


def _title_block(titles: Sequence[str]) -> str:
    lines = ["window titles:"]
    lines.extend(f"{i}. {title}" for i, title in enumerate(titles, start=1))
    return "\n".join(lines)


def build_prompt(step: int, context: PromptContext, model_id: str,
                 temperature: float = 0.0) -> ChatRequest:
    """Render the ChatRequest for ``step`` from the given context.

    Deterministic: identical context yields a byte-identical request.
    Raises MissingContext when a required prior-step artifact is absent.
    """
    if step not in SYSTEM_TEXTS:
        raise MissingContext(f"no such step: {step}")
    if not context.profession.strip():
        raise MissingContext("profession is required")
    for name in _REQUIRED[step]:
        if getattr(context, name) is None:
            raise MissingContext(f"step {step} requires {name.replace('_', ' ')}")

    blocks = [f'profession: "{context.profession}"']
    if step >= 2:
        blocks.append(_label_block("object types", context.object_types or ()))
    if step >= 3:
        blocks.append(_label_block("activities", context.activities or ()))
    if step == 4:
        lines = ["objects:"]
        lines.extend(f"- {render_instance(obj)}" for obj in context.objects or ())
        blocks.append("\n".join(lines))
    if step in (3, 4):
        blocks.append(_title_block(context.titles or ()))
    blocks.append(OUTPUT_FORMAT_SUFFIXES[step])

    return ChatRequest(
        system_text=SYSTEM_TEXTS[step],
        user_text="\n\n".join(blocks),
        model_id=model_id,
        temperature=temperature,
        response_format_hint=RESPONSE_FORMATS[step],
    )
