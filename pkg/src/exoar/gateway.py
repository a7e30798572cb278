"""Generation with a single bounded repair attempt.

When a response fails to parse, the request is re-sent once with the
parse error appended to the user text; a second failure surfaces as
ParseFailed carrying both raw responses. One attempt keeps query costs
bounded while absorbing the most common failure (chat framing around
otherwise-valid JSON).
"""

from __future__ import annotations

from dataclasses import replace

from .backends import Backend, GenerationRecord
from .errors import AllRecordsInvalid, EmptyList, ExoarError, NoJsonFound, ParseFailed
from .parsing import ParseResult, parse_annotations, parse_labels, parse_object_instances
from .prompts import PromptContext, build_prompt

PARSE_ERRORS = (NoJsonFound, EmptyList, AllRecordsInvalid)


def _parse_for_step(step: int, raw: str, context: PromptContext) -> ParseResult:
    if step == 1:
        return parse_labels(raw, kind="object type")
    if step == 2:
        return parse_labels(raw, kind="activity")
    if step == 3:
        return parse_object_instances(raw, context.object_types or ())
    return parse_annotations(
        raw,
        activities=context.activities or (),
        objects=context.objects or (),
        batch=context.titles or (),
    )


def generate_with_repair(
    step: int,
    context: PromptContext,
    backend: Backend,
    model_id: str = "gpt-4.1",
    temperature: float = 0.0,
) -> tuple[ParseResult, GenerationRecord]:
    """Run one generation for ``step``, repairing a malformed response once."""
    request = build_prompt(step, context, model_id=model_id, temperature=temperature)
    response = backend.complete(request, step=step, attempt=1)
    prompt_tokens = response.prompt_tokens
    completion_tokens = response.completion_tokens
    raw_responses = [response.text]
    try:
        result = _parse_for_step(step, response.text, context)
        attempts = 1
    except PARSE_ERRORS as first_error:
        repair_request = replace(
            request,
            user_text=(
                f"{request.user_text}\n\n"
                f"Your previous response could not be parsed ({first_error.message}). "
                "Respond again, following the output format instruction exactly."
            ),
        )
        retry = backend.complete(repair_request, step=step, attempt=2)
        prompt_tokens += retry.prompt_tokens
        completion_tokens += retry.completion_tokens
        raw_responses.append(retry.text)
        try:
            result = _parse_for_step(step, retry.text, context)
        except PARSE_ERRORS as second_error:
            raise ParseFailed(
                f"step {step} response unparseable after repair: {second_error.message}",
                raw_responses=raw_responses,
            ) from second_error
        attempts = 2
    record = GenerationRecord(
        step=step,
        request=request,
        raw_response=raw_responses[-1],
        prompt_tokens=prompt_tokens,
        completion_tokens=completion_tokens,
        attempts=attempts,
    )
    return result, record


__all__ = ["generate_with_repair", "PARSE_ERRORS", "ExoarError"]
