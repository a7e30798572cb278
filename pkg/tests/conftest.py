"""Shared test helpers: fixture paths, scripted runs, tiny log builders."""

from __future__ import annotations

from pathlib import Path

import pytest

from exoar.backends import ChatResponse, FixtureBackend
from exoar.edits import parse_edit_script
from exoar.session import EngineConfig, SessionEngine, SessionStore

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURES = REPO_ROOT / "fixtures"
WALKTHROUGH = FIXTURES / "walkthrough"
EVALUATION = FIXTURES / "evaluation"

GPT41_PRICES = {"input_per_million": 2.0, "output_per_million": 8.0}

PROFESSIONS = {
    "academic_a": "Academic staff",
    "academic_b": "Academic staff",
    "bookkeeper": "Bookkeeper",
    "business_advisor": "Self-employed business advisor",
}


class ScriptedBackend:
    """Serves a fixed sequence of responses, one per complete() call."""

    def __init__(self, responses: list[str]) -> None:
        self.responses = list(responses)
        self.calls: list[tuple[int, int]] = []

    def complete(self, request, step: int, attempt: int) -> ChatResponse:
        self.calls.append((step, attempt))
        if not self.responses:
            raise AssertionError("scripted backend exhausted")
        return ChatResponse(text=self.responses.pop(0), prompt_tokens=10, completion_tokens=5)


def make_csv(rows: list[tuple[str, str, str, str]]) -> bytes:
    """Rows of (start, end, app, title) into canonical AWT CSV bytes."""

    def field(text: str) -> str:
        if any(ch in text for ch in ',"\n'):
            return '"' + text.replace('"', '""') + '"'
        return text

    lines = ["start,end,app,title"]
    for start, end, app, title in rows:
        lines.append(f"{start},{end},{field(app)},{field(title)}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def run_scripted(
    fixture_dir: Path,
    profession: str,
    store_dir: Path,
    price_table: dict | None = None,
    config: EngineConfig | None = None,
):
    """Replay a fixture directory's responses and edit script end to end."""
    engine = SessionEngine(
        store=SessionStore(store_dir),
        backend=FixtureBackend(fixture_dir / "responses"),
        config=config or EngineConfig(),
        price_table=price_table,
    )
    edits = parse_edit_script((fixture_dir / "edits.txt").read_text(encoding="utf-8"))
    session = engine.create(profession, (fixture_dir / "awt.csv").read_bytes())
    for step in (1, 2, 3, 4):
        engine.generate(session.id, step)
        engine.review(session.id, step, [e for e in edits if e.step == step])
    return engine, session


@pytest.fixture
def walkthrough_session(tmp_path):
    engine, session = run_scripted(
        WALKTHROUGH, "Academic staff", tmp_path / "store", price_table=GPT41_PRICES
    )
    return engine, session
