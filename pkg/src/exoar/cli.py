"""Command line interface.

``exoar run`` executes the four steps non-interactively against an edit
script and writes the session document, the metrics TSV with its figures,
the OCEL 2.0 export and a cost estimate into the output directory.
``exoar serve`` starts the HTTP service for the review UI.

Exit codes: 0 success, 2 input/parse errors, 3 step-order or edit errors,
4 LLM transport or output failures, 5 export failures.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import jsonschema

from . import report
from .backends import backend_from_spec
from .edits import parse_edit_script
from .errors import (
    AuthRejected,
    BudgetExceeded,
    DuplicateAdd,
    EditScriptError,
    EmptyFile,
    EmptyProfession,
    ExoarError,
    InvalidDocument,
    InvalidEdit,
    MalformedRow,
    NegativeCount,
    ParseFailed,
    StepOrderViolation,
    Transport,
    UnknownTarget,
)
from .ocel import (
    build_ocel_for_session,
    export_manifest,
    propagate,
    serialize_ocel,
    validate_against_schema,
)
from .session import (
    EngineConfig,
    SessionEngine,
    SessionStore,
    dump_document,
    metrics_table_tsv,
    session_to_document,
)

EXIT_PARSE = 2
EXIT_EDIT = 3
EXIT_LLM = 4
EXIT_EXPORT = 5

_PARSE_ERRORS = (MalformedRow, EmptyFile, EmptyProfession, EditScriptError)
_EDIT_ERRORS = (StepOrderViolation, UnknownTarget, DuplicateAdd, InvalidEdit, NegativeCount)
_LLM_ERRORS = (Transport, AuthRejected, BudgetExceeded, ParseFailed)
_EXPORT_ERRORS = (InvalidDocument,)


def _exit_code(error: Exception) -> int:
    if isinstance(error, _PARSE_ERRORS):
        return EXIT_PARSE
    if isinstance(error, _EDIT_ERRORS):
        return EXIT_EDIT
    if isinstance(error, _LLM_ERRORS):
        return EXIT_LLM
    if isinstance(error, _EXPORT_ERRORS) or isinstance(error, jsonschema.ValidationError):
        return EXIT_EXPORT
    return 1


def _load_prices(path: str | None) -> dict | None:
    if not path:
        return None
    return json.loads(Path(path).read_text(encoding="utf-8"))


@click.group()
@click.version_option()
def main() -> None:
    """Expert-guided object and activity recognition for AWT logs."""


@main.command()
@click.option("--profession", required=True, help="Profession entered by the user.")
@click.option(
    "--data",
    "data_path",
    required=True,
    type=click.Path(exists=True, dir_okay=False),
    help="AWT CSV file (start,end,app,title).",
)
@click.option(
    "--llm",
    "llm_spec",
    default="live",
    show_default=True,
    help="Backend: live, fixture:<dir> or replay:<dir>.",
)
@click.option(
    "--edits",
    "edits_path",
    type=click.Path(exists=True, dir_okay=False),
    help="Edit script applied during the four reviews.",
)
@click.option(
    "--out",
    "out_dir",
    required=True,
    type=click.Path(file_okay=False),
    help="Output directory for session, metrics, figures and OCEL.",
)
@click.option("--base-url", envvar="EXOAR_BASE_URL", default=None, help="Live endpoint base URL.")
@click.option("--model", envvar="EXOAR_MODEL", default="gpt-4.1", show_default=True)
@click.option("--api-key", envvar="OPENAI_API_KEY", default="", help="Key for the live backend.")
@click.option(
    "--prices",
    "prices_path",
    type=click.Path(exists=True, dir_okay=False),
    help="JSON price table {input_per_million, output_per_million}.",
)
@click.option("--batch-size", type=int, default=None, help="Optional step-4 title batch size.")
@click.option("--no-figures", is_flag=True, help="Skip rendering PNG figures.")
def run(
    profession: str,
    data_path: str,
    llm_spec: str,
    edits_path: str | None,
    out_dir: str,
    base_url: str | None,
    model: str,
    api_key: str,
    prices_path: str | None,
    batch_size: int | None,
    no_figures: bool,
) -> None:
    """Run steps 1-4 end to end, applying an edit script non-interactively."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    try:
        backend = backend_from_spec(llm_spec, api_key=api_key, base_url=base_url)
        engine = SessionEngine(
            store=SessionStore(out / "store"),
            backend=backend,
            config=EngineConfig(model_id=model, annotation_batch_size=batch_size),
            price_table=_load_prices(prices_path),
        )
        edits = parse_edit_script(
            Path(edits_path).read_text(encoding="utf-8") if edits_path else ""
        )
        session = engine.create(profession, Path(data_path).read_bytes())
        click.echo(f"session {session.id} created ({engine.title_summary(session.id)['events']} events)")

        for step in (1, 2, 3, 4):
            outcome = engine.generate(session.id, step)
            step_edits = [e for e in edits if e.step == step]
            confirmed = engine.review(session.id, step, step_edits)
            click.echo(
                f"step {step}: generated {len(outcome.items)}, "
                f"confirmed {len(confirmed)} ({len(step_edits)} edits)"
            )

        rows = engine.metrics(session.id)
        (out / "metrics.tsv").write_text(metrics_table_tsv(rows), encoding="utf-8")
        (out / "session.json").write_bytes(dump_document(session_to_document(session)))

        events = engine.parsed_log(session.id).events
        doc = build_ocel_for_session(session, events)
        body = serialize_ocel(doc)
        validate_against_schema(body)
        (out / "ocel.json").write_bytes(body)
        enriched = propagate(events, session.step(4).confirmed_items)
        manifest = export_manifest(doc, total_events=len(events), enriched_count=len(enriched))
        (out / "ocel.manifest.json").write_text(
            json.dumps(manifest, indent=2) + "\n", encoding="utf-8"
        )

        if session.price_table:
            cost = engine.estimate_cost(session.id)
            (out / "cost.txt").write_text(f"{cost:.4f}\n", encoding="utf-8")
            click.echo(f"estimated cost: {cost:.4f}")

        if not no_figures:
            report.render_step_metrics_figure(rows, out / "step_metrics.png")
            report.render_title_frequency_figure(
                engine.title_stats(session.id), out / "title_frequencies.png"
            )
        click.echo(f"OCEL written: {manifest['events']} events, {manifest['objects']} objects")
    except (ExoarError, jsonschema.ValidationError) as error:
        message = error.message if isinstance(error, ExoarError) else str(error)
        click.echo(f"error: {message}", err=True)
        sys.exit(_exit_code(error))


@main.command()
@click.option("--store", "store_dir", envvar="EXOAR_STORE", default="./sessions", show_default=True)
@click.option("--llm", "llm_spec", default="live", show_default=True)
@click.option("--base-url", envvar="EXOAR_BASE_URL", default=None)
@click.option("--model", envvar="EXOAR_MODEL", default="gpt-4.1", show_default=True)
@click.option(
    "--prices",
    "prices_path",
    type=click.Path(exists=True, dir_okay=False),
    help="JSON price table for cost estimates.",
)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--cors-origin", default=None, help="Allowed origin for the review UI.")
def serve(
    store_dir: str,
    llm_spec: str,
    base_url: str | None,
    model: str,
    prices_path: str | None,
    host: str,
    port: int,
    cors_origin: str | None,
) -> None:
    """Start the HTTP service."""
    import uvicorn

    from .api import create_app

    app = create_app(
        store_dir=store_dir,
        llm_spec=llm_spec,
        base_url=base_url,
        model_id=model,
        price_table=_load_prices(prices_path),
        cors_origin=cors_origin,
    )
    uvicorn.run(app, host=host, port=port)


@main.command("report")
@click.option("--store", "store_dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--session", "session_id", required=True)
@click.option("--out", "out_dir", required=True, type=click.Path(file_okay=False))
def report_command(store_dir: str, session_id: str, out_dir: str) -> None:
    """Re-render metrics TSV and figures for a stored session."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    try:
        engine = SessionEngine(store=SessionStore(store_dir), backend=None)  # type: ignore[arg-type]
        rows = engine.metrics(session_id)
        (out / "metrics.tsv").write_text(metrics_table_tsv(rows), encoding="utf-8")
        report.render_step_metrics_figure(rows, out / "step_metrics.png")
        report.render_title_frequency_figure(
            engine.title_stats(session_id), out / "title_frequencies.png"
        )
        click.echo(f"report written to {out}")
    except ExoarError as error:
        click.echo(f"error: {error.message}", err=True)
        sys.exit(_exit_code(error))


if __name__ == "__main__":
    main()
