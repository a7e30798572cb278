#!/usr/bin/env python3
"""Regenerate the fixture trees under fixtures/.

Everything here is deterministic: fixed title lists, fixed counts, fixed
response payloads. The walkthrough fixture mirrors the canonical academic
demo session (13 -> 11 object types, 20 -> 24 activities, 58 -> 39
objects, 10 verified annotations); the evaluation fixtures reproduce the
four participants' review counts with synthetic content.

Run from the repository root:  python3 scripts/make_fixtures.py
"""

from __future__ import annotations

import json
import sys
from datetime import datetime, timedelta, timezone
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"


def quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def csv_field(text: str) -> str:
    if any(ch in text for ch in ',"\n'):
        return '"' + text.replace('"', '""') + '"'
    return text


def write_awt_csv(path: Path, titles: list[tuple[str, str, int, int]]) -> None:
    """titles: (title, app, occurrence_count, distinct_days). April 2025."""
    rows = []
    for index, (title, app, count, days) in enumerate(titles):
        day_base = (index * 3) % 26 + 1
        day_list = [day_base + d for d in range(days)]
        for k in range(count):
            day = day_list[k % days]
            hour = 8 + (index + k) % 9
            minute = (index * 7 + k * 11) % 60
            start = datetime(2025, 4, day, hour, minute, tzinfo=timezone.utc)
            end = start + timedelta(seconds=180 + (k % 5) * 60)
            rows.append((start, end, app, title))
    rows.sort(key=lambda r: (r[0], r[3]))
    lines = ["start,end,app,title"]
    for start, end, app, title in rows:
        lines.append(
            f"{start.isoformat().replace('+00:00', 'Z')},"
            f"{end.isoformat().replace('+00:00', 'Z')},"
            f"{csv_field(app)},{csv_field(title)}"
        )
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_json_response(path: Path, payload) -> None:
    path.write_text(json.dumps(payload, indent=2, ensure_ascii=False) + "\n", "utf-8")


def write_usage(path: Path, usage: dict[tuple[int, int], tuple[int, int]]) -> None:
    lines = ["step\tattempt\tprompt_tokens\tcompletion_tokens"]
    for (step, attempt), (prompt_tokens, completion_tokens) in sorted(usage.items()):
        lines.append(f"{step}\t{attempt}\t{prompt_tokens}\t{completion_tokens}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------
# Walkthrough fixture
# ---------------------------------------------------------------------------

WALKTHROUGH_TYPES = [
    "students", "courses", "assignments", "exams", "publications",
    "research projects", "grants", "committees", "departments", "colleagues",
    "classes", "grades", "administrators",
]

WALKTHROUGH_ACTIVITIES = [
    "prepare lectures", "supervise students", "collaborate with colleagues",
    "grade exams", "design exams", "review publications", "write publications",
    "manage research projects", "attend conferences", "present at conferences",
    "organize conferences", "coordinate with departments",
    "participate in committees", "apply for grants", "teach courses",
    "develop course materials", "supervise theses", "review student submissions",
    "attend seminars", "plan research studies",
]

# (generated name, generated type) kept untouched by the review - 23 entries
WALKTHROUGH_OBJECTS_KEPT = [
    ("Jansen, M. (Marieke)", "colleagues"),
    ("Visser, T. (Tom)", "colleagues"),
    ("de Vries, A. (Anna)", "colleagues"),
    ("van Dijk, K. (Karin)", "colleagues"),
    ("Smit, L. (Lotte)", "students"),
    ("Process Modelling", "courses"),
    ("Data Analytics", "courses"),
    ("BPM assignment 2", "assignments"),
    ("Process Modelling assignment 1", "assignments"),
    ("BPM Exam Remindo", "exams"),
    ("CoopIS 2024 camera-ready", "publications"),
    ("Deviation mining survey", "publications"),
    ("Process querying chapter", "publications"),
    ("CoopIS 2024", "conferences"),
    ("BPM 2025", "conferences"),
    ("EDOC 2025", "conferences"),
    ("CAiSE 2026", "conferences"),
    ("ICPM 2024", "conferences"),
    ("RCIS 2025", "conferences"),
    ("ECIS 2026", "conferences"),
    ("AWT2OCEL", "research projects"),
    ("Process Data Quality project", "research projects"),
    ("Reference models repository", "research projects"),
]

# (generated name, final name, type) - 10 name edits
WALKTHROUGH_NAME_EDITS = [
    ("Hajo Reijers", "Reijers, H.A. (Hajo)", "colleagues"),
    ("Xixi Lu", "Lu, X. (Xixi)", "colleagues"),
    ("Vinicius Stein Dani", "Stein Dani, V. (Vinicius)", "colleagues"),
    ("BPM", "BPM (Business Process Management)", "courses"),
    ("Interstellar", "Interstellar paper", "publications"),
    ("ICPM", "ICPM 2025 (7th International Conference on Process Mining)", "conferences"),
    ("Process Mining Camp", "Process Mining Camp 2025", "conferences"),
    ("ICS", "Department of ... (ICS)", "departments"),
    ("Interstellar Dagstuhl", "Interstellar Dagstuhl team", "research projects"),
    ("DWO", "Digital Work Observatory", "research projects"),
]

# (name, generated type, final type) - 6 type edits
WALKTHROUGH_TYPE_EDITS = [
    ("Bakker, J. (Jelle)", "colleagues", "students"),
    ("Process Mining Summer School", "courses", "conferences"),
    ("WI25", "conferences", "committees"),
    ("Examination board", "departments", "committees"),
    ("AI Lab", "departments", "research projects"),
    ("Healthcare pathways article", "research projects", "publications"),
]

# (generated name, generated type) discarded as duplicate/irrelevant - 19
WALKTHROUGH_REMOVALS = [
    ("Hajo", "colleagues"),
    ("Xixi", "colleagues"),
    ("Vinicius", "colleagues"),
    ("Academic Staff Member", "colleagues"),
    ("Student thesis", "students"),
    ("Lecture Slides", "courses"),
    ("Email Inbox", "assignments"),
    ("BPM exam", "exams"),
    ("Grading sheet", "exams"),
    ("Word document", "publications"),
    ("ICPM conference", "conferences"),
    ("CoopIS", "conferences"),
    ("Camp 2025", "conferences"),
    ("April calendar", "committees"),
    ("Utrecht University", "departments"),
    ("Faculty of Science", "departments"),
    ("Interstellar project", "research projects"),
    ("Microsoft Teams", "research projects"),
    ("Research data", "research projects"),
]

SAMPLE_TITLES = [
    ("Chat | Lu, X. (Xixi) | Microsoft Teams", "Teams"),
    ("Chat | Stein Dani, V. (Vinicius) | Microsoft Teams", "Teams"),
    ("ICS staff meeting - agenda.docx - Word", "Word"),
    ("AWT2OCEL - analysis.ipynb - Chrome", "Chrome"),
    ("BPM Exam Remindo - grading overview - Remindo", "Remindo"),
    ("Process Mining Camp 2025 - programme - Chrome", "Chrome"),
    ("Interstellar - Dagstuhl follow-up.docx - Word", "Word"),
    ("AI Lab coordination - Outlook", "Outlook"),
    ("WI25 committee - review assignments - Chrome", "Chrome"),
    ("BPM Exam Remindo - question bank - Remindo", "Remindo"),
]

EXTRA_ANNOTATED_TITLES = [
    ("Lecture 5 - Process Modelling.pptx - PowerPoint", "PowerPoint"),
    ("Thesis draft - Smit, L. (Lotte).docx - Word", "Word"),
    ("BPM assignment 2 - feedback.xlsx - Excel", "Excel"),
    ("CAiSE 2026 - call for papers - Chrome", "Chrome"),
]

FILLER_PATTERNS = [
    ("Word", "Notes {i:03d}.docx - Word"),
    ("Outlook", "Inbox item {i:03d} - Outlook"),
    ("Chrome", "Search results {i:03d} - Chrome"),
    ("Excel", "Data sheet {i:03d}.xlsx - Excel"),
    ("Overleaf", "Draft section {i:03d} - Overleaf"),
    ("Zoom", "Meeting {i:03d} - Zoom"),
]

# generated (pre-review) sample annotations: title index -> (activities, object names)
SAMPLE_GENERATED = {
    0: (["collaborate with colleagues", "review publications"], ["Lu, X. (Xixi)"]),
    1: (["collaborate with colleagues"], ["Stein Dani, V. (Vinicius)"]),
    2: (["collaborate with colleagues"], ["Reijers, H.A. (Hajo)", "Department of ... (ICS)"]),
    3: (["manage research projects"], ["AWT2OCEL"]),
    4: (["design exams"], ["BPM Exam Remindo"]),
    5: (
        ["attend conferences", "present at conferences", "organize conferences"],
        ["Process Mining Camp 2025"],
    ),
    6: (["manage research projects"], ["Interstellar paper"]),
    7: (["coordinate with departments"], ["Department of ... (ICS)"]),
    8: (["participate in committees"], ["WI25"]),
    9: (["design exams", "grade exams"], ["BPM Exam Remindo"]),
}

EXTRA_GENERATED = {
    10: (["prepare lectures"], ["Process Modelling"]),
    11: (["supervise students", "supervise theses"], ["Smit, L. (Lotte)"]),
    12: (["review student submissions"], ["BPM assignment 2"]),
    13: (["write publications"], ["CAiSE 2026"]),
}


def walkthrough_titles() -> list[tuple[str, str, int, int]]:
    """120 titles: counts strictly decreasing, first 80 span >= 3 days."""
    named = SAMPLE_TITLES + EXTRA_ANNOTATED_TITLES
    titles = []
    for index in range(120):
        if index < len(named):
            title, app = named[index]
        else:
            app, pattern = FILLER_PATTERNS[index % len(FILLER_PATTERNS)]
            title = pattern.format(i=index + 1)
        count = 124 - index
        days = 5 if index < 80 else 2
        titles.append((title, app, count, min(days, count)))
    return titles


def walkthrough_step3_response() -> list[dict]:
    records = []
    for name, final, type_text in WALKTHROUGH_NAME_EDITS[:3]:
        records.append({"object": name, "object_type": type_text})
    for name, type_text in WALKTHROUGH_OBJECTS_KEPT[:5]:
        records.append({"object": name, "object_type": type_text})
    records.append({"object": "Bakker, J. (Jelle)", "object_type": "colleagues"})
    for name, type_text in WALKTHROUGH_REMOVALS[:5]:
        records.append({"object": name, "object_type": type_text})
    # remaining groups in generation order
    done = {(r["object"], r["object_type"]) for r in records}
    for name, final, type_text in WALKTHROUGH_NAME_EDITS[3:]:
        records.append({"object": name, "object_type": type_text})
    for name, gen_type, _final in WALKTHROUGH_TYPE_EDITS[1:]:
        records.append({"object": name, "object_type": gen_type})
    for name, type_text in WALKTHROUGH_OBJECTS_KEPT[5:]:
        records.append({"object": name, "object_type": type_text})
    for name, type_text in WALKTHROUGH_REMOVALS[5:]:
        records.append({"object": name, "object_type": type_text})
    assert len(records) == 58, len(records)
    keys = {(r["object"].lower(), r["object_type"]) for r in records}
    assert len(keys) == 58, "duplicate (name, type) pair in step-3 fixture"
    return records


def walkthrough_step4_response(titles: list[tuple[str, str, int, int]]) -> list[dict]:
    annotated = {**SAMPLE_GENERATED, **EXTRA_GENERATED}
    records = []
    for index in range(100):  # batch = top 100 titles by count = first 100
        title = titles[index][0]
        acts, objs = annotated.get(index, ([], []))
        records.append({"title": title, "activities": acts, "objects": objs})
    return records


def walkthrough_edit_script() -> str:
    lines = ["# Canonical academic walkthrough review script", ""]
    lines.append("# step 1: one addition, three removals")
    lines.append(f'add 1 {quote("conferences")}')
    for label in ("classes", "grades", "administrators"):
        lines.append(f"remove 1 {quote(label)}")
    lines.append("")
    lines.append("# step 2: four additional activities")
    for label in (
        "attend department meetings",
        "prepare for committee meetings",
        "develop assignments",
        "analyze research data",
    ):
        lines.append(f"add 2 {quote(label)}")
    lines.append("")
    lines.append("# step 3: 10 name edits, 6 type edits, 19 removals (58 -> 39)")
    for generated, final, type_text in WALKTHROUGH_NAME_EDITS:
        lines.append(
            f"edit 3 {quote(f'{generated} @ {type_text}')} {quote(f'{final} @ {type_text}')}"
        )
    for name, gen_type, final_type in WALKTHROUGH_TYPE_EDITS:
        lines.append(
            f"edit 3 {quote(f'{name} @ {gen_type}')} {quote(f'{name} @ {final_type}')}"
        )
    for name, type_text in WALKTHROUGH_REMOVALS:
        lines.append(f"remove 3 {quote(f'{name} @ {type_text}')}")
    lines.append("")
    lines.append("# step 4: six of the ten sampled events are refined")
    step4_edits = [
        (
            "ICS staff meeting - agenda.docx - Word",
            "activities: collaborate with colleagues; attend department meetings | "
            "objects: Reijers, H.A. (Hajo) @ colleagues; Department of ... (ICS) @ departments",
        ),
        (
            "AWT2OCEL - analysis.ipynb - Chrome",
            "activities: manage research projects; analyze research data | "
            "objects: AWT2OCEL @ research projects",
        ),
        (
            "BPM Exam Remindo - grading overview - Remindo",
            "activities: grade exams | objects: BPM Exam Remindo @ exams",
        ),
        (
            "Process Mining Camp 2025 - programme - Chrome",
            "activities: attend conferences; present at conferences | "
            "objects: Process Mining Camp 2025 @ conferences",
        ),
        (
            "Interstellar - Dagstuhl follow-up.docx - Word",
            "activities: manage research projects | "
            "objects: Interstellar paper @ publications; Interstellar Dagstuhl team @ research projects",
        ),
        (
            "AI Lab coordination - Outlook",
            "activities: coordinate with departments | "
            "objects: Department of ... (ICS) @ departments; AI Lab @ research projects",
        ),
    ]
    for target, replacement in step4_edits:
        lines.append(f"edit 4 {quote(target)} {quote(replacement)}")
    return "\n".join(lines) + "\n"


def make_walkthrough() -> None:
    base = FIXTURES / "walkthrough"
    responses = base / "responses"
    responses.mkdir(parents=True, exist_ok=True)

    titles = walkthrough_titles()
    write_awt_csv(base / "awt.csv", titles)

    write_json_response(responses / "step1_attempt1.txt", WALKTHROUGH_TYPES)
    write_json_response(responses / "step2_attempt1.txt", WALKTHROUGH_ACTIVITIES)
    write_json_response(responses / "step3_attempt1.txt", walkthrough_step3_response())
    write_json_response(responses / "step4_attempt1.txt", walkthrough_step4_response(titles))
    # usage chosen so the gpt-4.1 price table yields exactly 0.08
    write_usage(
        responses / "usage.tsv",
        {
            (1, 1): (150, 120),
            (2, 1): (350, 180),
            (3, 1): (14500, 1200),
            (4, 1): (15000, 1000),
        },
    )
    (base / "edits.txt").write_text(walkthrough_edit_script(), encoding="utf-8")


# ---------------------------------------------------------------------------
# Evaluation fixtures
# ---------------------------------------------------------------------------

ACADEMIC_TYPES_11 = [
    "students", "courses", "assignments", "exams", "publications",
    "research projects", "grants", "committees", "departments", "colleagues",
    "conferences",
]

ACADEMIC_ACTIVITIES_24 = WALKTHROUGH_ACTIVITIES + [
    "attend department meetings", "prepare for committee meetings",
    "develop assignments", "analyze research data",
]

BOOKKEEPER_TYPES_14 = [
    "clients", "invoices", "receipts", "bank accounts", "ledgers",
    "tax filings", "payroll runs", "suppliers", "purchase orders",
    "financial statements", "budgets", "expense claims", "contracts", "audits",
]

BOOKKEEPER_ACTIVITIES_15 = [
    "record invoices", "reconcile bank statements", "prepare tax filings",
    "process payroll", "manage client accounts", "review receipts",
    "prepare financial statements", "track expenses", "send payment reminders",
    "file vat returns", "maintain ledgers", "process purchase orders",
    "draft budgets", "correspond with clients", "archive documents",
]

ADVISOR_TYPES_15 = [
    "clients", "proposals", "contracts", "invoices", "workshops", "reports",
    "marketing campaigns", "partners", "leads", "projects", "presentations",
    "trainings", "networks", "publications", "tenders",
]

ADVISOR_ACTIVITIES_20 = [
    "advise clients", "prepare proposals", "draft contracts", "send invoices",
    "run workshops", "write reports", "plan marketing campaigns",
    "meet partners", "follow up leads", "manage projects",
    "prepare presentations", "deliver trainings", "maintain network",
    "publish articles", "respond to tenders", "review financials",
    "schedule meetings", "update website", "negotiate fees", "travel to clients",
]

# Expected per-step metrics rows for each participant session. The
# academic_a objects row diverges from the published summary (which does
# not sum: 42 kept + 5 edited + 18 removed != 60 generated); this fixture
# uses the self-consistent 37 kept (62%) documented in fixtures/README.md.
EXPECTED_METRICS = {
    "academic_a": [
        {"step": 1, "generated": 11, "kept_as_is": 11, "added": 1, "edited": 0, "removed": 0, "kept_pct": 100},
        {"step": 2, "generated": 24, "kept_as_is": 24, "added": 2, "edited": 0, "removed": 0, "kept_pct": 100},
        {"step": 3, "generated": 60, "kept_as_is": 37, "added": 0, "edited": 5, "removed": 18, "kept_pct": 62},
        {"step": 4, "generated": 23, "kept_as_is": 3, "added": 0, "edited": 7, "removed": 0, "kept_pct": 30},
    ],
    "academic_b": [
        {"step": 1, "generated": 11, "kept_as_is": 11, "added": 0, "edited": 0, "removed": 0, "kept_pct": 100},
        {"step": 2, "generated": 24, "kept_as_is": 24, "added": 2, "edited": 0, "removed": 0, "kept_pct": 100},
        {"step": 3, "generated": 50, "kept_as_is": 48, "added": 0, "edited": 0, "removed": 2, "kept_pct": 96},
        {"step": 4, "generated": 18, "kept_as_is": 5, "added": 0, "edited": 4, "removed": 1, "kept_pct": 50},
    ],
    "bookkeeper": [
        {"step": 1, "generated": 14, "kept_as_is": 13, "added": 1, "edited": 0, "removed": 1, "kept_pct": 93},
        {"step": 2, "generated": 15, "kept_as_is": 15, "added": 0, "edited": 0, "removed": 0, "kept_pct": 100},
        {"step": 3, "generated": 83, "kept_as_is": 56, "added": 0, "edited": 8, "removed": 19, "kept_pct": 67},
        {"step": 4, "generated": 28, "kept_as_is": 8, "added": 0, "edited": 1, "removed": 1, "kept_pct": 80},
    ],
    "business_advisor": [
        {"step": 1, "generated": 15, "kept_as_is": 15, "added": 2, "edited": 0, "removed": 0, "kept_pct": 100},
        {"step": 2, "generated": 20, "kept_as_is": 18, "added": 0, "edited": 0, "removed": 2, "kept_pct": 90},
        {"step": 3, "generated": 55, "kept_as_is": 41, "added": 0, "edited": 9, "removed": 5, "kept_pct": 75},
        {"step": 4, "generated": 52, "kept_as_is": 7, "added": 0, "edited": 3, "removed": 0, "kept_pct": 70},
    ],
}

PARTICIPANTS = {
    "academic_a": {
        "profession": "Academic staff",
        "types": ACADEMIC_TYPES_11,
        "type_edits": {"add": ["reviews"], "remove": []},
        "activities": ACADEMIC_ACTIVITIES_24,
        "activity_edits": {"add": ["hire staff", "develop software"], "remove": []},
        "object_count": 60,
        "object_name_edits": 5,
        "object_removals": 18,
        "object_stems": [
            ("Course portfolio", "courses"),
            ("Manuscript", "publications"),
            ("Symposium", "conferences"),
            ("Project dossier", "research projects"),
            ("Committee file", "committees"),
        ],
        "annotated": 23,
        "event_edits": 7,
        "event_removals": 0,
    },
    "academic_b": {
        "profession": "Academic staff",
        "types": ACADEMIC_TYPES_11,
        "type_edits": {"add": [], "remove": []},
        "activities": ACADEMIC_ACTIVITIES_24,
        "activity_edits": {"add": ["attend project meetings", "advise employees"], "remove": []},
        "object_count": 50,
        "object_name_edits": 0,
        "object_removals": 2,
        "object_stems": [
            ("Seminar series", "courses"),
            ("Journal draft", "publications"),
            ("Workshop", "conferences"),
            ("Grant dossier", "grants"),
            ("Lab meeting file", "research projects"),
        ],
        "annotated": 18,
        "event_edits": 4,
        "event_removals": 1,
    },
    "bookkeeper": {
        "profession": "Bookkeeper",
        "types": BOOKKEEPER_TYPES_14,
        "type_edits": {"add": ["subsidies"], "remove": ["audits"]},
        "activities": BOOKKEEPER_ACTIVITIES_15,
        "activity_edits": {"add": [], "remove": []},
        "object_count": 83,
        "object_name_edits": 8,
        "object_removals": 19,
        "object_stems": [
            ("Client", "clients"),
            ("Invoice 2025-", "invoices"),
            ("Supplier", "suppliers"),
            ("Ledger", "ledgers"),
            ("VAT filing Q", "tax filings"),
        ],
        "annotated": 28,
        "event_edits": 1,
        "event_removals": 1,
    },
    "business_advisor": {
        "profession": "Self-employed business advisor",
        "types": ADVISOR_TYPES_15,
        "type_edits": {"add": ["retainers", "referrals"], "remove": []},
        "activities": ADVISOR_ACTIVITIES_20,
        "activity_edits": {"add": [], "remove": ["update website", "travel to clients"]},
        "object_count": 55,
        "object_name_edits": 9,
        "object_removals": 5,
        "object_stems": [
            ("Client file", "clients"),
            ("Proposal", "proposals"),
            ("Workshop plan", "workshops"),
            ("Quarterly report", "reports"),
            ("Engagement", "projects"),
        ],
        "annotated": 52,
        "event_edits": 3,
        "event_removals": 0,
    },
}


def participant_objects(spec: dict) -> tuple[list[dict], list[tuple[str, str, str]], list[tuple[str, str]]]:
    """Returns (generated records, name edits as (gen, final, type), removals)."""
    total = spec["object_count"]
    edits = spec["object_name_edits"]
    removals = spec["object_removals"]
    kept = total - edits - removals
    stems = spec["object_stems"]
    records: list[dict] = []
    name_edits: list[tuple[str, str, str]] = []
    removal_keys: list[tuple[str, str]] = []
    for i in range(total):
        stem, type_text = stems[i % len(stems)]
        base_name = f"{stem} {i + 1:02d}"
        if i < edits:
            generated = f"{base_name} (draft)"
            name_edits.append((generated, base_name, type_text))
            records.append({"object": generated, "object_type": type_text})
        elif i < edits + kept:
            records.append({"object": base_name, "object_type": type_text})
        else:
            name = f"Duplicate entry {i + 1:02d}"
            removal_keys.append((name, type_text))
            records.append({"object": name, "object_type": type_text})
    return records, name_edits, removal_keys


def participant_titles(spec: dict, confirmed_names: list[tuple[str, str]]) -> list[tuple[str, str, int, int]]:
    """110 titles; the first ``annotated`` reference confirmed objects."""
    annotated = spec["annotated"]
    apps = ["Excel", "Word", "Outlook", "Chrome", "Teams"]
    titles = []
    for i in range(110):
        app = apps[i % len(apps)]
        if i < annotated:
            name = confirmed_names[i % len(confirmed_names)][0]
            title = f"{name} - working file {i + 1:02d} - {app}"
        else:
            title = f"Reference note {i + 1:03d} - {app}"
        count = 220 - i
        titles.append((title, app, count, 4))
    return titles


def make_participant(key: str, spec: dict) -> None:
    base = FIXTURES / "evaluation" / key
    responses = base / "responses"
    responses.mkdir(parents=True, exist_ok=True)

    write_json_response(responses / "step1_attempt1.txt", spec["types"])
    write_json_response(responses / "step2_attempt1.txt", spec["activities"])

    records, name_edits, removal_keys = participant_objects(spec)
    write_json_response(responses / "step3_attempt1.txt", records)

    # confirmed objects after the scripted review, in post-edit order
    confirmed: list[tuple[str, str]] = []
    removal_set = set(removal_keys)
    edited_by_generated = {gen: (final, t) for gen, final, t in name_edits}
    for record in records:
        pair = (record["object"], record["object_type"])
        if pair in removal_set:
            continue
        if record["object"] in edited_by_generated:
            confirmed.append(edited_by_generated[record["object"]])
        else:
            confirmed.append(pair)

    titles = participant_titles(spec, confirmed)
    write_awt_csv(base / "awt.csv", titles)

    confirmed_activities = [
        a for a in spec["activities"] if a not in spec["activity_edits"]["remove"]
    ] + spec["activity_edits"]["add"]

    annotated = spec["annotated"]
    step4 = []
    for i in range(100):
        title = titles[i][0]
        if i < annotated:
            act = spec["activities"][i % len(spec["activities"])]
            if act in spec["activity_edits"]["remove"]:
                act = spec["activities"][(i + 1) % len(spec["activities"])]
            name, type_text = confirmed[i % len(confirmed)]
            step4.append({"title": title, "activities": [act], "objects": [name]})
        else:
            step4.append({"title": title, "activities": [], "objects": []})
    write_json_response(responses / "step4_attempt1.txt", step4)
    write_usage(
        responses / "usage.tsv",
        {
            (1, 1): (160, 90),
            (2, 1): (320, 150),
            (3, 1): (12000, 900),
            (4, 1): (13000, 800),
        },
    )

    lines = [f"# {spec['profession']} evaluation review script", ""]
    for label in spec["type_edits"]["add"]:
        lines.append(f"add 1 {quote(label)}")
    for label in spec["type_edits"]["remove"]:
        lines.append(f"remove 1 {quote(label)}")
    for label in spec["activity_edits"]["add"]:
        lines.append(f"add 2 {quote(label)}")
    for label in spec["activity_edits"]["remove"]:
        lines.append(f"remove 2 {quote(label)}")
    for generated, final, type_text in name_edits:
        lines.append(
            f"edit 3 {quote(f'{generated} @ {type_text}')} {quote(f'{final} @ {type_text}')}"
        )
    for name, type_text in removal_keys:
        lines.append(f"remove 3 {quote(f'{name} @ {type_text}')}")

    # step 4: edit the first sample titles, then remove the following ones
    for j in range(spec["event_edits"]):
        title = titles[j][0]
        record = step4[j]
        first_act = record["activities"][0]
        extra = next(
            a for a in confirmed_activities if a != first_act
        )
        name = record["objects"][0]
        type_text = next(t for n, t in confirmed if n == name)
        replacement = (
            f"activities: {first_act}; {extra} | objects: {name} @ {type_text}"
        )
        lines.append(f"edit 4 {quote(title)} {quote(replacement)}")
    for j in range(spec["event_edits"], spec["event_edits"] + spec["event_removals"]):
        lines.append(f"remove 4 {quote(titles[j][0])}")
    (base / "edits.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")

    (base / "expected.json").write_text(
        json.dumps(
            {"profession": spec["profession"], "metrics": EXPECTED_METRICS[key]},
            indent=2,
        )
        + "\n",
        encoding="utf-8",
    )


def make_prices() -> None:
    prices = FIXTURES / "prices"
    prices.mkdir(parents=True, exist_ok=True)
    (prices / "gpt-4.1.json").write_text(
        json.dumps({"input_per_million": 2.0, "output_per_million": 8.0}, indent=2)
        + "\n",
        encoding="utf-8",
    )


def main() -> int:
    make_walkthrough()
    for key, spec in PARTICIPANTS.items():
        make_participant(key, spec)
    make_prices()
    print(f"fixtures written under {FIXTURES}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
