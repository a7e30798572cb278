"""Edit script application, metrics classification, and the file format."""

import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from exoar.edits import (
    EditAction,
    EditKind,
    apply_edit_script,
    codec_for_step,
    parse_annotation_content,
    parse_edit_script,
    parse_instance,
    serialize_edit_script,
    step_metrics,
)
from exoar.errors import (
    DuplicateAdd,
    EditScriptError,
    InvalidEdit,
    NegativeCount,
    UnknownTarget,
)
from exoar.labels import Label, normalize_label

from conftest import WALKTHROUGH


def labels(*texts):
    return [normalize_label(t) for t in texts]


def add(step, target, replacement=None):
    return EditAction(kind=EditKind.ADD, step=step, target=target, replacement=replacement)


def remove(step, target):
    return EditAction(kind=EditKind.REMOVE, step=step, target=target)


def edit(step, target, replacement):
    return EditAction(kind=EditKind.EDIT, step=step, target=target, replacement=replacement)


# --- apply_edit_script ------------------------------------------------------


def test_walkthrough_object_type_review_yields_eleven():
    generated = json.loads(
        (WALKTHROUGH / "responses" / "step1_attempt1.txt").read_text()
    )
    items = labels(*generated)
    assert len(items) == 13
    script = [
        add(1, "conferences"),
        remove(1, "classes"),
        remove(1, "grades"),
        remove(1, "administrators"),
    ]
    confirmed = apply_edit_script(items, script, codec_for_step(1))
    assert len(confirmed) == 11
    assert normalize_label("conferences") in confirmed


def test_empty_script_is_identity():
    items = labels("a", "b")
    assert apply_edit_script(items, [], codec_for_step(1)) == items


def test_sequential_edit_then_remove():
    items = labels("a", "b")
    script = [edit(1, "a", "c"), remove(1, "b")]
    assert apply_edit_script(items, script, codec_for_step(1)) == labels("c")


def test_order_removals_in_place_adds_appended():
    items = labels("a", "b", "c")
    script = [remove(1, "b"), add(1, "d")]
    assert apply_edit_script(items, script, codec_for_step(1)) == labels("a", "c", "d")


def test_remove_unknown_target():
    with pytest.raises(UnknownTarget):
        apply_edit_script(labels("a"), [remove(1, "zz")], codec_for_step(1))


def test_duplicate_add_rejected_case_insensitively():
    with pytest.raises(DuplicateAdd):
        apply_edit_script(labels("a"), [add(1, "A")], codec_for_step(1))


def test_edit_creating_duplicate_rejected():
    with pytest.raises(DuplicateAdd):
        apply_edit_script(labels("a", "b"), [edit(1, "a", "b")], codec_for_step(1))


def test_instance_codec_round_trip():
    instance = parse_instance("Lu, X. (Xixi) @ colleagues")
    assert instance.name == "Lu, X. (Xixi)"
    assert instance.object_type == Label("colleagues")
    with pytest.raises(InvalidEdit):
        parse_instance("no separator here")


def test_annotation_content_parsing():
    annotation = parse_annotation_content(
        "T", "activities: grade exams; design exams | objects: BPM Exam Remindo @ exams"
    )
    assert [a.text for a in annotation.activities] == ["grade exams", "design exams"]
    assert annotation.objects[0].name == "BPM Exam Remindo"
    assert parse_annotation_content("T", "").is_empty
    only_objects = parse_annotation_content("T", "objects: AI Lab @ research projects")
    assert not only_objects.activities and len(only_objects.objects) == 1
    with pytest.raises(InvalidEdit):
        parse_annotation_content("T", "garbage content")


@given(
    st.lists(st.sampled_from("abcdefgh"), min_size=1, max_size=8, unique=True),
    st.permutations(range(8)),
)
def test_removal_scripts_are_order_insensitive_in_membership(items, order):
    base = labels(*items)
    to_remove = [items[i % len(items)] for i in order[: len(items) // 2]]
    unique_removals = list(dict.fromkeys(to_remove))
    forward = [remove(1, t) for t in unique_removals]
    backward = [remove(1, t) for t in reversed(unique_removals)]
    left = apply_edit_script(base, forward, codec_for_step(1))
    right = apply_edit_script(base, backward, codec_for_step(1))
    assert set(left) == set(right)


@given(st.data())
def test_random_scripts_partition_the_basis(data):
    names = data.draw(
        st.lists(st.sampled_from("abcdefghij"), min_size=1, max_size=10, unique=True)
    )
    base = labels(*names)
    pool = list(names)
    script = []
    fresh = iter("klmnopqrstuvwxyz")
    for _ in range(data.draw(st.integers(0, 6))):
        kind = data.draw(st.sampled_from(["add", "remove", "edit"]))
        if kind == "add":
            new = next(fresh)
            script.append(add(1, new))
            pool.append(new)
        elif kind == "remove" and pool:
            victim = data.draw(st.sampled_from(pool))
            script.append(remove(1, victim))
            pool.remove(victim)
        elif kind == "edit" and pool:
            victim = data.draw(st.sampled_from(pool))
            new = next(fresh)
            script.append(edit(1, victim, new))
            pool[pool.index(victim)] = new
    metrics = step_metrics(1, len(base), base, script)
    assert metrics.kept_as_is + metrics.edited + metrics.removed == len(base)
    confirmed = apply_edit_script(base, script, codec_for_step(1))
    keys = [label.text for label in confirmed]
    assert len(keys) == len(set(keys))


# --- step_metrics -----------------------------------------------------------


def test_metrics_addition_only():
    base = labels(*"abcdefghijk")  # 11 items
    metrics = step_metrics(1, 11, base, [add(1, "reviews")])
    assert (metrics.kept_as_is, metrics.added, metrics.removed) == (11, 1, 0)
    assert metrics.kept_pct == 100


def test_metrics_step4_sample_basis():
    sample = [parse_annotation_content(f"t{i}", "") for i in range(10)]
    script = [edit(4, f"t{i}", "activities: | objects:") for i in range(7)]
    metrics = step_metrics(4, 23, sample, script)
    assert metrics.generated == 23
    assert (metrics.kept_as_is, metrics.edited, metrics.removed) == (3, 7, 0)
    assert metrics.kept_pct == 30


def test_metrics_no_edits():
    base = labels(*"abcde")
    metrics = step_metrics(1, 5, base, [])
    assert metrics.kept_as_is == 5
    assert metrics.kept_pct == 100


def test_metrics_edit_then_remove_counts_once():
    base = labels("a", "b")
    script = [edit(1, "a", "c"), remove(1, "c")]
    metrics = step_metrics(1, 2, base, script)
    assert (metrics.kept_as_is, metrics.edited, metrics.removed) == (1, 0, 1)


def test_metrics_negative_count_with_numeric_basis():
    base = labels("a", "b", "c")
    script = [remove(1, "a"), remove(1, "b")]
    with pytest.raises(NegativeCount):
        step_metrics(1, 3, base, script, review_basis=1)


def test_metrics_rounds_half_up():
    base = labels(*[f"x{i}" for i in range(8)])
    script = [remove(1, "x0"), remove(1, "x1"), remove(1, "x2")]
    # 5 of 8 kept = 62.5% -> 63 with half-up rounding
    assert step_metrics(1, 8, base, script).kept_pct == 63


# --- script files -----------------------------------------------------------


def test_script_round_trip():
    script = [
        add(1, "conferences"),
        remove(3, 'He said "hi" @ colleagues'),
        edit(4, "Title - Word", "activities: grade exams | objects:"),
    ]
    text = serialize_edit_script(script)
    parsed = parse_edit_script(text)
    assert [(e.kind, e.step, e.target, e.replacement) for e in parsed] == [
        (e.kind, e.step, e.target, e.replacement) for e in script
    ]


def test_script_comments_and_blanks_ignored():
    text = '# header\n\nadd 1 "conferences"  # trailing comment\n'
    parsed = parse_edit_script(text)
    assert len(parsed) == 1
    assert parsed[0].target == "conferences"


@pytest.mark.parametrize(
    "line",
    [
        "frobnicate 1 \"x\"",
        "add one \"x\"",
        "add 1",
        'edit 2 "a"',  # edit without replacement
        'add 1 "a" "b"',  # replacement outside step 4
        "add 9 \"x\"",
    ],
)
def test_script_bad_lines_rejected(line):
    with pytest.raises(EditScriptError):
        parse_edit_script(line)


def test_walkthrough_script_parses():
    script = parse_edit_script((WALKTHROUGH / "edits.txt").read_text())
    by_step = {step: [e for e in script if e.step == step] for step in (1, 2, 3, 4)}
    assert len(by_step[1]) == 4
    assert len(by_step[2]) == 4
    assert len(by_step[3]) == 35
    assert len(by_step[4]) == 6
