"""Label normalization and core type invariants."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from exoar.errors import EmptyLabel
from exoar.labels import Label, ObjectInstance, TitleAnnotation, normalize_label


def test_normalize_lowercases_and_trims():
    assert normalize_label("Prepare Lectures ").text == "prepare lectures"


def test_normalize_keeps_already_normal_text():
    assert normalize_label("collaborate with colleagues").text == "collaborate with colleagues"


def test_normalize_rejects_whitespace_only():
    with pytest.raises(EmptyLabel):
        normalize_label("   ")


def test_normalize_collapses_internal_whitespace():
    assert normalize_label("grade \t exams").text == "grade exams"


@given(st.text(max_size=80))
def test_normalize_is_idempotent(raw):
    try:
        once = normalize_label(raw)
    except EmptyLabel:
        return
    assert normalize_label(once.text) == once


def test_label_rejects_unnormalized_text():
    with pytest.raises(ValueError):
        Label("Mixed Case")
    with pytest.raises(EmptyLabel):
        Label("")


def test_instance_name_must_differ_from_type():
    with pytest.raises(ValueError):
        ObjectInstance(name="Courses", object_type=Label("courses"))


def test_instance_preserves_name_case():
    instance = ObjectInstance(name="Lu, X. (Xixi)", object_type=Label("colleagues"))
    assert instance.name == "Lu, X. (Xixi)"
    assert instance.key == ("lu, x. (xixi)", "colleagues")


def test_instance_rejects_empty_name():
    with pytest.raises(ValueError):
        ObjectInstance(name="  ", object_type=Label("courses"))


def test_annotation_emptiness():
    assert TitleAnnotation(title="t").is_empty
    annotated = TitleAnnotation(title="t", activities=(Label("grade exams"),))
    assert not annotated.is_empty
