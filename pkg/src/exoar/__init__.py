"""Expert-guided object and activity recognition for AWT data.

Turns active-window-tracking logs into OCEL 2.0 event logs through four
reviewed steps: object type recognition, activity recognition, object
recognition, and event enrichment.
"""

from .awt import (
    ParsedLog,
    TitleStat,
    WindowEvent,
    parse_awt_log,
    select_enrichment_titles,
    select_object_titles,
    title_statistics,
)
from .edits import (
    EditAction,
    EditKind,
    apply_edit_script,
    codec_for_step,
    parse_edit_script,
    serialize_edit_script,
    step_metrics,
)
from .errors import ERROR_CODES, ExoarError
from .labels import Label, ObjectInstance, StepMetrics, TitleAnnotation, normalize_label
from .session import EngineConfig, Session, SessionEngine, SessionStore

__version__ = "0.1.0"

__all__ = [
    "EditAction",
    "EditKind",
    "EngineConfig",
    "ERROR_CODES",
    "ExoarError",
    "Label",
    "ObjectInstance",
    "ParsedLog",
    "Session",
    "SessionEngine",
    "SessionStore",
    "StepMetrics",
    "TitleAnnotation",
    "TitleStat",
    "WindowEvent",
    "apply_edit_script",
    "codec_for_step",
    "normalize_label",
    "parse_awt_log",
    "parse_edit_script",
    "select_enrichment_titles",
    "select_object_titles",
    "serialize_edit_script",
    "step_metrics",
    "title_statistics",
    "__version__",
]
