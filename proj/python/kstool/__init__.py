"""Python bindings for the Kochen-Specker toolkit."""

import json
import os
from pathlib import Path

_packaged_data = Path(__file__).resolve().parent / "data"
if "KS_DATA_DIR" not in os.environ and _packaged_data.is_dir():
    os.environ["KS_DATA_DIR"] = str(_packaged_data)

from ._core import (  # noqa: E402
    KsError,
    descent_theta,
    equator_crossings,
    run_cli,
    two_step_chain,
    two_step_delta_phi,
)
from . import _core  # noqa: E402

__all__ = [
    "KsError",
    "check_set",
    "descent_theta",
    "equator_crossings",
    "run_cli",
    "two_step_chain",
    "two_step_delta_phi",
    "witness",
]


def _as_text(doc):
    if isinstance(doc, bytes):
        doc = doc.decode()
    if isinstance(doc, os.PathLike):
        doc = os.fspath(doc)
    if isinstance(doc, str):
        if doc.lstrip().startswith("{"):
            return doc
        return Path(_core.resolve_input(doc)).read_text()
    return json.dumps(doc)


def check_set(ray_set, include_bases=False, count_limit=0):
    """Colorability report for a ray set: dict, JSON text, path, or bundled name."""
    return json.loads(_core.check_set_json(_as_text(ray_set), include_bases, count_limit))


def witness(spec, seed=0, budget=10000, include_evaluations=False):
    """Certificate search on an oracle spec: dict, JSON text, path, or bundled name."""
    return json.loads(_core.witness_json(_as_text(spec), seed, budget, include_evaluations))
