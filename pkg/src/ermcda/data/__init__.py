"""Bundled scenario documents and the scenario JSON schema."""

from __future__ import annotations

import json
from importlib import resources

#: Short names for the shipped example scenarios.
EXAMPLES = {
    "reference": "reference_scenario.json",
    "free-model": "free_model_scenario.json",
    "high-conflict": "high_conflict_scenario.json",
}


def load_example(name: str) -> dict:
    """A bundled scenario document by short name (see EXAMPLES)."""
    try:
        filename = EXAMPLES[name]
    except KeyError:
        raise KeyError(
            f"unknown example {name!r}; available: {sorted(EXAMPLES)}"
        ) from None
    text = resources.files(__name__).joinpath(filename).read_text(encoding="utf-8")
    return json.loads(text)
