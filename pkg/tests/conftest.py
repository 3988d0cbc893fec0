"""Shared helpers for the test suite."""

from __future__ import annotations

import random

import pytest

from ermcda.frame import frame_from_labels
from ermcda.fusion import MassFunction


def dst_frame(n: int):
    return frame_from_labels([f"t{i}" for i in range(n)], "DST")


def dsmt_frame(n: int):
    return frame_from_labels([f"t{i}" for i in range(n)], "DSmT")


def as_sets(m: MassFunction) -> dict[frozenset, float]:
    """MassFunction → {frozenset of atom ids: mass} for oracle comparison."""
    return {el.atom_ids(): v for el, v in m.items()}


def random_bba(frame, rng: random.Random, max_focals: int = 4) -> MassFunction:
    els = frame.elements
    k = rng.randint(1, min(max_focals, len(els)))
    picks = rng.sample(range(len(els)), k)
    ws = [rng.random() + 0.05 for _ in picks]
    t = sum(ws)
    return MassFunction(frame, {els[i]: w / t for i, w in zip(picks, ws)})


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240901)


def pytest_runtest_logreport(report):
    """One visible PASS/FAIL line per acceptance-gate criterion."""
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    status = "PASS" if report.passed else "FAIL"
    name = report.nodeid.rsplit("::", 1)[-1]
    print(f"\nacceptance {status}: {name} ({report.duration:.3f}s)")
