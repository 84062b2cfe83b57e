"""Fault-injection switches for the self-test harness.

Each switch perturbs one comparison deep inside the library so the
acceptance checks can demonstrate that they notice.
"""

import os

KNOWN = {
    "flip-strong": "node strength comparison f(max ν1) <= min ν2 is inverted",
    "skip-disjoint": "the strict ≦ disjointness check is skipped",
    "lose-color": "homogenization keeps one off-color successor",
}

_active = set(filter(None, os.environ.get("CREATURE_LAB_FAULTS", "").split(",")))


def active(name: str) -> bool:
    return name in _active


def enable(*names):
    for n in names:
        if n not in KNOWN:
            raise ValueError(f"unknown fault {n!r}; known: {sorted(KNOWN)}")
        _active.add(n)


def disable(*names):
    for n in names or list(_active):
        _active.discard(n)


def current():
    return sorted(_active)
