"""Deliberate engine faults for measuring the verification suite's power.

A mutant is activated with :func:`injected`; the lattice, symbol and
operator modules consult :func:`active` at the few places each fault
lives. Outside an ``injected`` block the engine is always the correct one.
"""

from __future__ import annotations

import contextlib
import contextvars
from typing import Iterator, Optional

MUTANTS = {
    "v-sign": "V e_m = e_{+m/k} instead of e_{-m/k}",
    "v-no-divisibility": "V e_m = e_{-floor(m/k)} for every m, no divisibility test",
    "vadj-direction": "V* e_m = e_{+km} instead of e_{-km}",
    "adjoint-order": "adjoint of a word stars each letter but keeps the letter order",
    "epsilon-off-by-one": "unit vector puts its 1 one slot too far right",
    "conjugate-no-negation": "symbol conjugation conjugates coefficients but keeps indices",
}

_ACTIVE: contextvars.ContextVar[Optional[str]] = contextvars.ContextVar(
    "slant_hankel_mutant", default=None
)


def active() -> Optional[str]:
    return _ACTIVE.get()


@contextlib.contextmanager
def injected(name: Optional[str]) -> Iterator[None]:
    if name is not None and name not in MUTANTS:
        raise ValueError(f"unknown mutant {name!r}; choose from {sorted(MUTANTS)}")
    token = _ACTIVE.set(name)
    try:
        yield
    finally:
        _ACTIVE.reset(token)
