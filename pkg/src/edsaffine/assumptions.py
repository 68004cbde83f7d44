"""Ledger of the nonvanishing conditions a computation relied on.

Linear algebra over the expression field divides by pivots; each pivot that
is not a constant is recorded here as ``expr != 0``.  Callers open a ledger
with ``collect()`` and read it back after the computation.
"""
from __future__ import annotations

import contextlib
import contextvars

_ledger = contextvars.ContextVar("edsaffine_assumptions", default=None)


class Ledger:
    def __init__(self):
        self.items: list[str] = []
        self._seen: set = set()

    def add(self, text: str):
        if text not in self._seen:
            self._seen.add(text)
            self.items.append(text)

    def __iter__(self):
        return iter(self.items)

    def __len__(self):
        return len(self.items)


@contextlib.contextmanager
def collect():
    """Open a (nested) ledger; conditions also propagate to outer ledgers."""
    outer = _ledger.get()
    led = Ledger()
    tok = _ledger.set((led, outer))
    try:
        yield led
    finally:
        _ledger.reset(tok)


def _add(chain, text):
    while chain is not None:
        led, chain = chain
        led.add(text)


def record(expr) -> None:
    """Record ``expr != 0`` unless it is a constant."""
    chain = _ledger.get()
    if chain is None:
        return
    if getattr(expr, "is_constant", False):
        return
    _add(chain, f"{expr} != 0")


def record_text(text: str) -> None:
    chain = _ledger.get()
    if chain is not None:
        _add(chain, text)
