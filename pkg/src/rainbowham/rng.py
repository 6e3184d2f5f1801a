"""Deterministic random-stream derivation.

Every sampler in this package draws from an :class:`RngStream`, identified by
a 64-bit master seed plus a structured label (purpose tag, cell coordinates,
trial index, ...).  The mixing recipe is fixed so runs are replayable:

* each label part is folded to a 64-bit integer: ints are masked to 64 bits,
  strings are FNV-1a hashed over their UTF-8 bytes;
* the integer sequence ``(master_seed, part_0, part_1, ...)`` seeds a numpy
  ``SeedSequence``, which drives a PCG64 generator.

Identical ``(master_seed, label)`` pairs therefore yield identical draw
sequences, and distinct labels yield independent streams.  Floats must be
passed as their ``repr`` strings so the folding stays exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK64 = (1 << 64) - 1

LabelPart = "str | int"


def _fold(part) -> int:
    # bool is an int subtype; reject it so labels stay unambiguous.
    if isinstance(part, bool):
        raise TypeError("label parts must be str or int, not bool")
    if isinstance(part, int):
        return part & _MASK64
    if isinstance(part, str):
        h = _FNV_OFFSET
        for byte in part.encode("utf-8"):
            h = ((h ^ byte) * _FNV_PRIME) & _MASK64
        return h
    raise TypeError(f"label parts must be str or int, got {type(part).__name__}")


@dataclass(frozen=True)
class RngStream:
    """A reproducible, labelled source of randomness."""

    master_seed: int
    label: tuple = ()

    def child(self, *parts) -> "RngStream":
        """Derive a sub-stream; distinct part tuples give independent streams."""
        return RngStream(self.master_seed, self.label + tuple(parts))

    def generator(self) -> np.random.Generator:
        """A fresh generator positioned at the start of this stream."""
        entropy = (self.master_seed & _MASK64,) + tuple(_fold(p) for p in self.label)
        return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))
