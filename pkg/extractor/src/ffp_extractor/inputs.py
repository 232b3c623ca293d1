"""Encoder input construction from a dialogue turn and its context window."""

from __future__ import annotations

from typing import Sequence

DEFAULT_SEPARATOR = "</s>"


def build_input(texts: Sequence[str], i: int, c: int, separator: str = DEFAULT_SEPARATOR) -> str:
    """Concatenate utterances max(0, i-c)..i, oldest first.

    Pure function of the dialogue texts, the turn index and the window size;
    the current utterance is always last.
    """
    if not 0 <= i < len(texts):
        raise IndexError(f"turn index {i} outside dialogue of length {len(texts)}")
    if c < 0:
        raise ValueError(f"context window must be >= 0, got {c}")
    window = texts[max(0, i - c) : i + 1]
    return f" {separator} ".join(window)
