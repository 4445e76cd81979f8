"""Trit-string plumbing shared by the codec, reconciliation and the CLI."""

from __future__ import annotations

import numpy as np

from .linalg import ValidationError


def as_trits(values) -> np.ndarray:
    """Coerce a digit string or integer sequence to an int8 trit array."""
    if isinstance(values, str):
        if values and not values.isdigit():
            _bad_string(values)
        values = [int(c) for c in values]
    arr = np.asarray(values)
    if arr.size and (arr.ndim != 1 or not np.issubdtype(arr.dtype, np.integer)):
        raise ValidationError("trit strings must be one-dimensional integer sequences")
    arr = arr.astype(np.int8).reshape(-1)
    if arr.size and (arr.min() < 0 or arr.max() > 2):
        bad = arr[(arr < 0) | (arr > 2)][0]
        raise ValidationError(f"trit value {bad} outside {{0, 1, 2}}")
    return arr


def _bad_string(s):
    for ch in s:
        if ch not in "012":
            raise ValidationError(f"invalid trit character {ch!r}")
    raise ValidationError(f"invalid trit string {s!r}")


def parse_trits(text: str) -> np.ndarray:
    """Parse a trit stream, ignoring whitespace between groups."""
    return as_trits("".join(text.split()))


def format_trits(trits, group: int = 0) -> str:
    """Render trits as digits, optionally space-separated in fixed groups."""
    digits = "".join(str(t) for t in as_trits(trits))
    if group <= 0:
        return digits
    return " ".join(digits[i:i + group] for i in range(0, len(digits), group))


def read_key_file(path) -> np.ndarray:
    """Read a key file: contiguous trit digits, '#' comment lines allowed."""
    digits = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            chunk = "".join(line.split())
            for ch in chunk:
                if ch not in "012":
                    raise ValidationError(
                        f"{path}:{lineno}: invalid trit character {ch!r}")
            digits.append(chunk)
    return as_trits("".join(digits))


def write_key_file(path, trits, comments=()) -> None:
    with open(path, "w") as fh:
        for comment in comments:
            fh.write(f"# {comment}\n")
        fh.write(format_trits(trits) + "\n")
