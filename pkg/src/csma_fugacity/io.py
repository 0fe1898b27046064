"""Text formats for fugacity, rate and marginal vectors, and atomic file output.

Vertex indices in these files are 1-based, matching DIMACS.
"""

from __future__ import annotations

import os
import tempfile

import numpy as np

from .exceptions import ParameterError


def format_vector(values, tag: str = "v") -> str:
    """One ``<tag> <i> <value>`` line per vertex, 17 significant digits."""
    return "".join(f"{tag} {i + 1} {float(x):.17g}\n" for i, x in enumerate(values))


def parse_vector(text, tag: str = "v", n: int | None = None) -> np.ndarray:
    if isinstance(text, bytes):
        text = text.decode("ascii")
    found = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split()
        if not tokens or tokens[0] == "c":
            continue
        if len(tokens) != 3 or tokens[0] != tag:
            raise ParameterError(f"line {lineno}: expected '{tag} <i> <value>'")
        try:
            i, x = int(tokens[1]), float(tokens[2])
        except ValueError:
            raise ParameterError(f"line {lineno}: malformed index or value") from None
        if i < 1 or i in found:
            raise ParameterError(f"line {lineno}: bad or repeated index {i}")
        found[i] = x
    size = n if n is not None else len(found)
    if sorted(found) != list(range(1, size + 1)):
        raise ParameterError(f"expected entries for vertices 1..{size}")
    return np.array([found[i] for i in range(1, size + 1)])


def parse_rates(text, n: int) -> np.ndarray:
    """Whitespace-separated per-vertex service rates."""
    if isinstance(text, bytes):
        text = text.decode("ascii")
    try:
        values = [float(tok) for tok in text.split()]
    except ValueError:
        raise ParameterError("rates file must contain only numbers") from None
    if len(values) != n:
        raise ParameterError(f"rates file has {len(values)} values, graph has {n} vertices")
    return np.array(values)


def write_atomic(path, data) -> None:
    """Write ``data`` (str or bytes) to ``path`` via a temporary file and rename."""
    if isinstance(data, str):
        data = data.encode("utf-8")
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
