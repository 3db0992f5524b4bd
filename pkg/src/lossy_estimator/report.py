"""Deterministic table emission (CSV/JSON) and figure rendering.

CSV dialect is frozen for regression goldens: UTF-8, LF line endings,
'#'-prefixed metadata lines before the header row, comma separators, floats
rendered with the shortest round-trip decimal. Identical inputs produce
byte-identical files; no timestamps or environment data are written.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np


def format_value(x) -> str:
    """Shortest round-trip rendering: '' for None, repr for floats."""
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def table_text(metadata: dict, header: list[str], rows) -> str:
    """Render a table as '#' metadata lines, a header line, then data rows."""
    lines = [f"# {key}={format_value(value)}" for key, value in metadata.items()]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(format_value(cell) for cell in row))
    return "\n".join(lines) + "\n"


def json_text(payload) -> str:
    """Canonical JSON rendering (2-space indent, trailing newline)."""

    def scrub(obj):
        if isinstance(obj, dict):
            return {key: scrub(value) for key, value in obj.items()}
        if isinstance(obj, (list, tuple)):
            return [scrub(value) for value in obj]
        if isinstance(obj, (np.integer,)):
            return int(obj)
        if isinstance(obj, (np.floating,)):
            return float(obj)
        if isinstance(obj, np.ndarray):
            return [scrub(value) for value in obj.tolist()]
        return obj

    return json.dumps(scrub(payload), indent=2) + "\n"


def write_text(path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8", newline="\n")


def render_surface(path, x, y, values, xlabel: str, ylabel: str, title: str) -> None:
    """Render a (len(y), len(x)) value surface to an image file.

    Matplotlib is imported lazily so data-only runs never touch a backend.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    z = np.asarray(values, dtype=float)
    fig, ax = plt.subplots(figsize=(7.0, 4.8))
    mesh = ax.pcolormesh(x, y, z, shading="nearest", cmap="viridis")
    fig.colorbar(mesh, ax=ax, label="J")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
