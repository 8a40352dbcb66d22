"""Declarative figure style with JSON overrides."""

from __future__ import annotations

import json
from pathlib import Path

DEFAULT_STYLE = {
    "figsize": [4.2, 3.2],
    "dpi": 150,
    "line_colors": ["#1f4e8c", "#c23b22", "#2e7d52", "#8a5fa8", "#b08714"],
    "line_width": 1.4,
    "marker": "",
    "grid_alpha": 0.15,
    "cmap": "RdBu_r",
    "bar_color": "#1f4e8c",
    "inset": True,
    "inset_range": [0.0, 5.0],
    "font_size": 9,
    "log_floor": 1e-16,
}


def load_style(path: str | None) -> dict:
    style = dict(DEFAULT_STYLE)
    if path:
        text = Path(path).read_text()
        overrides = json.loads(text)
        unknown = set(overrides) - set(DEFAULT_STYLE)
        if unknown:
            raise ValueError(f"unknown style keys: {', '.join(sorted(unknown))}")
        style.update(overrides)
    return style
