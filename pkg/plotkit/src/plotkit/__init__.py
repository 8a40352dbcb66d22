"""Offline figure rendering for macromech sweep outputs."""

from .io import SCHEMAS, SchemaError, read_table, validate
from .render import FIGURE_KINDS, render
from .style import DEFAULT_STYLE, load_style

__version__ = "0.1.0"
