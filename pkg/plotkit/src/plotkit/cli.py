"""plot <figure-kind> --in <table> --out <image> [--style <json>]"""

from __future__ import annotations

import json
import sys

import click

from .io import SchemaError
from .render import FIGURE_KINDS, render


@click.command()
@click.argument("kind", type=click.Choice(FIGURE_KINDS))
@click.option("--in", "in_path", required=True, type=str, help="CSV/JSON table")
@click.option("--out", "out_path", required=True, type=str, help="image path")
@click.option("--style", "style_path", type=str, default=None, help="JSON style file")
def plot(kind, in_path, out_path, style_path):
    """Render one publication-style figure from a macromech output table."""
    path = render(kind, in_path, out_path, style_path)
    click.echo(f"wrote {path}", err=True)


def main():
    try:
        plot(standalone_mode=False)
    except (SchemaError, ValueError, OSError) as exc:
        print(json.dumps({"error": "input", "message": str(exc)}), file=sys.stderr)
        sys.exit(2)
    except (click.UsageError, click.BadParameter) as exc:
        print(json.dumps({"error": "usage", "message": str(exc)}), file=sys.stderr)
        sys.exit(2)
    except click.exceptions.Exit as exc:
        sys.exit(exc.exit_code)


if __name__ == "__main__":
    main()
