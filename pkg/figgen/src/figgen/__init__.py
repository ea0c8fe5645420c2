"""Figure regeneration for the honeycomb measurement-graph study."""

from .render import FigureSpec, render
from .schema import SchemaError

__all__ = ["FigureSpec", "SchemaError", "render"]
__version__ = "0.1.0"
