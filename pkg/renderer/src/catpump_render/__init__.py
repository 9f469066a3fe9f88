"""Figure renderer for catpump CSV outputs."""

__version__ = "0.1.0"
