"""Exact horoball-projection machinery on the Farey family, with the thin
and thick boundary covers built on top of it."""

__version__ = "1.0.0"
