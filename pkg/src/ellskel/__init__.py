"""Exact invariants of extremal elliptic surfaces from ribbon-graph skeletons."""

__version__ = "0.1.0"
