"""Verification and mesh toolkit for the trigonal genus-10 minimal surface in a flat 4-torus."""

__version__ = "0.1.0"
