"""Geodesic flow on the regular octagon translation surface and its product
3-manifold: tracing, arithmetic-progression sampling, transference counting,
and the Fourier-side verification toolkit."""

from octaflow._core import *  # noqa: F401,F403

__all__ = [name for name in dir() if not name.startswith("_")]
