"""Exact edge vectors, boundary measurements and signatures on plabic networks."""

__version__ = "0.1.0"
