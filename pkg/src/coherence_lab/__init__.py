"""Exact computations with Iwahori contractions of tensor products of gl_n modules."""

ENGINE_VERSION = "0.1.0"
SCHEMA_VERSION = 1

__version__ = ENGINE_VERSION
