"""Validation and translation toolkit for recursive RDF shape schemas."""

__version__ = "0.1.0"
