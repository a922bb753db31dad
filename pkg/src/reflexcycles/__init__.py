"""Reflexive cycles: word order, path-condition deciders, cover lifting and polymorphism search."""

__version__ = "0.1.0"
