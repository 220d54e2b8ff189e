"""Finite group structures, embedding problems and p-adic approximation over Q."""

__version__ = "0.1.0"
