"""Toolkit for detecting, measuring, and controlling translationese in
machine-translation data."""

__version__ = "0.1.0"
