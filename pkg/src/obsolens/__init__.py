"""obsolens: diachronic corpus analytics and grammatical-obsolescence diagnostics."""

__version__ = "0.1.0"
