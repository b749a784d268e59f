"""Social learning over weakly-connected graphs."""

__version__ = "0.1.0"
