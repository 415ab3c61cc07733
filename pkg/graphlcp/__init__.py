"""Graph LCP arrays, co-lex width and matching statistics."""

__version__ = "0.1.0"
