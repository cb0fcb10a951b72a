"""Social restaurant recommendation from graph embeddings of a taste-weighted friendship graph."""

__version__ = "0.1.0"
