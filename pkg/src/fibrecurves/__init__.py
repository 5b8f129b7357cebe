"""Point counts and genus of fibre products of hyperelliptic curves over F_q."""

__version__ = "0.1.0"
