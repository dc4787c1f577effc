"""Exact, enumerative laboratory for multi-prover rational interactive proofs."""

__version__ = "0.1.0"
