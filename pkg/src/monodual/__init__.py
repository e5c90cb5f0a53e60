"""Exact verification of closed monoidal duality structure on bounded
chain complexes over odd prime fields, with a finite-set six-functor
model, a Witt-group oracle, and a randomized diagram-checking harness."""

__version__ = "0.1.0"
