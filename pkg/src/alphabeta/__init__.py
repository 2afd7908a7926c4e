"""Left-invariant (alpha, beta)-metrics on Lie groups and their symmetry algebras."""

__version__ = "0.1.0"
