"""Pascal and generalized Pascal Bratteli diagrams: orders, Vershik maps, tail-invariant measures."""

__version__ = "0.1.0"
