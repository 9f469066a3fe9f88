"""Two-photon-loss cat-state confinement toolkit."""

__version__ = "0.1.0"
