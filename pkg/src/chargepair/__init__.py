"""Numerical workbench for the nearest-neighbor pairing variant of the 1D
Hubbard chain: exact diagonalization, nested Bethe equations, thermodynamic
limits, finite-size scaling and Yang-Baxter verification."""

__version__ = "0.1.0"

from . import bethe, fock, fss, liebwu, models, spectra, ybx

__all__ = ["bethe", "fock", "fss", "liebwu", "models", "spectra", "ybx", "__version__"]
