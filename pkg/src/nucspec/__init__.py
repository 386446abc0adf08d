"""Spin-Hamiltonian spectroscopy toolkit for a coupled electron-nuclear pair.

Forward models (energy levels, transition frequencies, matrix elements,
cavity-coupled relaxation rates) and inverse fits (ensemble-MCMC parameter
estimation with bootstrap uncertainties) for an effective S = 1/2 electron
spin hyperfine-coupled to an I = 9/2 nucleus, plus the full J = 15/2
crystal-field model it derives from.
"""

__version__ = "0.1.0"
