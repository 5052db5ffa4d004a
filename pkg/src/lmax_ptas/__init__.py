"""Approximation schemes for single-machine maximum lateness with heads and tails.

The solvers live in :pymod:`lmax_ptas.ptas_deadline` (deadline, Pareto) and
:pymod:`lmax_ptas.ptas_availability` (machine / operator non-availability);
:pymod:`lmax_ptas.oracle` holds the exact reference solvers.
"""

from lmax_ptas._version import __version__

__all__ = ["__version__"]
