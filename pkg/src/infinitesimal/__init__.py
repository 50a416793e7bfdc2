"""Exact arithmetic for two infinitesimal refinements of the real numbers.

* :mod:`infinitesimal.fermat` -- the ring of Fermat reals (nilpotent infinitesimals).
* :mod:`infinitesimal.smooth` -- smooth-function expressions and their Fermat extensions.
* :mod:`infinitesimal.realsets` -- exact finite unions of intervals and points.
* :mod:`infinitesimal.opensets` -- Fermat extensions of open sets and intuitionistic transfer.
* :mod:`infinitesimal.ultrapower` -- Cauchy sequences modulo a lazily built free ultrafilter.
* :mod:`infinitesimal.plot` -- CSV and SVG data for the curves ``graph_delta(x)``.
* :mod:`infinitesimal.cli` -- the ``infinitesimal`` calculator.
"""

from .fermat import FermatReal, compare, dt, invert

__version__ = "0.1.0"

__all__ = ["FermatReal", "compare", "dt", "invert"]
