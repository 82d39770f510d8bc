"""Bent Boolean functions linear on spreads, their duals, and the ovals,
line ovals and hyperovals they correspond to in planes of order 2^m.

Layered as: gf (field arithmetic) -> boolfn (truth tables / Walsh) ->
niho, geometry (univariate constructions over GF(2^2m)) and
spread, spreadbent (prequasifield spreads and bivariate constructions).
"""

__version__ = "0.1.0"

from . import gf, boolfn, niho, geometry, spread, spreadbent  # noqa: F401
