"""paramlab: numerical laboratory for parameter spaces of polynomial dynamics.

Computes centers of hyperbolic components, multiplier loci, cubic-moduli
center intersections, harmonic-measure samples of the Multibrot set, and
equidistribution discrepancy rates, for the unicritical families z^d + c
and the critically marked cubic family z^3/3 - (c1/2) z^2 + a^3.
"""

__version__ = "0.1.0"
