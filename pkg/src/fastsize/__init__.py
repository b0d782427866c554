"""fastsize.

Aircraft sizing engine: fills unknown design parameters from historical
regressions, models any propulsion architecture as a directed graph, flies an
energy-based point-mass mission and converges the aircraft weights with a
fixed-point iteration.
"""

__version__ = "0.1.0"
