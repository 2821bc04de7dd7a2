"""Fusion of spin-photon entangled resource states: simulation toolkit.

Subpackages:

- ``densop``:   dense density-matrix engine for small labeled registers
- ``emitter``:  resource-state generation protocol and spin readout
- ``fusion``:   time-bin Bell-state analyzer (Fock oracle + effective channel)
- ``network``:  stabilizer-tableau fusion networks and correlation tracking
- ``analysis``: conditional correlations, error rates, witness fidelities
- ``config``:   run configuration schema (JSON, fail-closed)
- ``experiment``: Monte Carlo experiment runner and reports
- ``calibrate``: derivative-free noise-parameter fitting
- ``cli``:      command-line front end
"""

__version__ = "0.1.0"
