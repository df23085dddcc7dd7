"""Pulse-level simulator for superconducting-qubit control.

Subpackages cover pulse envelopes, spectral analysis, driven two- and
three-level models, exact propagation, effective-generator (Magnus)
analysis, the RF signal chain, cross-resonance gate schedules, and
simulated calibration, plus a batch experiment CLI.
"""

__version__ = "0.1.0"

from . import (  # noqa: F401
    calibrate,
    crgate,
    envelopes,
    evolve,
    hamiltonians,
    hardware,
    linalg,
    magnus,
    spectral,
)
