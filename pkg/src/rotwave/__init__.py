"""
rotwave: pseudo-spectral tools for rotating, slightly compressible flow.

The package covers the exact acoustic-Rossby wave propagator on a flat
periodic slab, the orthogonal projection onto geostrophically balanced
states, a quasi-geostrophic limit solver, a Lawson-type exponential
integrator for the scaled compressible system, and the relative-entropy
diagnostics tying the three together.
"""

from .grid import PlaneGrid, ScalarField, SlabGrid, SpectralField, VectorField, make_grid
from .ns import FluidState, NSSolver, PressureLaw, run_ns
from .qg import run_qg
from .waves import WavePropagator, WaveState, measure_decay, propagate

__all__ = [
    "FluidState",
    "NSSolver",
    "PlaneGrid",
    "PressureLaw",
    "ScalarField",
    "SlabGrid",
    "SpectralField",
    "VectorField",
    "WavePropagator",
    "WaveState",
    "make_grid",
    "measure_decay",
    "propagate",
    "run_ns",
    "run_qg",
]
