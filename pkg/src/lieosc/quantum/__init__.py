"""Grid wavefunctions, Lie-operator actions, moments and the split-step reference solver."""

from .analysis import Moments, momentum_derivative, moments, number_overlap, number_populations
from .fock import (DisplacedNumberCoeffs, classical_energy, displaced_expansion,
                   displaced_overlap, laguerre, survival_probability)
from .grid import Grid, WaveState, l2_distance
from .operators import (apply_lie, apply_lie_inverse, chirp, dilate, free_step, global_phase,
                        kick, shift, symplectic_matrix, trig_interpolate)
from .propagate import PropagationResult, direct_propagate
from .states import (eigenstate, hermite, hermite_function, plane, posmom, posmom_function,
                     well, well_function)

__all__ = [
    "Moments", "momentum_derivative", "moments", "number_overlap", "number_populations",
    "DisplacedNumberCoeffs", "classical_energy", "displaced_expansion", "displaced_overlap",
    "laguerre", "survival_probability", "Grid", "WaveState", "l2_distance",
    "apply_lie", "apply_lie_inverse", "chirp", "dilate", "free_step", "global_phase", "kick",
    "shift", "symplectic_matrix", "trig_interpolate", "PropagationResult", "direct_propagate",
    "eigenstate", "hermite", "hermite_function", "plane", "posmom", "posmom_function",
    "well", "well_function",
]
