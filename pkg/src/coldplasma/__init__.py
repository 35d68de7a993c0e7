"""Relativistic cold-plasma characteristics, smoothness certificates and blow-up detection."""
from .certifier import Certificate, certify, condn_lhs, glue_bound
from .dynamics import (
    CharacteristicState, Trajectory, conserved_c, integrate_characteristic, k_minus,
    lorentz_gamma, period, rhs, rk4_step,
)
from .errors import DomainError, IntegratorFailure, SimpleWaveError, UsageError
from .experiments import (
    InitialDataField, condition_dynamics, density_diagnostics, eulerian_profiles,
    excess_charge, find_blowup, gaussian_pulse,
)
from .kernels import BACKENDS, DEFAULT_BACKEND

__version__ = "0.1.0"
