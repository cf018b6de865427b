"""Multiplexed biphoton spectra, Schmidt decomposition and entanglement sweeps."""
from .errors import BiphotonError, ConfigError, NumericalError
from .kernels import BACKEND
from .schmidt import SchmidtResult, decompose, entropy, schmidt_number
from .spectral import (FrequencyGrid, JointSpectrum, MultiplexConfig, PhysicalParams,
                       build_joint_spectrum, eval_multiplexed, eval_single)

__version__ = "0.1.0"
