"""Steady-state nonlinear interference effects in Doppler-broadened media.

Closed-form absorption/gain, population and four-wave-mixing results for
three- and four-level schemes, Maxwell velocity averaging, an independent
density-matrix solver for verification, named parameter sets and a CLI.
"""

from .core import (
    Field,
    FieldSet,
    LevelScheme,
    PopulationSet,
    validate_scheme,
    zero_field_populations,
)
from .doppler import AveragedResponse, VelocityGrid, averaged_spectrum, maxwell_average
from .errors import *  # noqa: F401,F403
from .scenarios import Preset, ScanSpec, ScanTable, load_preset, parse_preset, run_scan

__version__ = "0.1.0"
