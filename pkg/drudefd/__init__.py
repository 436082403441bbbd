"""drudefd: FDTD schemes for Maxwell equations in Drude metamaterials.

Second order and fourth order (in space and time) leapfrog schemes on
staggered periodic grids, in 1D and 2D (TE), with the diagnostics needed to
check their convergence rates and discrete energy conservation.
"""

__version__ = '0.1.0'

from .errors import ConfigError, DomainError, InstabilityError, StaggerError
from .grid import (
    FieldBundle, GridFunction, MeshSpec, Stagger, inner, inner_bundle, norm,
    norm_bundle, sample
)
from .stencil import (
    Composition, CurlPair, apply_composition, curl_2d_scalar, curl_2d_vector,
    curl_3d, curl_pair, diff_dual, diff_fwd
)
from .model import (
    InitialData, ManufacturedSolution1D, ManufacturedSolution2D, PhysParams,
    continuous_energy_EK, continuous_energy_HJ, derive_params_1d,
    derive_params_2d, derive_params_hj_1d, drude_permittivity, exact_state
)
from .stepper import (
    LeapfrogStepper, SchemeSpec, StatePair, apply_A1, apply_A2, initialize,
    run, step
)
from .diagnostics import (
    ConvergenceRow, EnergyRecord, convergence_rates, discrete_energy,
    relative_energy_error, solution_error
)
from .config import ExperimentConfig, load_config
from .experiments import (
    ResultTable, run_convergence, run_energy_table, run_longtime,
    run_simulation
)
from .output import emit
