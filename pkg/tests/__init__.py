from .test_grid import *
from .test_stencil import *
from .test_model import *
from .test_stepper import *
from .test_diagnostics import *
from .test_config import *
from .test_experiments import *
