"""Classification, potential kernels and Kato-class checks for Levy processes."""
from .errors import *  # noqa: F401,F403
from .levy_model import (brownian, cp, drift, drift_plus_jumps, dyadic_jumps, eval_psi, example511,  # noqa: F401
                         drift_gamma0, check_scaling, space_time, stable, stable_subordinator,
                         shifted_stable_sub, log_sub, u_over_log_sub)

__version__ = "0.1.0"
