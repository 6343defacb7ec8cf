from .engine import ECFConfig, EmpiricalCF, FitResult, ecf_objective
from .engine import ecf_fit, fit_model, mom_init, loglik_fft
from .engine import covering_grid, sample_moments, ig_mle, normal_mle
from .models import ModelSpec, get_models, get_model
