"""Two particles from independent sources in a four-detector interferometer."""
from .fock import Statistics
from .experiment import ExperimentConfig, closed_form, run_experiment

__all__ = ["ExperimentConfig", "Statistics", "closed_form", "run_experiment"]
__version__ = "0.1.0"
