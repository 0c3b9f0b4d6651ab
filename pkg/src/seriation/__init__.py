"""Seriation of noisy permuted Robinson matrices."""

from .baselines import LSConfig, ls_latent, ls_toeplitz, spectral_seriation
from .distances import (EstimatorConfig, dhat_latent, dhat_missing,
                        dhat_supnorm, dhat_toeplitz, latent_target_distances,
                        neighborhoods, norm_estimates, pairwise_row_distances,
                        row_sums)
from .errors import DegenerateSpectrumError, ProjectionError, SeriationError
from .experiments import (ExperimentPlan, RateFit, fit_rate,
                          perfect_recovery_check, run_plan)
from .losses import (l2_loss, oracle_loss_latent, oracle_loss_toeplitz,
                     oracle_loss_toeplitz_sup)
from .models import (LatentSpec, ModelInstance, NoiseSpec, apply_mask,
                     estimate_A, gen_latent_instance, gen_toeplitz_instance)
from .perms import Permutation, permute
from .pines import (PackingResult, PinesParams, SeriationOutput,
                    default_params, exact_distance_params, maximal_packing,
                    order_packing, pines, seriate, split_components)
from .robinson import (RobinsonFlags, ToeplitzSpec, is_robinson,
                       pava_isotonic, project_robinson, toeplitz)
from .supnorm import GapSplit, gap_split, seriate_indicator, supnorm_seriate

__version__ = "0.1.0"
