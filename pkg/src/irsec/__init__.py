"""IRS-assisted physical-layer-secure uplink and Gas-ranked offloading simulator."""

from ._accel import NUMBA_ENABLED
from .allocation import (CostMatrix, InfeasibleMatchingError, Matching, Server,
                         Task, bidding_allocate, build_cost_matrix,
                         dissatisfaction, ecm_allocate, group_allocate,
                         km_solve, max_dissatisfaction, offload_energy,
                         proposed_allocate, rank_sensors, rank_servers,
                         with_band)
from .channels import (SPEED_OF_LIGHT, ChannelSet, Dimensions, LinkBudget,
                       dbm_to_watts, path_loss, sample_channel_set)
from .config import ExperimentConfig, load_config
from .ledger import ContractRecord, Ledger, RecordKind, payload_digest
from .manifold import (EffectiveChannel, OptimizerSettings, PhaseOptimum,
                       analytic_optimum_miso, channel_gain, effective_channel,
                       euclidean_grad, objective, optimize_phases,
                       project_tangent, retract, riemannian_grad, transport)
from .quadrature import QuadratureError, adaptive_quad
from .secrecy import (CodingPolicy, CodingRateResult, GammaFit,
                      cdf_sup_distance, effective_secrecy_rate,
                      ergodic_secrecy_rate, ergodic_wiretap_capacity,
                      gamma_fit, instantaneous_secrecy_rate,
                      measure_main_ergodic_capacity, optimal_coding_rate,
                      outage_probability, pdf_divergence, sample_wiretap_gain,
                      sample_wiretap_gains, wiretap_gain_cdf, wiretap_gain_pdf)
from .specfun import ln_gamma, reg_lower_gamma, reg_upper_gamma
from .streams import substream

__version__ = "0.1.0"
