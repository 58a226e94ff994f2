"""Stochastic-geometry toolkit for LEO satellite-relayed link coverage.

Satellites form a binomial point process on an orbital shell, gateways a
Poisson point process on the Earth; link budgets use shadowed-Rician
fading.  The package estimates end-to-end coverage of T-S-R and T-S-S-R
relay chains by Monte Carlo and cross-checks the single-relay chain
against closed-form contact-distance and coverage expressions.
"""

from .analytic import (
    ContactLawConfig,
    SigmaSet,
    contact_ccdf_overlap,
    contact_ccdf_simple,
    contact_cdf_product,
    contact_pdf_overlap,
    coverage_end_to_end,
    coverage_link_integral,
    eq4_discrepancy_report,
    overlap_fraction,
    sigma_terms,
    simple_contact_pdf,
)
from .channel import (
    ChannelParams,
    GridInverseCdf,
    InverseCdfFit,
    LinkBudget,
    SrParams,
    fading_threshold_coefficient,
    fit_inverse_cdf,
    link_snr,
    path_loss_db,
    sample_sr,
    sr_cdf,
    sr_mean,
)
from .config import config_to_dict, load_config, save_config
from .constants import EARTH_RADIUS_KM, SPEED_OF_LIGHT_M_S
from .geometry import (
    SphericalCap,
    SurfacePoint,
    cap_area,
    central_angle,
    great_circle_distance,
    in_cap,
    overlap_region_contains,
    slant_range,
)
from .point_process import (
    Constellation,
    GatewayField,
    RngStream,
    nearest_in_region,
    sample_bpp,
    sample_ppp,
    sample_uniform_sphere,
)
from .simulator import (
    CoverageEstimate,
    ScenarioConfig,
    TrialOutcome,
    estimate_coverage,
    greedy_route,
    run_combined_trial,
    run_tsr_trial,
    run_tssr_trial,
)
from .sweep import PRESETS, SweepSpec, analytic_e2e_coverage, preset_sweeps, run_sweep

__version__ = "0.1.0"
