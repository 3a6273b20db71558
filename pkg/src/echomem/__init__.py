"""Linear-response and pulse-area theory of photon-echo quantum memories."""

__version__ = "0.1.0"

from .lineshape import (  # noqa: E402
    DephasingFactor,
    InhomogeneousLine,
    LineShape,
    Medium,
    absorption_coefficient,
    chi,
    coherence_map,
    resonant_absorption,
)
from .linear import (  # noqa: E402
    GemConfig,
    TransferFunction,
    afc_group_delay,
    apply_transfer,
    crib_backward_transfer,
    crib_forward_efficiency_map,
    crib_forward_optimal_depth,
    crib_forward_transfer,
    crib_narrowband_transfer,
    gem_forward_phase,
    gem_transfer,
)
from .afc import (  # noqa: E402
    AfcComb,
    afc_backward_transfer,
    afc_dephasing,
    afc_design_search,
    afc_dispersion_transfer,
    afc_forward_transfer,
    chi_comb,
    chi_total,
    chi_wings,
)
from .area import (  # noqa: E402
    AreaProtocolConfig,
    BifurcationError,
    EchoSource,
    Geometry,
    area_ode_rhs,
    control_pulse_areas,
    crib_backward_area,
    crib_backward_output_area,
    crib_forward_area,
    efficiency_measures,
    mccall_hahn_area,
    rose_closed_form,
    rose_formal_solution,
    rose_gain_map,
    rose_sources,
)
from .pulses import Pulse, energy_efficiency, gaussian_pulse, spectral_width_hwem, time_reverse  # noqa: E402
