"""Casimir force between lossy multilayer mirrors treated as optical networks."""

from .constants import C, HBAR
from .errors import CasimirError
from .media import (
    Axis,
    Dielectric,
    Drude,
    FrequencyPoint,
    Plasma,
    Pol,
    Tabulated,
    TransverseMode,
    Vacuum,
    epsilon,
    kappa,
    load_tabulated,
)
from .netalg import (
    HalfSpace,
    Layer,
    LayerStack,
    PerfectMirror,
    ScatteringMatrix,
    TransferMatrix,
    bulk_reflection,
    compose_s,
    compose_t,
    interface,
    propagation,
    s_to_t,
    slab,
    stack_scattering,
    t_to_s,
)
from .casimir import (
    CavityConfig,
    ForceResult,
    QuadratureSpec,
    casimir_ideal,
    closed_loop_f,
    force,
    lifshitz_force,
    loop_rho,
    reduction_factor,
    sweep_length,
)

from .qnoise import (
    CavityCommutators,
    airy,
    cavity_matrix,
    compose_noise,
    noise_norm_s,
    noise_norm_t,
    passivity_eigenvalues,
    plasmon_scan,
)

__version__ = "0.1.0"
