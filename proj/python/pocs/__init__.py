"""Phase-only compressive sensing: sparse recovery from measurement phases.

The heavy lifting lives in the compiled ``_core`` extension; this package
re-exports its surface. Matrices handed to these functions are raw complex
Gaussian draws; each pipeline applies its own scaling convention internally.
"""

from ._core import (
    KAPPA,
    ToolkitError,
    bpdn,
    build_az,
    epsilon_bound,
    estimate_rip,
    measure_linear,
    measure_phase_only,
    normalize_signal,
    phase_consistency,
    project_l1_ball,
    recover,
    sample_disk_noise,
    sample_gaussian,
    sample_sparse_signal,
    sign_c,
)

__all__ = [
    "KAPPA",
    "ToolkitError",
    "bpdn",
    "build_az",
    "epsilon_bound",
    "estimate_rip",
    "measure_linear",
    "measure_phase_only",
    "normalize_signal",
    "phase_consistency",
    "project_l1_ball",
    "recover",
    "sample_disk_noise",
    "sample_gaussian",
    "sample_sparse_signal",
    "sign_c",
]
