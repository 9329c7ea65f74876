"""Best low-multilinear-rank (Tucker) approximation of dense tensors.

Alternating dominant-subspace solvers (orthogonality iteration, its
closest-point greedy variant, and single-step orthogonal iteration)
with convergence diagnostics, a verification suite, reproducible
serialization, and a command-line interface.
"""

from .diagnostics import (
    KktReport,
    ProjectorDistance,
    kkt_residual,
    nondegeneracy_gaps,
    projector_distance,
    subspace_rel_change,
)
from .estimator import TuckerDecomposition
from .io import gen_synthetic, read_tensor, tensor_digest, write_tensor
from .kernels import (
    ConvergenceError,
    RankDeficiencyError,
    SubspaceResult,
    SvdResult,
    kronecker,
    leading_left_subspace,
    nuclear_norm,
    polar_align,
    qr_orthonormalize,
    singular_values,
    svd,
)
from .solvers import (
    ALGORITHMS,
    CompareTrace,
    SolveTrace,
    SolverConfig,
    SolverError,
    SweepRecord,
    TuckerModel,
    compare_runs,
    hosvd_init,
    objective,
    random_init,
    solve,
    subproblem_matrix,
    sweep_greedy,
    sweep_hooi,
    sweep_tuckals3,
)
from .subspace import (
    GreedyResult,
    UniquenessReport,
    gain_bound_residual,
    greedy_project,
    uniqueness_report,
)
from .tensor import (
    fold,
    fro_norm,
    inner,
    mode_multiply,
    multi_mode_multiply,
    tucker_reconstruct,
    unfold,
)

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS",
    "CompareTrace",
    "ConvergenceError",
    "GreedyResult",
    "KktReport",
    "ProjectorDistance",
    "RankDeficiencyError",
    "SolveTrace",
    "SolverConfig",
    "SolverError",
    "SubspaceResult",
    "SvdResult",
    "SweepRecord",
    "TuckerDecomposition",
    "TuckerModel",
    "UniquenessReport",
    "compare_runs",
    "fold",
    "fro_norm",
    "gain_bound_residual",
    "gen_synthetic",
    "greedy_project",
    "hosvd_init",
    "inner",
    "kkt_residual",
    "kronecker",
    "leading_left_subspace",
    "mode_multiply",
    "multi_mode_multiply",
    "nondegeneracy_gaps",
    "nuclear_norm",
    "objective",
    "polar_align",
    "projector_distance",
    "qr_orthonormalize",
    "random_init",
    "read_tensor",
    "singular_values",
    "solve",
    "subproblem_matrix",
    "subspace_rel_change",
    "svd",
    "sweep_greedy",
    "sweep_hooi",
    "sweep_tuckals3",
    "tensor_digest",
    "tucker_reconstruct",
    "unfold",
    "uniqueness_report",
    "write_tensor",
]
