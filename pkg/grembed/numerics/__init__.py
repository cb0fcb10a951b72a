from .linalg import (
    fix_signs,
    gershgorin_bound,
    jacobi_eigh,
    lanczos_largest,
    one_sided_jacobi_svd,
    spectral_radius,
    symmetric_eigs_smallest,
    truncated_svd,
)
from .matrix_io import read_dense_csv, write_dense_csv
from .optim import adam_step
from .rng import child_rng, seeded_rng
from .types import AdamState, DenseMatrix, EigenResult, SparseMatrix, SVDResult


__all__ = [
    "AdamState",
    "DenseMatrix",
    "EigenResult",
    "SparseMatrix",
    "SVDResult",
    "adam_step",
    "child_rng",
    "fix_signs",
    "gershgorin_bound",
    "jacobi_eigh",
    "lanczos_largest",
    "one_sided_jacobi_svd",
    "read_dense_csv",
    "seeded_rng",
    "spectral_radius",
    "symmetric_eigs_smallest",
    "truncated_svd",
    "write_dense_csv",
]
