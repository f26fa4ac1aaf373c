"""nptcert: PPT/NPT classification and constructive NPT certificates.

Library plus CLI for partial transposition, Schmidt decomposition, and the
robustness of the NPT property of an entangled pure state under mixing with
pure separable states.  See the README for the verified statements and the
command reference.
"""

from ._backend import BACKEND
from .linalg import (
    HermitianEig,
    LinalgError,
    NoConvergenceError,
    NotHermitianError,
    SubspaceBasis,
    hermitian_eig,
    orthogonal_complement,
    orthonormal_basis,
    subspace_intersection,
    svd,
)
from .qstate import (
    AlphaOutOfRangeError,
    BadRankError,
    Bipartition,
    DensityMatrix,
    DimensionMismatchError,
    DimsSpec,
    MixtureSpec,
    PureState,
    SchmidtDecomposition,
    WeightMismatchError,
    ZeroVectorError,
    example1_mixture,
    haar_unitary,
    horodecki,
    make_pure,
    mix,
    product_pure,
    sample_haar_pure,
    sample_product,
    sample_pure_schmidt_n,
    sample_weights,
    schmidt_decompose,
    schmidt_number,
    to_density,
)
from .ppt import (
    NPT,
    PPT,
    BadCoefficientsError,
    ClassificationReport,
    PartitionScan,
    classify,
    partial_transpose,
    pure_pt_spectrum,
    scan_partitions,
)
from .witness import (
    ClassificationFallback,
    NotEntangledError,
    NotProductError,
    NotSeparableError,
    NptCertificate,
    QubitBlockReduction,
    WrongSchmidtNumberError,
    certify,
    find_witness,
    negative_eigenspace,
    qubit_block_det,
    qubit_block_reduce,
)
from .harness import (
    OpenQuestionScan,
    SweepResult,
    TrialConfig,
    TrialSummary,
    VerificationError,
    example1_check,
    horodecki_sweep,
    open_question_scan,
    run_trials,
)

__version__ = "0.1.0"
