"""States, density matrices, mixtures and samplers.

Index convention used everywhere: the basis ket |i_1 ... i_m> of a system
with subsystem dimensions (d_1, ..., d_m) maps to the mixed-radix flat index
with the leftmost subsystem most significant (row-major).  Labels are
0-based, so e.g. the flat index of |0...0> is 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg

__all__ = [
    "DimensionMismatchError",
    "ZeroVectorError",
    "WeightMismatchError",
    "AlphaOutOfRangeError",
    "BadRankError",
    "DimsSpec",
    "Bipartition",
    "PureState",
    "DensityMatrix",
    "SchmidtDecomposition",
    "MixtureSpec",
    "make_pure",
    "product_pure",
    "schmidt_decompose",
    "schmidt_number",
    "to_density",
    "mix",
    "horodecki",
    "example1_mixture",
    "haar_unitary",
    "sample_pure_schmidt_n",
    "sample_product",
    "sample_weights",
    "sample_haar_pure",
    "bipartite_matrix",
    "assemble_bipartite",
]

# Schmidt coefficients above this multiple of the largest count toward the
# Schmidt number (matches the linalg rank tolerance).
SCHMIDT_TOL = 1e-9

# Sampler floors keeping trials away from numerically ambiguous degeneracies.
COEFF_FLOOR = 0.01   # floor on mu_i^2 in the Schmidt-coefficient simplex
WEIGHT_FLOOR = 1e-3  # floor on mixture weights


class DimensionMismatchError(ValueError):
    pass


class ZeroVectorError(ValueError):
    pass


class WeightMismatchError(ValueError):
    pass


class AlphaOutOfRangeError(ValueError):
    pass


class BadRankError(ValueError):
    pass


@dataclass(frozen=True)
class DimsSpec:
    """Subsystem dimensions of a composite system."""

    subsystem_dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.subsystem_dims)
        object.__setattr__(self, "subsystem_dims", dims)
        if len(dims) < 2:
            raise ValueError("need at least two subsystems")
        if any(d < 2 for d in dims):
            raise ValueError("every subsystem dimension must be >= 2")

    @property
    def num_subsystems(self) -> int:
        return len(self.subsystem_dims)

    @property
    def total_dim(self) -> int:
        return int(np.prod(self.subsystem_dims))


@dataclass(frozen=True)
class Bipartition:
    """A cut of the subsystems into Y and its complement."""

    dims: DimsSpec
    y: tuple[int, ...]

    def __post_init__(self):
        y = tuple(sorted(set(int(i) for i in self.y)))
        object.__setattr__(self, "y", y)
        m = self.dims.num_subsystems
        if not y or len(y) >= m:
            raise ValueError("Y must be a nonempty proper subset of the subsystems")
        if y[0] < 0 or y[-1] >= m:
            raise ValueError(f"subsystem indices out of range for {m} subsystems")

    @property
    def ybar(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.dims.num_subsystems) if i not in self.y)

    @property
    def dim_y(self) -> int:
        return int(np.prod([self.dims.subsystem_dims[i] for i in self.y]))

    @property
    def dim_ybar(self) -> int:
        return int(np.prod([self.dims.subsystem_dims[i] for i in self.ybar]))


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized state vector over a composite system."""

    dims: DimsSpec
    amplitudes: np.ndarray
    renormalized: bool = field(default=False, compare=False)

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        object.__setattr__(self, "amplitudes", amps)
        if amps.shape != (self.dims.total_dim,):
            raise DimensionMismatchError(
                f"amplitude vector of length {amps.size} does not match total dimension "
                f"{self.dims.total_dim}"
            )
        nrm = np.linalg.norm(amps)
        if abs(nrm - 1.0) > 1e-12:
            raise ValueError(f"state vector norm {nrm!r} is not 1 within 1e-12")


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, trace-one matrix over a composite system.

    Hermiticity and trace are checked at construction; positivity is only
    spot-checked where it matters (loaders and tests) since it needs a full
    eigendecomposition.
    """

    dims: DimsSpec
    matrix: np.ndarray

    def __post_init__(self):
        mat = np.ascontiguousarray(self.matrix, dtype=np.complex128)
        object.__setattr__(self, "matrix", mat)
        d = self.dims.total_dim
        if mat.shape != (d, d):
            raise DimensionMismatchError(
                f"matrix shape {mat.shape} does not match total dimension {d}"
            )
        if np.abs(mat - mat.conj().T).max() > 1e-12:
            raise ValueError("density matrix is not Hermitian within 1e-12")
        tr = mat.trace()
        if abs(tr - 1.0) > 1e-12:
            raise ValueError(f"density matrix trace {tr!r} is not 1 within 1e-12")

    def min_eigenvalue(self) -> float:
        return float(linalg.hermitian_eig(self.matrix).eigenvalues[0])


@dataclass(frozen=True, eq=False)
class SchmidtDecomposition:
    """Schmidt form of a pure state across a bipartition.

    ``coefficients`` are the positive Schmidt coefficients in descending
    order; column k of ``left_frame`` / ``right_frame`` is the k-th local
    Schmidt vector on the Y / Y-bar side.  ``schmidt_number`` counts the
    coefficients above SCHMIDT_TOL relative to the largest.
    """

    partition: Bipartition
    coefficients: np.ndarray
    left_frame: np.ndarray
    right_frame: np.ndarray
    schmidt_number: int

    def reassemble(self) -> np.ndarray:
        """Flat amplitude vector rebuilt from the decomposition."""
        amps = np.zeros(self.partition.dims.total_dim, dtype=np.complex128)
        for k, mu in enumerate(self.coefficients):
            amps += mu * assemble_bipartite(
                self.left_frame[:, k], self.right_frame[:, k], self.partition
            )
        return amps


@dataclass(frozen=True, eq=False)
class MixtureSpec:
    """Convex mixture of a leading component with pure separable components.

    Component 0 may be a PureState or (for mixed-leading-component runs) a
    DensityMatrix; all remaining components must be pure.  ``separable_flags``
    records which components are asserted product with respect to the
    partition under study.
    """

    weights: tuple[float, ...]
    components: tuple
    separable_flags: tuple[bool, ...] = None

    def __post_init__(self):
        weights = tuple(float(w) for w in self.weights)
        object.__setattr__(self, "weights", weights)
        components = tuple(self.components)
        object.__setattr__(self, "components", components)
        if len(weights) != len(components):
            raise WeightMismatchError(
                f"{len(weights)} weights for {len(components)} components"
            )
        if not components:
            raise WeightMismatchError("mixture needs at least one component")
        if any(w <= 0.0 for w in weights):
            raise ValueError("mixture weights must be strictly positive")
        if len(weights) > 1 and any(w >= 1.0 for w in weights):
            raise ValueError("mixture weights must be strictly below 1")
        if abs(sum(weights) - 1.0) > 1e-12:
            raise ValueError(f"mixture weights sum to {sum(weights)!r}, not 1")
        dims = components[0].dims
        for comp in components:
            if comp.dims != dims:
                raise DimensionMismatchError("components do not share subsystem dimensions")
        for comp in components[1:]:
            if not isinstance(comp, PureState):
                raise ValueError("only component 0 may be a density matrix")
        if self.separable_flags is None:
            flags = (False,) + (True,) * (len(components) - 1)
        else:
            flags = tuple(bool(f) for f in self.separable_flags)
            if len(flags) != len(components):
                raise WeightMismatchError("separable_flags length mismatch")
        object.__setattr__(self, "separable_flags", flags)

    @property
    def dims(self) -> DimsSpec:
        return self.components[0].dims

    @property
    def k(self) -> int:
        """Number of mixed-in components beyond component 0."""
        return len(self.components) - 1


def _axis_perm(part: Bipartition) -> tuple[int, ...]:
    return part.y + part.ybar


def bipartite_matrix(psi: PureState, part: Bipartition) -> np.ndarray:
    """Amplitude matrix of ``psi`` with Y-side rows and Y-bar-side columns."""
    tensor = psi.amplitudes.reshape(part.dims.subsystem_dims)
    return tensor.transpose(_axis_perm(part)).reshape(part.dim_y, part.dim_ybar)


def assemble_bipartite(left, right, part: Bipartition) -> np.ndarray:
    """Flat amplitudes of (left tensor right) across ``part``.

    ``left`` lives on the Y-side factor space and ``right`` on the Y-bar side;
    the result follows the package's row-major subsystem ordering.
    """
    left = np.asarray(left, dtype=np.complex128).ravel()
    right = np.asarray(right, dtype=np.complex128).ravel()
    if left.size != part.dim_y or right.size != part.dim_ybar:
        raise DimensionMismatchError(
            f"factor sizes ({left.size}, {right.size}) do not match partition "
            f"dimensions ({part.dim_y}, {part.dim_ybar})"
        )
    perm = _axis_perm(part)
    shape = tuple(part.dims.subsystem_dims[i] for i in perm)
    tensor = np.outer(left, right).reshape(shape)
    return tensor.transpose(np.argsort(perm)).reshape(-1)


def make_pure(amps, dims: DimsSpec) -> PureState:
    """Normalize an amplitude vector into a PureState.

    The ``renormalized`` flag on the result records whether the input norm
    deviated from 1 by more than 1e-8.
    """
    amps = np.asarray(amps, dtype=np.complex128).ravel()
    if amps.size != dims.total_dim:
        raise DimensionMismatchError(
            f"amplitude vector of length {amps.size} does not match total dimension "
            f"{dims.total_dim}"
        )
    nrm = np.linalg.norm(amps)
    if nrm == 0.0:
        raise ZeroVectorError("cannot normalize the zero vector")
    return PureState(dims, amps / nrm, renormalized=bool(abs(nrm - 1.0) > 1e-8))


def product_pure(factor_y, factor_ybar, part: Bipartition) -> PureState:
    """Tensor product of two factor vectors across ``part``."""
    amps = assemble_bipartite(factor_y, factor_ybar, part)
    return make_pure(amps, part.dims)


def schmidt_decompose(psi: PureState, part: Bipartition) -> SchmidtDecomposition:
    """Schmidt decomposition of a pure state across a bipartition."""
    mat = bipartite_matrix(psi, part)
    u, s, v = linalg.svd(mat)
    # Keep every coefficient that carries genuine amplitude; the Schmidt
    # number is decided separately at SCHMIDT_TOL.
    keep = s > 1e-14 * (s[0] if s.size and s[0] > 0 else 1.0)
    s = s[keep]
    u = u[:, keep]
    v = v[:, keep]
    n = int(np.sum(s > SCHMIDT_TOL * s[0])) if s.size else 0
    # svd returns M = sum_k s_k u_k v_k^dag, so the Y-bar side Schmidt
    # vectors are the conjugated right singular vectors.
    return SchmidtDecomposition(part, s, u, v.conj(), n)


def schmidt_number(psi: PureState, part: Bipartition, tol: float = SCHMIDT_TOL) -> int:
    """Count of Schmidt coefficients above ``tol`` relative to the largest."""
    s = schmidt_decompose(psi, part).coefficients
    if s.size == 0:
        return 0
    return int(np.sum(s > tol * s[0]))


def to_density(psi: PureState) -> DensityMatrix:
    """Rank-one projector onto ``psi``."""
    return DensityMatrix(psi.dims, np.outer(psi.amplitudes, psi.amplitudes.conj()))


def mix(spec: MixtureSpec) -> DensityMatrix:
    """Convex combination of the mixture components."""
    d = spec.dims.total_dim
    acc = np.zeros((d, d), dtype=np.complex128)
    for w, comp in zip(spec.weights, spec.components):
        if isinstance(comp, PureState):
            acc += w * np.outer(comp.amplitudes, comp.amplitudes.conj())
        else:
            acc += w * comp.matrix
    return DensityMatrix(spec.dims, acc)


def horodecki(alpha: float) -> DensityMatrix:
    """One-parameter 3x3 family interpolating separable, PPT and NPT regimes.

    sigma_alpha = 2/7 |psi+><psi+| + alpha/21 (|01><01|+|12><12|+|20><20|)
                  + (5-alpha)/21 (|10><10|+|21><21|+|02><02|)
    with |psi+> = (|00>+|11>+|22>)/sqrt(3), valid for 2 <= alpha <= 5.
    """
    alpha = float(alpha)
    if not 2.0 <= alpha <= 5.0:
        raise AlphaOutOfRangeError(f"alpha must be in [2, 5], got {alpha}")
    dims = DimsSpec((3, 3))
    psi_plus = np.zeros(9, dtype=np.complex128)
    psi_plus[[0, 4, 8]] = 1.0 / np.sqrt(3.0)
    mat = (2.0 / 7.0) * np.outer(psi_plus, psi_plus.conj())
    for idx in (1, 5, 6):  # |01>, |12>, |20>
        mat[idx, idx] += alpha / 21.0
    for idx in (3, 7, 2):  # |10>, |21>, |02>
        mat[idx, idx] += (5.0 - alpha) / 21.0
    return DensityMatrix(dims, mat)


def example1_mixture() -> MixtureSpec:
    """The bundled 3x3 reference mixture: a Schmidt-rank-3 state mixed with
    four product states, weights (0.01, 0.6, 0.09, 0.15, 0.15).

    This is the package's canonical PPT-from-mixing demonstration; its
    partial transpose has minimal eigenvalue ~6e-5 across the first cut.
    """
    dims = DimsSpec((3, 3))
    part = Bipartition(dims, (0,))
    chi0 = np.zeros(9, dtype=np.complex128)
    chi0[0] = 0.5
    chi0[4] = 0.8
    chi0[8] = np.sqrt(0.11)
    components = (
        PureState(dims, chi0),
        product_pure(
            [0.4, -0.6, np.sqrt(0.48)], [0.3, 0.95, np.sqrt(0.0075)], part
        ),
        product_pure(
            [0.27, 0.5, np.sqrt(0.6771)], [-0.75, -0.1, np.sqrt(0.4275)], part
        ),
        product_pure(
            [-0.2, 0.4, np.sqrt(0.8)], [-0.05, 0.01, -np.sqrt(0.9974)], part
        ),
        product_pure(
            [0.2, 0.6, -np.sqrt(0.6)], [0.8, -0.55, -np.sqrt(0.0575)], part
        ),
    )
    return MixtureSpec((0.01, 0.6, 0.09, 0.15, 0.15), components)


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a Ginibre matrix with phase fix."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = r.diagonal()
    return q * (d / np.abs(d))


def _haar_vector(dim: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return z / np.linalg.norm(z)


def sample_pure_schmidt_n(
    n: int, part: Bipartition, rng: np.random.Generator, coeff_floor: float = COEFF_FLOOR
) -> PureState:
    """Random pure state with Schmidt number exactly ``n`` across ``part``.

    Squared coefficients are drawn uniformly from the simplex and floored at
    ``coeff_floor`` (rescaled), then random local unitaries are applied to
    both sides of the cut.
    """
    cap = min(part.dim_y, part.dim_ybar)
    if not 1 <= n <= cap:
        raise BadRankError(f"Schmidt number {n} not achievable across a {part.dim_y}x{part.dim_ybar} cut")
    x = rng.dirichlet(np.ones(n))
    mu2 = coeff_floor + (1.0 - n * coeff_floor) * x
    mu = np.sqrt(np.sort(mu2)[::-1])
    uy = haar_unitary(part.dim_y, rng)
    uyb = haar_unitary(part.dim_ybar, rng)
    amps = np.zeros(part.dims.total_dim, dtype=np.complex128)
    for i in range(n):
        amps += mu[i] * assemble_bipartite(uy[:, i], uyb[:, i], part)
    return make_pure(amps, part.dims)


def sample_product(part: Bipartition, rng: np.random.Generator) -> PureState:
    """Random product state across ``part``: Haar factors on both sides."""
    return product_pure(_haar_vector(part.dim_y, rng), _haar_vector(part.dim_ybar, rng), part)


def sample_weights(count: int, rng: np.random.Generator, floor: float = WEIGHT_FLOOR) -> np.ndarray:
    """Dirichlet-uniform weights on the simplex, floored at ``floor`` each."""
    if count < 1:
        raise ValueError("need at least one weight")
    if count * floor >= 1.0:
        raise ValueError(f"floor {floor} infeasible for {count} weights")
    x = rng.dirichlet(np.ones(count))
    return floor + (1.0 - count * floor) * x


def sample_haar_pure(dims: DimsSpec, rng: np.random.Generator) -> PureState:
    """Haar-random pure state on the full composite space."""
    return PureState(dims, _haar_vector(dims.total_dim, rng))
