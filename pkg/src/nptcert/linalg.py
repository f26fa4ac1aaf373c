"""Dense complex linear algebra kernels.

Everything downstream (partial transposition, Schmidt decomposition, witness
construction) reduces to the Hermitian eigensolver implemented here: a cyclic
Jacobi iteration with complex plane rotations.  Jacobi is slow in big-O terms
but extremely accurate and completely self-contained, which is the right
trade-off at the matrix sizes this package works with (D <= ~128).

The sweep kernel exists twice with identical arithmetic: ``_jacobi_sweeps_py``
(scalar loops, numba-compiled when that backend is active) and
``_jacobi_sweeps_numpy`` (vectorized row/column updates).  Backend selection
lives in ``nptcert._backend``; ``benchmarks/bench_eig.py`` compares the two.

SVD is realized on top of the eigensolver (eigendecomposition of M^dag M plus
back-substitution), and the subspace operations (span, complement,
intersection) are realized through projectors fed back into the eigensolver.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend

__all__ = [
    "LinalgError",
    "NotHermitianError",
    "NoConvergenceError",
    "HermitianEig",
    "SubspaceBasis",
    "hermitian_eig",
    "svd",
    "orthonormal_basis",
    "orthogonal_complement",
    "subspace_intersection",
]

# Off-diagonal Frobenius mass below this multiple of ||M||_F counts as
# converged; 100 cyclic sweeps is far beyond what any D <= 128 matrix needs.
OFF_DIAG_TOL = 1e-14
MAX_SWEEPS = 100

# Default relative tolerance for numerical rank / intersection decisions.
RANK_TOL = 1e-9

# Singular values below this multiple of the largest are treated as exact zeros.
SVD_ZERO_TOL = 1e-13


class LinalgError(Exception):
    """Base class for kernel failures."""


class NotHermitianError(LinalgError):
    """Input matrix is not Hermitian within the stated tolerance."""


class NoConvergenceError(LinalgError):
    """Iteration cap exceeded without reaching the convergence threshold."""


@dataclass(frozen=True, eq=False)
class HermitianEig:
    """Full spectrum of a Hermitian matrix.

    ``eigenvalues`` is sorted ascending; column k of ``eigenvectors`` is the
    unit eigenvector for ``eigenvalues[k]``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


@dataclass(frozen=True, eq=False)
class SubspaceBasis:
    """Orthonormal basis of a linear subspace of C^ambient_dim.

    ``vectors`` has shape (ambient_dim, dim) with orthonormal columns; a
    zero-dimensional subspace is represented by an (ambient_dim, 0) array.
    """

    ambient_dim: int
    vectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def projector(self) -> np.ndarray:
        """Orthogonal projector onto the subspace."""
        return self.vectors @ self.vectors.conj().T


def _jacobi_sweeps_py(a, v, max_sweeps, off_tol):
    """Cyclic Jacobi sweeps on a Hermitian matrix, scalar-loop form.

    Mutates ``a`` toward diagonal form and accumulates the rotations in ``v``
    (so that original = v @ diag(a) @ v^dag).  Returns the number of sweeps
    used, or -1 if the off-diagonal mass is still above ``off_tol`` after
    ``max_sweeps`` sweeps.
    """
    n = a.shape[0]
    for sweep in range(max_sweeps):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off += a[p, q].real ** 2 + a[p, q].imag ** 2
        if np.sqrt(2.0 * off) <= off_tol:
            return sweep
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                # Complex rotation zeroing a[p,q]: phase from the entry
                # itself, angle from the stable tan formulation.
                e = apq / mag
                tau = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                se = s * e
                sec = s * np.conj(e)
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - sec * akq
                    a[k, q] = se * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - se * aqk
                    a[q, k] = sec * apk + c * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = complex(a[p, p].real, 0.0)
                a[q, q] = complex(a[q, q].real, 0.0)
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - sec * vkq
                    v[k, q] = se * vkp + c * vkq
    off = 0.0
    for p in range(n - 1):
        for q in range(p + 1, n):
            off += a[p, q].real ** 2 + a[p, q].imag ** 2
    if np.sqrt(2.0 * off) <= off_tol:
        return max_sweeps
    return -1


def _jacobi_sweeps_numpy(a, v, max_sweeps, off_tol):
    """Same iteration as ``_jacobi_sweeps_py`` with vectorized updates."""
    n = a.shape[0]
    iu = np.triu_indices(n, k=1)
    for sweep in range(max_sweeps):
        off = np.sqrt(2.0 * np.sum(np.abs(a[iu]) ** 2))
        if off <= off_tol:
            return sweep
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                e = apq / mag
                tau = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                se = s * e
                sec = s * np.conj(e)
                akp = a[:, p].copy()
                akq = a[:, q].copy()
                a[:, p] = c * akp - sec * akq
                a[:, q] = se * akp + c * akq
                apk = a[p, :].copy()
                aqk = a[q, :].copy()
                a[p, :] = c * apk - se * aqk
                a[q, :] = sec * apk + c * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                vkp = v[:, p].copy()
                vkq = v[:, q].copy()
                v[:, p] = c * vkp - sec * vkq
                v[:, q] = se * vkp + c * vkq
    off = np.sqrt(2.0 * np.sum(np.abs(a[iu]) ** 2))
    if off <= off_tol:
        return max_sweeps
    return -1


if _backend.BACKEND == "numba":
    _jacobi_sweeps = _backend.jit(_jacobi_sweeps_py)
else:
    _jacobi_sweeps = _jacobi_sweeps_numpy


def hermitian_eig(m, tol: float = 1e-10, max_sweeps: int = MAX_SWEEPS) -> HermitianEig:
    """Eigendecomposition of a Hermitian matrix via cyclic Jacobi rotations.

    Raises NotHermitianError unless ``max|M - M^dag| <= tol * (1 + max|M|)``,
    and NoConvergenceError if the sweep cap is exhausted.
    """
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotHermitianError(f"expected a square matrix, got shape {m.shape}")
    if m.size == 0:
        raise NotHermitianError("empty matrix")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise NotHermitianError("matrix has non-finite entries")
    scale = float(np.abs(m).max())
    defect = float(np.abs(m - m.conj().T).max())
    if defect > tol * (1.0 + scale):
        raise NotHermitianError(
            f"Hermiticity defect {defect:.3e} exceeds tol*(1+max|M|) = "
            f"{tol * (1.0 + scale):.3e}"
        )

    a = np.ascontiguousarray((m + m.conj().T) / 2.0)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    off_tol = OFF_DIAG_TOL * float(np.linalg.norm(a))
    sweeps = _jacobi_sweeps(a, v, max_sweeps, off_tol)
    if sweeps < 0:
        raise NoConvergenceError(f"no convergence within {max_sweeps} sweeps")
    w = a.diagonal().real.copy()
    order = np.argsort(w, kind="stable")
    return HermitianEig(w[order], np.ascontiguousarray(v[:, order]))


def svd(m):
    """Singular value decomposition ``M = sum_k s_k u_k v_k^dag``.

    Returns ``(u, s, v)`` with ``s`` descending of length min(shape), and
    orthonormal columns in ``u`` and ``v``.  Realized through the Hermitian
    eigensolver applied to M^dag M, with left vectors recovered by
    back-substitution; singular values below ``SVD_ZERO_TOL * s_max`` are
    zeroed and their left vectors filled in by orthonormal completion.
    """
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise ValueError("matrix has non-finite entries")
    rows, cols = m.shape
    k = min(rows, cols)

    gram = m.conj().T @ m
    eig = hermitian_eig(gram, tol=1e-8)
    # Stable descending order keeps the natural column order on ties (it
    # matters for states with degenerate Schmidt coefficients).
    order = np.argsort(-eig.eigenvalues, kind="stable")
    w = eig.eigenvalues[order][:k]
    vk = eig.eigenvectors[:, order][:, :k]
    s = np.sqrt(np.clip(w, 0.0, None))
    if s.size and s[0] > 0.0:
        s = np.where(s > SVD_ZERO_TOL * s[0], s, 0.0)

    u = np.zeros((rows, k), dtype=np.complex128)
    filled = []
    for j in range(k):
        if s[j] == 0.0:
            continue
        col = m @ vk[:, j] / s[j]
        # Modified Gram-Schmidt against earlier columns keeps the frame
        # orthonormal even for tightly clustered singular values.
        for i in filled:
            col = col - u[:, i] * (u[:, i].conj() @ col)
        nrm = np.linalg.norm(col)
        if nrm > 0.5:
            u[:, j] = col / nrm
            filled.append(j)
        else:
            s[j] = 0.0
    missing = [j for j in range(k) if j not in filled]
    if missing:
        extra = _complete_frame(u[:, filled], rows, len(missing))
        for j, col in zip(missing, extra):
            u[:, j] = col
    return u, s, np.ascontiguousarray(vk)


def _complete_frame(existing, dim, count):
    """Deterministically extend orthonormal columns with ``count`` more."""
    cols = [existing[:, j] for j in range(existing.shape[1])]
    out = []
    i = 0
    while len(out) < count:
        if i >= dim:
            raise LinalgError("cannot complete orthonormal frame")
        cand = np.zeros(dim, dtype=np.complex128)
        cand[i] = 1.0
        i += 1
        for b in cols:
            cand = cand - b * (b.conj() @ cand)
        nrm = np.linalg.norm(cand)
        if nrm > 0.5:
            cand = cand / nrm
            cols.append(cand)
            out.append(cand)
    return out


def orthonormal_basis(vectors, rank_tol: float = RANK_TOL, ambient_dim: int | None = None) -> SubspaceBasis:
    """Orthonormal basis of span(vectors) at numerical rank ``rank_tol``.

    The rank threshold is relative to the largest input vector norm.  An
    empty input yields the zero-dimensional subspace, in which case
    ``ambient_dim`` must be given.
    """
    vecs = [np.asarray(v, dtype=np.complex128).ravel() for v in vectors]
    if not vecs:
        if ambient_dim is None:
            raise ValueError("ambient_dim required for an empty vector list")
        return SubspaceBasis(ambient_dim, np.zeros((ambient_dim, 0), dtype=np.complex128))
    dim = vecs[0].size
    if any(v.size != dim for v in vecs):
        raise ValueError("vectors do not share an ambient dimension")
    if ambient_dim is not None and ambient_dim != dim:
        raise ValueError(f"ambient_dim {ambient_dim} does not match vectors of size {dim}")
    max_norm = max(float(np.linalg.norm(v)) for v in vecs)
    if max_norm == 0.0:
        return SubspaceBasis(dim, np.zeros((dim, 0), dtype=np.complex128))
    u, s, _ = svd(np.column_stack(vecs))
    keep = s > rank_tol * max_norm
    return SubspaceBasis(dim, np.ascontiguousarray(u[:, keep]))


def orthogonal_complement(basis: SubspaceBasis) -> SubspaceBasis:
    """Orthonormal basis of the orthogonal complement of ``basis``."""
    d = basis.ambient_dim
    if basis.dim == 0:
        return SubspaceBasis(d, np.eye(d, dtype=np.complex128))
    eig = hermitian_eig(basis.projector(), tol=1e-8)
    keep = eig.eigenvalues < 0.5
    return SubspaceBasis(d, np.ascontiguousarray(eig.eigenvectors[:, keep]))


def subspace_intersection(a: SubspaceBasis, b: SubspaceBasis, tol: float = RANK_TOL) -> SubspaceBasis:
    """Orthonormal basis of the intersection of two subspaces.

    Computed as the eigenspace of P_a P_b P_a with eigenvalue >= 1 - tol;
    an empty intersection yields a zero-dimensional basis.
    """
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("subspaces live in different ambient dimensions")
    d = a.ambient_dim
    if a.dim == 0 or b.dim == 0:
        return SubspaceBasis(d, np.zeros((d, 0), dtype=np.complex128))
    prod = a.projector() @ b.projector() @ a.projector()
    prod = (prod + prod.conj().T) / 2.0
    eig = hermitian_eig(prod, tol=1e-8)
    keep = eig.eigenvalues >= 1.0 - tol
    return SubspaceBasis(d, np.ascontiguousarray(eig.eigenvectors[:, keep]))
