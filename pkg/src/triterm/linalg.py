"""Dense complex linear algebra for small operator spaces.

Everything downstream works with explicit numpy arrays: 3x3 system
operators, 2x2 reservoir-unit operators, 24x24 joint-space operators and
9x9 superoperators.  Matrices never exceed ~100x100, so robustness and
determinism win over speed everywhere.

Vectorization convention (used by every module): **column stacking**,
``vec(A)[j*n + i] = A[i, j]``, i.e. ``reshape(order="F")``.  With this
convention ``vec(A @ X @ B) = kron(B.T, A) @ vec(X)``.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

__all__ = [
    "DegenerateKernelError",
    "dagger",
    "herm_part",
    "is_hermitian",
    "kron",
    "matrix_exp",
    "matrix_log_psd",
    "null_vector",
    "unvec",
    "vec",
]

HERMITICITY_RTOL = 1e-12


class DegenerateKernelError(np.linalg.LinAlgError):
    """Kernel extraction failed: singular system or multi-dimensional kernel."""


def dagger(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return a.conj().T


def herm_part(a: np.ndarray) -> np.ndarray:
    """Hermitian part (a + a†)/2."""
    return 0.5 * (a + dagger(a))


def is_hermitian(a: np.ndarray, rtol: float = HERMITICITY_RTOL) -> bool:
    """Check max|a - a†| <= rtol * max|a| (a zero matrix counts as Hermitian)."""
    scale = np.max(np.abs(a))
    if scale == 0.0:
        return True
    return np.max(np.abs(a - dagger(a))) <= rtol * scale


def vec(a: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization."""
    return np.asarray(a, dtype=complex).reshape(-1, order="F")


def unvec(v: np.ndarray, dim: int) -> np.ndarray:
    """Inverse of :func:`vec` for a dim x dim matrix."""
    return np.asarray(v, dtype=complex).reshape((dim, dim), order="F")


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product, dims multiply."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def matrix_exp(a: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Matrix exponential of a square matrix.

    Scaling-and-squaring with a Pade kernel (scipy); at the sizes used
    here the result is accurate far below ``tol``, which callers may use
    as the bound for downstream consistency checks (e.g. unitarity of
    exp of an anti-Hermitian matrix holds to within ~10*tol).
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"matrix_exp needs a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix_exp: input contains NaN/Inf")
    del tol  # accuracy target, see docstring
    return scipy.linalg.expm(a)


def matrix_log_psd(a: np.ndarray, eigen_floor: float = 1e-15) -> np.ndarray:
    """Matrix logarithm of a Hermitian PSD matrix via eigendecomposition.

    Eigenvalues below ``eigen_floor`` are clamped to it before taking the
    log.  Reservoir states at finite temperature are full rank, so the
    clamp is a numerical safety net rather than a physics choice.
    """
    a = np.asarray(a, dtype=complex)
    if not is_hermitian(a):
        raise ValueError("matrix_log_psd: input is not Hermitian")
    w, v = np.linalg.eigh(herm_part(a))
    w = np.maximum(w, eigen_floor)
    return herm_part((v * np.log(w)) @ dagger(v))


def _trace_row_indices(n: int) -> np.ndarray:
    # diagonal entries of the column-stacked n*n space
    return np.arange(n) * (n + 1)


def null_vector(a: np.ndarray, constraint_row: np.ndarray) -> np.ndarray:
    """Solve a @ x = 0 with the normalization constraint_row @ x = 1.

    ``a`` must have a (numerically) one-dimensional kernel.  One row of
    ``a`` is replaced by ``constraint_row`` and the square system is
    solved.  For trace-preserving generators the rows sitting at the
    diagonal positions of the vectorized space sum to zero, so any one of
    them is redundant; the row with the smallest infinity norm (ties to
    the largest index) is replaced -- deterministic and well conditioned.

    Raises :class:`DegenerateKernelError` if the replaced system is
    singular or the residual check reveals a kernel of dimension > 1.
    """
    a = np.asarray(a, dtype=complex)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("null_vector needs a square matrix")
    constraint_row = np.asarray(constraint_row, dtype=complex).reshape(-1)
    if constraint_row.shape != (n,):
        raise ValueError("constraint_row length must match matrix dimension")

    dim = int(round(np.sqrt(n)))
    candidates = _trace_row_indices(dim) if dim * dim == n else np.arange(n)
    norms = np.max(np.abs(a[candidates, :]), axis=1)
    # smallest norm, ties broken toward the largest index
    order = np.lexsort((-candidates, norms))
    row = int(candidates[order[0]])

    m = a.copy()
    m[row, :] = constraint_row
    b = np.zeros(n, dtype=complex)
    b[row] = 1.0
    try:
        x = np.linalg.solve(m, b)
    except np.linalg.LinAlgError as exc:
        raise DegenerateKernelError(
            "singular system after constraint replacement (degenerate parameters?)"
        ) from exc

    scale = max(np.max(np.abs(a)), 1.0)
    residual = np.max(np.abs(a @ x))
    if residual > 1e-10 * scale:
        # distinguish an ill-posed solve from a genuinely larger kernel
        s = np.linalg.svd(a, compute_uv=False)
        near_zero = int(np.sum(s <= 1e-10 * max(s[0], 1.0)))
        if near_zero > 1:
            raise DegenerateKernelError(
                f"kernel dimension {near_zero} > 1 (disconnected dynamics?)"
            )
        raise DegenerateKernelError(
            f"null-space residual {residual:.3e} exceeds 1e-10 * |a|"
        )
    return x
