"""Dense linear-algebra helpers shared across the package.

Operators are plain ``numpy`` arrays. Whenever an operation needs to split a
composite system the subsystem dimensions must be passed explicitly; nothing
here guesses a factorization. Subsystem indices are 0-based.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np
from scipy.stats import unitary_group

HERMITIAN_TOL = 1e-9
CHOP_TOL = 1e-10
DENSITY_TOL = 1e-8


def _as_dims(dims: Sequence[int] | None, size: int) -> list[int]:
    if dims is None:
        raise ValueError("subsystem dimensions are required for this operation")
    dims = [int(d) for d in dims]
    if any(d < 1 for d in dims):
        raise ValueError(f"invalid subsystem dimensions {dims}")
    if int(np.prod(dims)) != size:
        raise ValueError(f"dims {dims} do not factor a space of dimension {size}")
    return dims


def _as_square(mat: np.ndarray) -> np.ndarray:
    mat = np.asarray(mat, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {mat.shape}")
    return mat


def tensor(*ops: np.ndarray) -> np.ndarray:
    """Kronecker product of one or more matrices (or vectors).

    Examples
    --------
    >>> tensor(np.eye(2), np.eye(2)).shape
    (4, 4)
    """
    if not ops:
        raise ValueError("tensor needs at least one operand")
    out = np.asarray(ops[0], dtype=complex)
    for op in ops[1:]:
        out = np.kron(out, np.asarray(op, dtype=complex))
    return out


def partial_trace(rho: np.ndarray, dims: Sequence[int], keep: int | Sequence[int]) -> np.ndarray:
    """Reduced operator on the subsystems listed in ``keep``.

    Parameters
    ----------
    rho : np.ndarray
        Square operator on the composite space.
    dims : sequence of int
        Subsystem dimensions; their product must equal ``rho.shape[0]``.
    keep : int or sequence of int
        Subsystems to keep (0-based). An empty sequence returns the full trace
        as a ``1 x 1`` matrix.

    Returns
    -------
    np.ndarray
        The marginal, with kept subsystems in ascending order.
    """
    rho = _as_square(rho)
    dims = _as_dims(dims, rho.shape[0])
    keep = [keep] if isinstance(keep, (int, np.integer)) else sorted(int(k) for k in keep)
    n = len(dims)
    if any(k < 0 or k >= n for k in keep) or len(set(keep)) != len(keep):
        raise ValueError(f"invalid subsystem selection {keep} for dims {dims}")
    traced = [i for i in range(n) if i not in keep]
    t = rho.reshape(dims + dims)
    # trace out from the highest index down so axis numbers stay valid
    for count, i in enumerate(sorted(traced, reverse=True)):
        m = n - count
        t = np.trace(t, axis1=i, axis2=i + m)
    dk = int(np.prod([dims[k] for k in keep])) if keep else 1
    return t.reshape(dk, dk)


def partial_transpose(rho: np.ndarray, dims: Sequence[int], subsystem: int = 0) -> np.ndarray:
    """Partial transpose of a bipartite operator with respect to one side.

    Uses ``<i,j| rho^{T_A} |k,l> = <k,j| rho |i,l>``.
    """
    rho = _as_square(rho)
    dims = _as_dims(dims, rho.shape[0])
    if len(dims) != 2:
        raise ValueError(f"partial transpose needs bipartite dims, got {dims}")
    if subsystem not in (0, 1):
        raise ValueError("subsystem must be 0 or 1")
    da, db = dims
    t = rho.reshape(da, db, da, db)
    if subsystem == 0:
        t = t.transpose(2, 1, 0, 3)
    else:
        t = t.transpose(0, 3, 2, 1)
    return t.reshape(da * db, da * db)


def check_hermitian(h: np.ndarray, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Return ``h`` as a complex array, raising if it is not Hermitian.

    The tolerance is relative to the largest entry magnitude.
    """
    h = _as_square(h)
    scale = max(float(np.max(np.abs(h))) if h.size else 0.0, 1.0)
    if np.max(np.abs(h - h.conj().T), initial=0.0) > tol * scale:
        raise ValueError("matrix is not Hermitian within tolerance")
    return h


def _sort_desc(values: np.ndarray) -> np.ndarray:
    # stable descending order: ties keep their original relative order
    return np.argsort(-values, kind="stable")


def hermitian_spectrum(h: np.ndarray, chop: float = CHOP_TOL) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix in descending order.

    Eigenvalues with magnitude below ``chop`` are reported as exactly 0.
    """
    h = check_hermitian(h)
    vals = np.linalg.eigvalsh((h + h.conj().T) / 2)
    vals = vals[_sort_desc(vals)]
    vals[np.abs(vals) < chop] = 0.0
    return vals


def hermitian_eig(h: np.ndarray, chop: float = CHOP_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition with descending eigenvalues and fixed vector phases.

    Each eigenvector is rescaled so its first largest-magnitude component is
    real and positive.

    Returns
    -------
    values : np.ndarray
        Descending eigenvalues (chopped like :func:`hermitian_spectrum`).
    vectors : np.ndarray
        Columns are the matching normalized eigenvectors.
    """
    h = check_hermitian(h)
    vals, vecs = np.linalg.eigh((h + h.conj().T) / 2)
    order = _sort_desc(vals)
    vals, vecs = vals[order], vecs[:, order]
    vals[np.abs(vals) < chop] = 0.0
    return vals, fix_phases(vecs)


def fix_phases(vecs: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-magnitude component is real positive."""
    vecs = np.array(vecs, dtype=complex)
    flat = vecs.ndim == 1
    if flat:
        vecs = vecs[:, None]
    idx = np.argmax(np.abs(vecs), axis=0)
    pivots = vecs[idx, np.arange(vecs.shape[1])]
    phases = np.where(np.abs(pivots) > 0, pivots / np.where(pivots == 0, 1, np.abs(pivots)), 1.0)
    vecs = vecs / phases
    return vecs[:, 0] if flat else vecs


def trace_norm(h: np.ndarray) -> float:
    """Sum of the absolute eigenvalues of a Hermitian matrix."""
    return float(np.sum(np.abs(hermitian_spectrum(h))))


def schmidt_coefficients(psi: np.ndarray, dims: Sequence[int], tol: float = CHOP_TOL) -> np.ndarray:
    """Nonzero Schmidt coefficients of a bipartite pure state, descending."""
    psi = np.asarray(psi, dtype=complex).ravel()
    dims = _as_dims(dims, psi.size)
    if len(dims) != 2:
        raise ValueError(f"Schmidt decomposition needs bipartite dims, got {dims}")
    s = np.linalg.svd(psi.reshape(dims), compute_uv=False)
    return s[s > tol]


def majorization_compare(x: Sequence[float], y: Sequence[float], mode: str = "strict",
                         tol: float = 1e-10) -> bool:
    """Whether ``x`` is majorized (``strict``) or weakly submajorized (``weak``) by ``y``.

    Both vectors are sorted in descending order before the prefix sums of
    ``x`` are compared against those of ``y``. Strict mode also requires equal
    totals.
    """
    x = np.sort(np.asarray(x, dtype=float))[::-1]
    y = np.sort(np.asarray(y, dtype=float))[::-1]
    if x.shape != y.shape:
        raise ValueError("majorization needs vectors of equal length")
    if mode not in ("strict", "weak"):
        raise ValueError(f"unknown majorization mode {mode!r}")
    cx, cy = np.cumsum(x), np.cumsum(y)
    scale = max(1.0, float(np.max(np.abs(cy), initial=0.0)))
    ok = bool(np.all(cx <= cy + tol * scale))
    if mode == "strict":
        ok = ok and abs(cx[-1] - cy[-1]) <= tol * scale
    return ok


def check_density(rho: np.ndarray, tol: float = DENSITY_TOL) -> np.ndarray:
    """Validate a density matrix: Hermitian, unit trace, positive semidefinite."""
    rho = check_hermitian(rho)
    if abs(np.trace(rho) - 1) > tol:
        raise ValueError(f"density matrix trace is {np.trace(rho).real:.3g}, expected 1")
    if np.linalg.eigvalsh((rho + rho.conj().T) / 2)[0] < -tol:
        raise ValueError("density matrix has a negative eigenvalue")
    return rho


def check_pure(psi: np.ndarray, dims: Sequence[int], tol: float = DENSITY_TOL) -> np.ndarray:
    """Validate a normalized state vector against its subsystem dimensions."""
    psi = np.asarray(psi, dtype=complex).ravel()
    _as_dims(dims, psi.size)
    if abs(np.vdot(psi, psi).real - 1) > tol:
        raise ValueError("state vector is not normalized")
    return psi


def projector(psi: np.ndarray) -> np.ndarray:
    """``|psi><psi|`` for a state vector."""
    psi = np.asarray(psi, dtype=complex).ravel()
    return np.outer(psi, psi.conj())


def purity(rho: np.ndarray) -> float:
    """``Tr(rho^2)`` for a Hermitian operator."""
    rho = np.asarray(rho, dtype=complex)
    return float(np.real(np.vdot(rho, rho)))


# --- random sampling -------------------------------------------------------

def random_pure_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random pure state (normalized complex Gaussian vector)."""
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_pure_states(count: int, dim: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` Haar-random pure states stacked along the first axis."""
    v = rng.normal(size=(count, dim)) + 1j * rng.normal(size=(count, dim))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def random_density(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Random mixed state from partial-tracing a Haar pure state.

    ``rank`` is the ancilla dimension; by default it is drawn uniformly from
    ``1..dim`` so all ranks are exercised.
    """
    if rank is None:
        rank = int(rng.integers(1, dim + 1))
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary."""
    if dim == 1:
        return np.exp(2j * np.pi * rng.random()) * np.ones((1, 1))
    return unitary_group.rvs(dim, random_state=rng)


def random_hermitian(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Hermitian matrix with standard complex Gaussian entries."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (g + g.conj().T) / 2
