"""Bipartite entanglement measures and the isotropic test family.

All functions take the operator (or state vector) together with explicit
subsystem dimensions. Values that should be nonnegative are clamped to zero
when they fall in ``[-1e-12, 0)``; anything more negative raises, since it
points at a numerical or logic fault rather than round-off.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .densecore import (
    CHOP_TOL,
    check_density,
    check_hermitian,
    check_pure,
    hermitian_eig,
    hermitian_spectrum,
    partial_trace,
    partial_transpose,
    projector,
    purity,
    schmidt_coefficients,
    trace_norm,
)

CLAMP_TOL = 1e-12
RANK_TOL = 1e-9
IMAG_TOL = 1e-9
ROUNDOFF_ULPS = 16

SIGMA_Y = np.array([[0, -1j], [1j, 0]])
YY = np.kron(SIGMA_Y, SIGMA_Y)


class MonotoneValue(float):
    """A nonnegative float tagged with the name of the measure that produced it."""

    measure: str

    def __new__(cls, value: float, measure: str):
        obj = super().__new__(cls, value)
        obj.measure = measure
        return obj

    def __repr__(self) -> str:
        return f"MonotoneValue({float(self)!r}, measure={self.measure!r})"


def clamp_nonnegative(value: float, what: str = "value") -> float:
    """Snap tiny negative round-off to 0; raise on genuinely negative input."""
    value = float(np.real(value))
    if value < -CLAMP_TOL:
        raise ValueError(f"{what} came out negative ({value:.3e})")
    return max(value, 0.0)


def _monotone(value: float, measure: str) -> MonotoneValue:
    return MonotoneValue(clamp_nonnegative(value, measure), measure)


def _bipartite(dims: Sequence[int]) -> tuple[int, int]:
    if dims is None or len(dims) != 2:
        raise ValueError(f"expected bipartite dims, got {dims}")
    return int(dims[0]), int(dims[1])


# --- entropies -------------------------------------------------------------

def shannon_entropy(p: Sequence[float]) -> float:
    """Base-2 Shannon entropy, ignoring zero entries."""
    p = np.asarray(p, dtype=float)
    p = p[p > 0]
    return float(-np.sum(p * np.log2(p)))


def binary_entropy(x: float) -> float:
    """``h(x) = -x log2 x - (1-x) log2 (1-x)`` with ``h(0) = h(1) = 0``."""
    return shannon_entropy([x, 1 - x])


def von_neumann_entropy(rho: np.ndarray) -> float:
    """Base-2 von Neumann entropy of a density matrix."""
    rho = check_density(rho)
    return clamp_nonnegative(shannon_entropy(hermitian_spectrum(rho)), "entropy")


def entropy_of_entanglement(psi: np.ndarray, dims: Sequence[int]) -> MonotoneValue:
    """Entropy of either marginal of a bipartite pure state."""
    _bipartite(dims)
    psi = check_pure(psi, dims)
    c = schmidt_coefficients(psi, dims)
    return _monotone(shannon_entropy(c**2), "E_S")


# --- spin flip / universal inversion ---------------------------------------

def spin_flip(rho: np.ndarray, dims: Sequence[int] = (2, 2), method: str = "auto") -> np.ndarray:
    """Spin-flipped operator.

    For two qubits (``method='pauli'``) this is ``(Y x Y) rho* (Y x Y)``. The
    general branch (``method='inversion'``) is the universal inversion
    ``Tr(rho) I - rho_A x I - I x rho_B + rho``. The two agree on two qubits;
    ``'auto'`` picks the Pauli form when the dims are ``[2, 2]``.
    """
    da, db = _bipartite(dims)
    rho = np.asarray(rho, dtype=complex)
    if method == "auto":
        method = "pauli" if (da, db) == (2, 2) else "inversion"
    if method == "pauli":
        if (da, db) != (2, 2):
            raise ValueError("the Pauli spin flip is only defined for two qubits")
        return YY @ rho.conj() @ YY
    if method != "inversion":
        raise ValueError(f"unknown spin-flip method {method!r}")
    return universal_inversion(rho, (da, db))


def universal_inversion(op: np.ndarray, dims: Sequence[int]) -> np.ndarray:
    """``Tr(op) I - op_A x I - I x op_B + op`` (no Hermiticity assumed)."""
    da, db = _bipartite(dims)
    op = np.asarray(op, dtype=complex)
    t = op.reshape(da, db, da, db)
    op_a = np.einsum("ijkj->ik", t)
    op_b = np.einsum("ijil->jl", t)
    return (np.trace(op) * np.eye(da * db) - np.kron(op_a, np.eye(db))
            - np.kron(np.eye(da), op_b) + op)


# --- two-qubit concurrence --------------------------------------------------

def _drop_roundoff(vals: np.ndarray) -> np.ndarray:
    floor = ROUNDOFF_ULPS * np.finfo(float).eps * np.max(np.abs(vals), axis=-1, keepdims=True)
    return np.where(vals > floor, vals, 0.0)


def _wootters_lambdas(rho: np.ndarray, method: str = "svd") -> np.ndarray:
    """Square roots of the eigenvalues of ``rho rho_tilde``, descending.

    ``method='eig'`` takes them literally from the non-Hermitian product.
    ``method='svd'`` (default) uses the identity that they are the singular
    values of ``W^T (Y x Y) W`` for any factor ``rho = W W^dagger``; this
    avoids square roots of round-off near zero, which otherwise cost about
    eight digits on rank-deficient inputs. Eigenvalues of ``rho`` at the
    round-off floor are zeroed before building ``W`` for the same reason.
    """
    if method == "svd":
        vals, vecs = np.linalg.eigh(rho)
        w = vecs * np.sqrt(_drop_roundoff(vals))
        return np.linalg.svd(w.T @ YY @ w, compute_uv=False)
    if method != "eig":
        raise ValueError(f"unknown method {method!r}")
    ev = np.linalg.eigvals(rho @ spin_flip(rho))
    scale = max(1.0, float(np.max(np.abs(ev))))
    if np.max(np.abs(ev.imag)) > IMAG_TOL * scale:
        raise ValueError("rho * rho_tilde has eigenvalues with large imaginary parts")
    ev = ev.real
    if ev.min() < -IMAG_TOL * scale:
        raise ValueError("rho * rho_tilde has a negative eigenvalue")
    return np.sort(np.sqrt(np.clip(ev, 0, None)))[::-1]


def concurrence_two_qubit(rho: np.ndarray, method: str = "svd") -> MonotoneValue:
    """Wootters concurrence ``max(0, l1 - l2 - l3 - l4)``.

    See :func:`_wootters_lambdas` for the two ways of computing the ``l_i``.
    """
    rho = check_density(rho)
    if rho.shape != (4, 4):
        raise ValueError("two-qubit concurrence needs a 4x4 density matrix")
    lam = _wootters_lambdas(rho, method)
    return MonotoneValue(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]), "C2")


def tangle_two_qubit(rho: np.ndarray) -> MonotoneValue:
    """Two-qubit tangle, the squared concurrence."""
    return MonotoneValue(float(concurrence_two_qubit(rho)) ** 2, "tau2")


def eof_from_concurrence(c: float) -> float:
    """``eps(C) = h((1 + sqrt(1 - C^2)) / 2)``."""
    c = min(max(float(c), 0.0), 1.0)
    return binary_entropy((1 + np.sqrt(1 - c * c)) / 2)


def eof_two_qubit(rho: np.ndarray) -> MonotoneValue:
    """Entanglement of formation of a two-qubit state."""
    return MonotoneValue(eof_from_concurrence(concurrence_two_qubit(rho)), "E_F")


# --- I-tangle ---------------------------------------------------------------

def i_tangle_pure(psi: np.ndarray, dims: Sequence[int], scale: float = 1.0) -> MonotoneValue:
    """Pure-state I-tangle ``2 * scale * (1 - Tr rho_A^2)``.

    ``scale`` is the product of the two scale factors; the I-concurrence is
    the square root of the returned value.
    """
    _bipartite(dims)
    psi = check_pure(psi, dims)
    rho_a = partial_trace(projector(psi), dims, 0)
    return _monotone(2 * scale * (1 - purity(rho_a)), "tau")


def overlap_with_flip(rho: np.ndarray, dims: Sequence[int]) -> float:
    """``Tr(rho rho_tilde)`` using the universal inversion."""
    return float(np.real(np.trace(rho @ universal_inversion(rho, dims))))


def osborne_matrix(vectors: np.ndarray, dims: Sequence[int]) -> np.ndarray:
    """Real symmetric 3x3 matrix whose smallest eigenvalue fixes the rank-2 tangle.

    Parameters
    ----------
    vectors : np.ndarray
        Two orthonormal columns spanning the support of the state.
    dims : sequence of int
        Bipartite dimensions.

    Notes
    -----
    Builds the outer products ``gamma[i][j] = |e_i><e_j|``, their universal
    inversions (of the adjoint), the tensor ``T[i,j,k,l] = Tr(gamma_ij
    flip(gamma_kl^dagger))`` and then combines its entries into the matrix.
    """
    e = [vectors[:, 0], vectors[:, 1]]
    gamma = [[np.outer(e[i], e[j].conj()) for j in range(2)] for i in range(2)]
    flip = [[universal_inversion(gamma[k][l].conj().T, dims) for l in range(2)] for k in range(2)]
    T = np.empty((2, 2, 2, 2), dtype=complex)
    for i in range(2):
        for j in range(2):
            for k in range(2):
                for l in range(2):
                    T[i, j, k, l] = np.trace(gamma[i][j] @ flip[k][l])

    def t(i, j, k, l):  # 1-based indexing keeps the combinations readable
        return T[i - 1, j - 1, k - 1, l - 1]

    m11 = t(1, 2, 2, 1) / 4 + t(1, 1, 2, 2) / 2 + t(2, 1, 1, 2) / 4
    m12 = 1j / 4 * (t(1, 2, 2, 1) - t(2, 1, 1, 2))
    m13 = (t(1, 1, 2, 1) - t(2, 1, 2, 2) + t(1, 1, 1, 2) - t(1, 2, 2, 2)) / 4
    m22 = -t(1, 2, 2, 1) / 4 + t(1, 1, 2, 2) / 2 - t(2, 1, 1, 2) / 4
    m23 = 1j / 4 * (t(1, 1, 2, 1) - t(1, 1, 1, 2) + t(2, 1, 2, 2) - t(1, 2, 2, 2))
    m33 = t(1, 1, 1, 1) / 4 - t(1, 1, 2, 2) / 2 + t(2, 2, 2, 2) / 4
    m = np.array([[m11, m12, m13], [m12, m22, m23], [m13, m23, m33]])
    if np.max(np.abs(m.imag)) > 1e-9:
        raise ValueError("M matrix is not real; check the eigenvector input")
    return m.real


def rank2_support(rho: np.ndarray) -> np.ndarray:
    """Two eigenvectors (columns) spanning the support of a rank <= 2 state."""
    vals, vecs = hermitian_eig(rho)
    if np.any(vals[2:] > RANK_TOL) or np.any(vals < -RANK_TOL):
        raise ValueError("state has rank greater than two")
    return vecs[:, :2]


def i_tangle_rank2(rho: np.ndarray, dims: Sequence[int]) -> MonotoneValue:
    """I-tangle of a bipartite state of rank at most two.

    ``Tr(rho rho_tilde) + 2 lambda_min (1 - Tr rho^2)``, where ``lambda_min``
    is the smallest eigenvalue of :func:`osborne_matrix`.
    """
    _bipartite(dims)
    rho = check_density(rho)
    m = osborne_matrix(rank2_support(rho), dims)
    lam_min = float(np.linalg.eigvalsh(m)[0])
    value = overlap_with_flip(rho, dims) + 2 * lam_min * (1 - purity(rho))
    return _monotone(value, "tau")


def osborne_lambda_min(rho: np.ndarray, dims: Sequence[int]) -> float:
    """Smallest eigenvalue of the M matrix for a rank <= 2 state."""
    return float(np.linalg.eigvalsh(osborne_matrix(rank2_support(rho), dims))[0])


# --- negativity family ------------------------------------------------------

def negative_pt_eigenvalues(rho: np.ndarray, dims: Sequence[int]) -> np.ndarray:
    """Absolute values of the negative eigenvalues of the partial transpose."""
    _bipartite(dims)
    rho = check_density(rho)
    vals = hermitian_spectrum(partial_transpose(rho, dims, 0))
    return -vals[vals < 0]


def negativity(rho: np.ndarray, dims: Sequence[int]) -> MonotoneValue:
    """Sum of absolute values of negative partial-transpose eigenvalues."""
    return _monotone(float(np.sum(negative_pt_eigenvalues(rho, dims))), "N")


def negativity_from_trace_norm(rho: np.ndarray, dims: Sequence[int]) -> float:
    """``(||rho^{T_A}||_1 - 1) / 2``; equals :func:`negativity` for density matrices."""
    return (trace_norm(partial_transpose(rho, dims, 0)) - 1) / 2


def pt_norm_functional(h: np.ndarray, dims: Sequence[int], p: float = 1.0,
                       mode: str = "root") -> float:
    """``M_p`` (root) or ``N_p`` (power) of an arbitrary Hermitian operator.

    Works on any Hermitian input, not just states, which is what the
    convexity and triangle-inequality properties are stated for.
    """
    if p < 1:
        raise ValueError("p must be at least 1")
    if mode not in ("root", "power"):
        raise ValueError(f"unknown mode {mode!r}")
    h = check_hermitian(h)
    vals = hermitian_spectrum(partial_transpose(h, dims, 0))
    neg = -vals[vals < 0]
    power_sum = float(np.sum(neg**p))
    return power_sum ** (1 / p) if mode == "root" else power_sum


def pt_monotone(rho: np.ndarray, dims: Sequence[int], p: float = 1.0,
                mode: str = "root") -> MonotoneValue:
    """Partial-transpose monotone: ``(sum |l-|^p)^(1/p)`` or ``sum |l-|^p``."""
    if p < 1:
        raise ValueError("p must be at least 1")
    if mode not in ("root", "power"):
        raise ValueError(f"unknown mode {mode!r}")
    neg = negative_pt_eigenvalues(rho, dims)
    power_sum = float(np.sum(neg**p))
    value = power_sum ** (1 / p) if mode == "root" else power_sum
    return _monotone(value, "M_p" if mode == "root" else "N_p")


def lower_bounds(rho: np.ndarray, dims: Sequence[int]) -> tuple[MonotoneValue, MonotoneValue]:
    """``(L_C, L_tau)`` with ``L_C = 2 M_2`` and ``L_tau = L_C^2``."""
    lc = 2 * float(pt_monotone(rho, dims, p=2, mode="root"))
    return MonotoneValue(lc, "L_C"), MonotoneValue(lc * lc, "L_tau")


# --- isotropic family -------------------------------------------------------

@dataclass(frozen=True)
class IsotropicFamily:
    """Mixture ``(1 - omega) I/d^2 + omega |Psi+><Psi+|``.

    Build it with :meth:`from_omega` or :meth:`from_fidelity`; the two
    parameters are tied by ``omega = (d^2 F - 1) / (d^2 - 1)``.
    """

    d: int
    omega: float
    fidelity: float

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("isotropic family needs d >= 2")
        if not (-1e-12 <= self.omega <= 1 + 1e-12):
            raise ValueError(f"omega={self.omega} outside [0, 1]")
        expect = (self.d**2 * self.fidelity - 1) / (self.d**2 - 1)
        if abs(expect - self.omega) > 1e-12:
            raise ValueError("omega and fidelity are inconsistent")

    @classmethod
    def from_omega(cls, d: int, omega: float) -> "IsotropicFamily":
        f = (omega * (d**2 - 1) + 1) / d**2
        return cls(d, float(omega), float(f))

    @classmethod
    def from_fidelity(cls, d: int, fidelity: float) -> "IsotropicFamily":
        omega = (d**2 * fidelity - 1) / (d**2 - 1)
        return cls(d, float(omega), float(fidelity))


def max_entangled(d: int) -> np.ndarray:
    """``|Psi+> = sum_i |i>|i> / sqrt(d)``."""
    v = np.zeros(d * d, dtype=complex)
    v[np.arange(d) * (d + 1)] = 1 / np.sqrt(d)
    return v


def isotropic_state(fam: IsotropicFamily) -> np.ndarray:
    """Density matrix of an isotropic state on ``d x d``."""
    d = fam.d
    return (1 - fam.omega) * np.eye(d * d) / d**2 + fam.omega * projector(max_entangled(d))


def isotropic_lc_analytic(fam: IsotropicFamily) -> float:
    """Closed form of ``L_C`` on isotropic states.

    ``(2/d) ((omega - 1)/d + omega) sqrt(d(d-1)/2)`` above the separability
    threshold ``omega = 1/(d+1)`` and zero at or below it.
    """
    d, w = fam.d, fam.omega
    if w <= 1 / (d + 1):
        return 0.0
    return (2 / d) * ((w - 1) / d + w) * np.sqrt(d * (d - 1) / 2)


# --- batched kernels for large random sweeps --------------------------------

def wootters_concurrence_batch(rhos: np.ndarray) -> np.ndarray:
    """Concurrence of a stack of two-qubit states, shape ``(B, 4, 4)``."""
    vals, vecs = np.linalg.eigh(rhos)
    w = vecs * np.sqrt(_drop_roundoff(vals))[:, None, :]
    lam = np.linalg.svd(np.swapaxes(w, 1, 2) @ YY @ w, compute_uv=False)
    return np.maximum(0.0, lam[:, 0] - lam[:, 1] - lam[:, 2] - lam[:, 3])


def i_tangle_rank2_batch(rhos: np.ndarray, dims: Sequence[int]) -> np.ndarray:
    """Rank-2 I-tangle for a stack of states, via Bloch coordinates of the support.

    Equivalent to :func:`i_tangle_rank2` (the M matrix equals
    ``Tr(s_a flip(s_b)) / 4`` for Pauli operators ``s_a`` on the support);
    this form vectorizes cleanly.
    """
    da, db = _bipartite(dims)
    b = rhos.shape[0]
    vals, vecs = np.linalg.eigh(rhos)
    if np.any(vals[:, :-2] > RANK_TOL):
        raise ValueError("a state in the batch has rank greater than two")
    e1, e2 = vecs[:, :, -1], vecs[:, :, -2]
    o = lambda u, v: np.einsum("bi,bj->bij", u, v.conj())
    g11, g12, g21, g22 = o(e1, e1), o(e1, e2), o(e2, e1), o(e2, e2)
    sig = np.stack([g12 + g21, -1j * g12 + 1j * g21, g11 - g22], axis=1)  # (B,3,D,D)
    t = sig.reshape(b, 3, da, db, da, db)
    sa = np.einsum("bxijkj->bxik", t)
    sb = np.einsum("bxijil->bxjl", t)
    tr_a = np.einsum("bxik,byki->bxy", sa, sa)
    tr_b = np.einsum("bxjl,bylj->bxy", sb, sb)
    m = (2 * np.eye(3)[None] - tr_a - tr_b).real / 4
    lam_min = np.linalg.eigvalsh(m)[:, 0]
    rt = rhos.reshape(b, da, db, da, db)
    ra = np.einsum("bijkj->bik", rt)
    rb = np.einsum("bijil->bjl", rt)
    pur = lambda r: np.einsum("bij,bji->b", r, r).real
    overlap = 1 - pur(ra) - pur(rb) + pur(rhos)
    return overlap + 2 * lam_min * (1 - pur(rhos))


__all__ = [
    "CHOP_TOL",
    "IsotropicFamily",
    "MonotoneValue",
    "binary_entropy",
    "clamp_nonnegative",
    "concurrence_two_qubit",
    "entropy_of_entanglement",
    "eof_from_concurrence",
    "eof_two_qubit",
    "i_tangle_pure",
    "i_tangle_rank2",
    "i_tangle_rank2_batch",
    "isotropic_lc_analytic",
    "isotropic_state",
    "lower_bounds",
    "max_entangled",
    "negativity",
    "negativity_from_trace_norm",
    "osborne_lambda_min",
    "osborne_matrix",
    "overlap_with_flip",
    "pt_monotone",
    "pt_norm_functional",
    "shannon_entropy",
    "spin_flip",
    "tangle_two_qubit",
    "universal_inversion",
    "von_neumann_entropy",
    "wootters_concurrence_batch",
]
