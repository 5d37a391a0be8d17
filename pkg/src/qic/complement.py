"""Complementarity relations between single-qubit properties and entanglement.

Single-qubit quantities follow the usual conventions: coherence
``nu = 2 |Tr(rho sigma_+)|``, predictability ``p = |Tr(rho sigma_z)|``,
mean square ``S2 = (nu^2 + p^2) / 2`` and mixedness ``M = 1 - Tr rho^2``.
The ``check_*`` helpers return absolute residuals of the identities so that
callers can compare them against whatever tolerance they need.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .densecore import (
    check_density,
    check_pure,
    partial_trace,
    projector,
    purity,
    random_density,
)
from .monotones import overlap_with_flip, spin_flip, tangle_two_qubit

SIGMA_PLUS = np.array([[0, 1], [0, 0]], dtype=complex)
SIGMA_Z = np.diag([1.0, -1.0]).astype(complex)

BELL_STATES = {
    "singlet": np.array([0, 1, -1, 0]) / np.sqrt(2),
    "triplet": np.array([0, 1, 1, 0]) / np.sqrt(2),
    "phi+": np.array([1, 0, 0, 1]) / np.sqrt(2),
    "phi-": np.array([1, 0, 0, -1]) / np.sqrt(2),
}


def mixedness(rho: np.ndarray) -> float:
    """Linear entropy ``1 - Tr rho^2``."""
    return 1.0 - purity(rho)


@dataclass(frozen=True)
class SingleQubitProps:
    """Coherence, predictability and the derived uncertainty split of one qubit."""

    coherence: float
    predictability: float
    mean_square: float
    mixedness: float


@dataclass(frozen=True)
class TwoQubitReport:
    """Decomposition of the single-particle uncertainty of a two-qubit state.

    Attributes
    ----------
    props1, props2 : SingleQubitProps
        Marginal properties of each qubit.
    overlap : float
        ``Tr(rho rho_tilde)``.
    mixedness : float
        ``1 - Tr rho^2`` of the joint state.
    indistinguishability : float
        ``1 - D_HS^2`` between ``rho`` and its spin flip.
    hs_distance : float
        ``sqrt(Tr[(rho - rho_tilde)^2] / 2)``.
    tangle : float
        Wootters tangle.
    separable_uncertainty : float
        ``overlap + mixedness - tangle``.
    """

    props1: SingleQubitProps
    props2: SingleQubitProps
    overlap: float
    mixedness: float
    indistinguishability: float
    hs_distance: float
    tangle: float
    separable_uncertainty: float


def single_qubit_props(rho_k: np.ndarray) -> SingleQubitProps:
    """Single-particle properties of a qubit density matrix."""
    rho_k = check_density(rho_k)
    if rho_k.shape != (2, 2):
        raise ValueError("single_qubit_props needs a 2x2 density matrix")
    nu = 2 * abs(np.trace(rho_k @ SIGMA_PLUS))
    p = abs(np.trace(rho_k @ SIGMA_Z).real)
    return SingleQubitProps(float(nu), float(p), float((nu**2 + p**2) / 2), mixedness(rho_k))


def qubit_marginals(rho: np.ndarray, n: int) -> list[np.ndarray]:
    """All single-qubit marginals of an ``n``-qubit operator."""
    dims = [2] * n
    return [partial_trace(rho, dims, k) for k in range(n)]


def two_qubit_report(rho: np.ndarray) -> TwoQubitReport:
    """Full complementarity bookkeeping for a two-qubit state."""
    rho = check_density(rho)
    if rho.shape != (4, 4):
        raise ValueError("two_qubit_report needs a 4x4 density matrix")
    r1, r2 = qubit_marginals(rho, 2)
    flipped = spin_flip(rho)
    overlap = float(np.real(np.trace(rho @ flipped)))
    diff = rho - flipped
    d_hs = float(np.sqrt(max(np.real(np.trace(diff @ diff)) / 2, 0.0)))
    tau = float(tangle_two_qubit(rho))
    m = mixedness(rho)
    return TwoQubitReport(
        props1=single_qubit_props(r1),
        props2=single_qubit_props(r2),
        overlap=overlap,
        mixedness=m,
        indistinguishability=1 - d_hs**2,
        hs_distance=d_hs,
        tangle=tau,
        separable_uncertainty=overlap + m - tau,
    )


def separable_uncertainty(rho: np.ndarray) -> float:
    """``eta(rho) = Tr(rho rho_tilde) + M(rho) - tau(rho)``."""
    return two_qubit_report(rho).separable_uncertainty


# --- residuals of the identities ---------------------------------------------

def _n_qubits(size: int) -> int:
    n = int(round(np.log2(size)))
    if n < 1 or 2**n != size:
        raise ValueError(f"dimension {size} is not a power of two")
    return n


def check_single_qubit_relation(rho_k: np.ndarray) -> float:
    """``|M + S2 - 1/2|`` for one qubit."""
    pr = single_qubit_props(rho_k)
    return abs(pr.mixedness + pr.mean_square - 0.5)


def check_sum_relation(rho: np.ndarray) -> float:
    """``|sum_k [M(rho_k) + S2(rho_k)] - N/2|`` for an N-qubit state."""
    rho = check_density(rho)
    n = _n_qubits(rho.shape[0])
    total = 0.0
    for rk in qubit_marginals(rho, n):
        pr = single_qubit_props(rk)
        total += pr.mixedness + pr.mean_square
    return abs(total - n / 2)


def check_pure_relation(psi: np.ndarray) -> float:
    """``|sum_k [tau_k(rest) + 2 S2(rho_k)] - N|`` for an N-qubit pure state.

    ``tau_k(rest) = 2 M(rho_k)`` is the pure-state tangle between qubit ``k``
    and the remaining qubits.
    """
    psi = np.asarray(psi, dtype=complex).ravel()
    n = _n_qubits(psi.size)
    psi = check_pure(psi, [2] * n)
    total = 0.0
    for rk in qubit_marginals(projector(psi), n):
        pr = single_qubit_props(rk)
        total += 2 * pr.mixedness + 2 * pr.mean_square
    return abs(total - n)


def _three_qubit_parts(psi: np.ndarray):
    psi = np.asarray(psi, dtype=complex).ravel()
    if psi.size != 8:
        raise ValueError("expected a three-qubit state vector")
    psi = check_pure(psi, [2, 2, 2])
    rho = projector(psi)
    dims = [2, 2, 2]
    singles = [partial_trace(rho, dims, k) for k in range(3)]
    pairs = {(i, j): partial_trace(rho, dims, [i, j]) for i, j in ((0, 1), (0, 2), (1, 2))}
    one_rest = [2 * mixedness(r) for r in singles]
    pair_tau = {k: float(tangle_two_qubit(v)) for k, v in pairs.items()}
    return singles, one_rest, pair_tau


def residual_tangle_three_qubit(psi: np.ndarray, focus: int = 0) -> float:
    """``tau_A(BC) - tau_AB - tau_AC`` with ``A`` the qubit ``focus``.

    The value does not depend on ``focus`` for pure states; the argument only
    exposes that invariance for testing.
    """
    _, one_rest, pair_tau = _three_qubit_parts(psi)
    others = [k for k in range(3) if k != focus]
    pt = sum(pair_tau[tuple(sorted((focus, o)))] for o in others)
    return one_rest[focus] - pt


def check_three_qubit_relation(psi: np.ndarray) -> float:
    """``|tau_123 + (2/3)[tau_12 + tau_13 + tau_23 + sum S2] - 1|``.

    ``tau_123`` is the label-averaged residual tangle.
    """
    singles, one_rest, pair_tau = _three_qubit_parts(psi)
    pairs = sum(pair_tau.values())
    tau123 = (sum(one_rest) - 2 * pairs) / 3
    s2 = sum(single_qubit_props(r).mean_square for r in singles)
    return abs(tau123 + (2 / 3) * (pairs + s2) - 1)


def check_two_qubit_relations(rho: np.ndarray) -> dict[str, float]:
    """Residuals of every two-qubit identity, keyed by a short name.

    Keys
    ----
    overlap_mixedness : ``Tr(rho rho~) + M = M_1 + M_2``
    total : ``Tr(rho rho~) + M + S2_1 + S2_2 = 1``
    indistinguishability : ``Tr(rho rho~) + M = I(rho, rho~)``
    indist_total : ``I + S2_1 + S2_2 = 1``
    eta_marginals : ``eta = M_1 + M_2 - tau``
    eta_total : ``eta + tau + S2_1 + S2_2 = 1``
    """
    r = two_qubit_report(rho)
    s2 = r.props1.mean_square + r.props2.mean_square
    m12 = r.props1.mixedness + r.props2.mixedness
    return {
        "overlap_mixedness": abs(r.overlap + r.mixedness - m12),
        "total": abs(r.overlap + r.mixedness + s2 - 1),
        "indistinguishability": abs(r.overlap + r.mixedness - r.indistinguishability),
        "indist_total": abs(r.indistinguishability + s2 - 1),
        "eta_marginals": abs(r.separable_uncertainty - (m12 - r.tangle)),
        "eta_total": abs(r.separable_uncertainty + r.tangle + s2 - 1),
    }


# --- state families -----------------------------------------------------------

def werner_state(lam: float, bell: str = "singlet") -> np.ndarray:
    """``lam |Bell><Bell| + (1 - lam) I/4``."""
    if not 0 <= lam <= 1:
        raise ValueError(f"Werner weight {lam} outside [0, 1]")
    if bell not in BELL_STATES:
        raise ValueError(f"unknown Bell state {bell!r}; choose from {sorted(BELL_STATES)}")
    return lam * projector(BELL_STATES[bell]) + (1 - lam) * np.eye(4) / 4


def mems_state(x1: float, x2: float) -> np.ndarray:
    """Maximally entangled state for fixed marginal mixedness.

    Nonzero entries: ``x1`` and ``x2`` on the ``|00>``/``|11>`` diagonal with
    coherence ``sqrt(x1 x2)`` between them, and ``1 - x1 - x2`` on ``|10>``.
    """
    if x1 < 0 or x2 < 0 or x1 + x2 > 1 + 1e-12:
        raise ValueError("need x1, x2 >= 0 and x1 + x2 <= 1")
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0], rho[3, 3] = x1, x2
    rho[0, 3] = rho[3, 0] = np.sqrt(x1 * x2)
    rho[2, 2] = 1 - x1 - x2
    return rho


def canonical_form_state(omega: Sequence[float], a: complex, e: complex, f: complex) -> np.ndarray:
    """Local-unitary canonical two-qubit matrix with populations ``omega``.

    ``a`` fills the four single-flip coherences, ``e`` couples ``|00>`` and
    ``|11>``, and ``f`` couples ``|01>`` and ``|10>``. The result is not
    checked for positivity.
    """
    w1, w2, w3, w4 = omega
    ac = np.conj(a)
    return np.array([
        [w1, a, a, e],
        [ac, w2, f, a],
        [ac, np.conj(f), w3, a],
        [np.conj(e), ac, ac, w4],
    ], dtype=complex)


def canonical_form_residual(omega: Sequence[float], a: complex, e: complex, f: complex) -> float:
    """Residual of the variance/covariance decomposition of ``Tr(rho rho~) + M``.

    The right-hand side is ``sum sigma_i^2 - 2 C_14 - 2 C_23 - (nu_1^2 + nu_2^2)/2``
    with ``sigma_i^2 = w_i (1 - w_i)``, ``C_ij = -w_i w_j`` and ``nu_k``
    computed from the marginals.
    """
    rho = canonical_form_state(omega, a, e, f)
    w = np.asarray(omega, dtype=float)
    nus = [single_qubit_props(r).coherence for r in qubit_marginals(rho, 2)]
    rhs = np.sum(w * (1 - w)) + 2 * w[0] * w[3] + 2 * w[1] * w[2] - 0.5 * sum(n * n for n in nus)
    lhs = overlap_with_flip(rho, (2, 2)) + mixedness(rho)
    return abs(lhs - rhs)


def sample_canonical_form(rng: np.random.Generator, max_tries: int = 100000):
    """Draw ``(omega, a, e, f)`` giving a positive canonical-form matrix.

    Populations are flat on the simplex; ``a``, ``e``, ``f`` have uniform
    phases and magnitudes uniform in ``[0, 1/2]``. Non-positive draws are
    rejected.
    """
    for _ in range(max_tries):
        omega = rng.dirichlet(np.ones(4))
        mag = rng.uniform(0, 0.5, size=3)
        ph = np.exp(2j * np.pi * rng.random(3))
        a, e, f = mag * ph
        rho = canonical_form_state(omega, a, e, f)
        if np.linalg.eigvalsh(rho)[0] >= 0:
            return omega, a, e, f
    raise RuntimeError("no positive canonical-form sample found")


def random_qubit_state(n: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Random ``n``-qubit density matrix of the given (or random) rank."""
    return random_density(2**n, rng, rank)


__all__ = [
    "BELL_STATES",
    "SingleQubitProps",
    "TwoQubitReport",
    "canonical_form_residual",
    "canonical_form_state",
    "check_pure_relation",
    "check_single_qubit_relation",
    "check_sum_relation",
    "check_three_qubit_relation",
    "check_two_qubit_relations",
    "mems_state",
    "mixedness",
    "qubit_marginals",
    "random_qubit_state",
    "residual_tangle_three_qubit",
    "sample_canonical_form",
    "separable_uncertainty",
    "single_qubit_props",
    "two_qubit_report",
    "werner_state",
]
