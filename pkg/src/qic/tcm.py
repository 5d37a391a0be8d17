"""Exact dynamics and entanglement of two atoms coupled to one field mode.

The Tavis-Cummings interaction conserves ``K = a^dagger a + (#excited atoms)``,
so evolution is exact and block diagonal: every sector ``K = k`` is spanned
by ``|ee, k-2>, |eg, k-1>, |ge, k-1>, |gg, k>`` and evolves under a closed-form
4x4 unitary. Time is measured in units of ``1/g`` and the free Hamiltonian is
dropped (interaction picture).

Atomic basis order is ``(ee, eg, ge, gg)``, which is the computational order
``|00>, |01>, |10>, |11>`` with ``e = |0>``. The joint state vector is laid
out as ``atom1 x atom2 x field``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.special import gammaln

from .densecore import partial_trace, projector, purity
from .monotones import (
    clamp_nonnegative,
    concurrence_two_qubit,
    i_tangle_rank2,
    i_tangle_rank2_batch,
    osborne_lambda_min,
    wootters_concurrence_batch,
)

ATOM_LABELS = ("ee", "eg", "ge", "gg")
EXCITATIONS = np.array([2, 1, 1, 0])
RESIDUAL_TOL = 1e-10
WINDOW_TOL = 1e-12

ATOMIC_PRESETS = {
    "ee": np.array([1, 0, 0, 0], dtype=complex),
    "gg": np.array([0, 0, 0, 1], dtype=complex),
    "sym-eg": np.array([0, 1, 1, 0], dtype=complex) / np.sqrt(2),
    "sym-ggee": np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2),
}
_ATOM_ALIASES = {"symmetric_eg": "sym-eg", "symmetric_gg_ee": "sym-ggee"}


# --- propagator ---------------------------------------------------------------

def propagator_blocks(ks: np.ndarray, t: float, g: float = 1.0) -> np.ndarray:
    """Stack of 4x4 sector propagators, one per excitation number in ``ks``.

    For ``k = 1`` the first row and column reduce to the identity (the
    ``|ee, -1>`` slot does not exist); for ``k = 0`` the whole block is the
    identity, acting on ``|gg, 0>``.
    """
    ks = np.asarray(ks, dtype=float)
    if np.any(ks < 0):
        raise ValueError("excitation number must be nonnegative")
    out = np.zeros((ks.size, 4, 4), dtype=complex)
    kk = np.where(ks >= 1, ks, 1.0)
    gam, dlt = kk - 1, 2 * kk - 1
    beta = np.sqrt(2 * dlt) * g * t
    c, s = np.cos(beta), np.sin(beta)
    a = 1j / np.sqrt(2) * np.sqrt(gam / dlt) * s
    b = 1j / np.sqrt(2) * np.sqrt(kk / dlt) * s
    corner = -np.sqrt(kk * gam) / dlt * (1 - c)
    out[:, 0, 0] = (gam * c + kk) / dlt
    # the matrix is symmetric: every sin term carries -i, as exp(-iHt) requires
    out[:, 0, 1] = out[:, 0, 2] = -a
    out[:, 0, 3] = corner
    out[:, 1, 0] = out[:, 2, 0] = -a
    out[:, 1, 1] = out[:, 2, 2] = (c + 1) / 2
    out[:, 1, 2] = out[:, 2, 1] = (c - 1) / 2
    out[:, 1, 3] = out[:, 2, 3] = -b
    out[:, 3, 0] = corner
    out[:, 3, 1] = out[:, 3, 2] = -b
    out[:, 3, 3] = (kk * c + gam) / dlt
    out[ks == 0] = np.eye(4)
    return out


def propagator_block(k: int, t: float, g: float = 1.0) -> np.ndarray:
    """Propagator restricted to one excitation sector.

    Returns the 4x4 block for ``k >= 2``, the 3x3 block on
    ``|eg, 0>, |ge, 0>, |gg, 1>`` for ``k = 1`` and ``[[1]]`` for ``k = 0``.
    """
    if k < 0:
        raise ValueError("excitation number must be nonnegative")
    u = propagator_blocks(np.array([k]), t, g)[0]
    if k >= 2:
        return u
    if k == 1:
        return u[1:, 1:]
    return np.ones((1, 1), dtype=complex)


# --- configuration and state ----------------------------------------------

def coherent_window(alpha: float) -> tuple[int, int]:
    """Photon window ``[max(floor(a^2 - 3a), 0), ceil(a^2 + 3a)]``."""
    return max(math.floor(alpha**2 - 3 * alpha), 0), math.ceil(alpha**2 + 3 * alpha)


def coherent_amplitudes(alpha: float, ns: np.ndarray) -> np.ndarray:
    """``exp(-a^2/2) a^n / sqrt(n!)`` for real ``alpha >= 0``, computed in log space."""
    ns = np.asarray(ns, dtype=float)
    if alpha == 0:
        return (ns == 0).astype(float)
    return np.exp(-alpha**2 / 2 + ns * np.log(alpha) - 0.5 * gammaln(ns + 1))


@dataclass(frozen=True)
class TCMConfig:
    """Initial condition of a two-atom run.

    Parameters
    ----------
    field_kind : {'fock', 'coherent'}
    field_param : float
        Photon number for ``fock``, real amplitude ``alpha`` for ``coherent``.
    atoms : str or array_like
        Preset name (``ee``, ``gg``, ``sym-eg``, ``sym-ggee``) or four
        amplitudes in ``(ee, eg, ge, gg)`` order.
    window : (int, int), optional
        Photon window ``[S_min, S_max]`` of the initial field; defaults to
        ``[n, n]`` for Fock states and the +-3 alpha window for coherent ones.
    g : float
        Coupling rate.
    """

    field_kind: str
    field_param: float
    atoms: object = "ee"
    window: tuple[int, int] | None = None
    g: float = 1.0

    def __post_init__(self):
        if self.field_kind not in ("fock", "coherent"):
            raise ValueError(f"unknown field kind {self.field_kind!r}")
        if self.field_param < 0:
            raise ValueError("field parameter must be nonnegative")
        if self.field_kind == "fock" and int(self.field_param) != self.field_param:
            raise ValueError("Fock photon number must be an integer")

    @classmethod
    def parse(cls, field_spec: str, atoms: str = "ee", **kw) -> "TCMConfig":
        """Build from strings such as ``fock:10`` or ``coherent:10``."""
        kind, _, value = field_spec.partition(":")
        if not value:
            raise ValueError(f"field spec {field_spec!r} should look like fock:N or coherent:ALPHA")
        return cls(kind, float(value), atoms, **kw)

    @property
    def photon_window(self) -> tuple[int, int]:
        if self.window is not None:
            lo, hi = self.window
            if lo < 0 or hi < lo:
                raise ValueError(f"empty or invalid photon window {self.window}")
            return int(lo), int(hi)
        if self.field_kind == "fock":
            n = int(self.field_param)
            return n, n
        return coherent_window(self.field_param)

    def atomic_amplitudes(self) -> np.ndarray:
        if isinstance(self.atoms, str):
            key = _ATOM_ALIASES.get(self.atoms, self.atoms)
            if key not in ATOMIC_PRESETS:
                raise ValueError(f"unknown atomic preset {self.atoms!r}")
            return ATOMIC_PRESETS[key].copy()
        amp = np.asarray(self.atoms, dtype=complex).ravel()
        if amp.size != 4 or np.linalg.norm(amp) == 0:
            raise ValueError("custom atomic state needs four amplitudes, not all zero")
        return amp / np.linalg.norm(amp)

    def mean_photons(self) -> float:
        return self.field_param if self.field_kind == "fock" else self.field_param**2


@dataclass(frozen=True)
class TCMState:
    """Joint amplitudes ``amps[a, i]`` for atomic label ``a`` and photon ``n_min + i``."""

    amps: np.ndarray
    n_min: int
    time: float = 0.0
    g: float = 1.0
    discarded: float = field(default=0.0, compare=False)

    @property
    def field_dim(self) -> int:
        return self.amps.shape[1]

    @property
    def photons(self) -> np.ndarray:
        return self.n_min + np.arange(self.field_dim)

    @property
    def dims(self) -> list[int]:
        return [2, 2, self.field_dim]

    @property
    def vector(self) -> np.ndarray:
        return self.amps.ravel()

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def mean_excitation(self) -> float:
        k = EXCITATIONS[:, None] + self.photons[None, :]
        return float(np.sum(np.abs(self.amps) ** 2 * k))


def initial_state(cfg: TCMConfig) -> TCMState:
    """Product of the atomic state with the (renormalized) windowed field.

    The field basis is padded so that every sector touched by the initial
    state fits: up to two photons above for excited components and two below
    for ground components.
    """
    atoms = cfg.atomic_amplitudes()
    s_min, s_max = cfg.photon_window
    ns = np.arange(s_min, s_max + 1)
    if cfg.field_kind == "fock":
        c = (ns == int(cfg.field_param)).astype(float)
    else:
        c = coherent_amplitudes(cfg.field_param, ns)
    mass = float(np.sum(c**2))
    if mass == 0:
        raise ValueError("photon window contains none of the field distribution")
    discarded = max(0.0, 1.0 - mass)
    if discarded > 1e-3:
        warnings.warn(f"photon window discards {discarded:.3g} of the field probability", stacklevel=2)
    c = c / np.sqrt(mass)
    active = EXCITATIONS[np.abs(atoms) > 0]
    n_lo = max(s_min + int(active.min()) - 2, 0)
    n_hi = s_max + int(active.max())
    amps = np.zeros((4, n_hi - n_lo + 1), dtype=complex)
    amps[:, s_min - n_lo: s_max - n_lo + 1] = np.outer(atoms, c)
    return TCMState(amps, n_lo, 0.0, cfg.g, discarded)


def evolve(state: TCMState, t: float) -> TCMState:
    """Evolve exactly by a duration ``t``.

    Amplitudes are regrouped by excitation number, multiplied by the sector
    propagator and scattered back. Raises if amplitude would leave the
    photon window.
    """
    if t == 0:
        return state
    d, n0 = state.field_dim, state.n_min
    ks = np.arange(n0, n0 + d + 2)
    blocks = propagator_blocks(ks, t, state.g)
    # photon number of each sector member: k - excitation
    idx = ks[:, None] - EXCITATIONS[None, :] - n0
    inside = (idx >= 0) & (idx < d)
    gathered = np.zeros((ks.size, 4), dtype=complex)
    for a in range(4):
        gathered[inside[:, a], a] = state.amps[a, idx[inside[:, a], a]]
    out = np.einsum("kij,kj->ki", blocks, gathered)
    if np.any(np.abs(out[~inside]) > 1e-10):
        raise ValueError("evolution left the photon window; widen the truncation")
    amps = np.zeros_like(state.amps)
    for a in range(4):
        amps[a, idx[inside[:, a], a]] = out[inside[:, a], a]
    return TCMState(amps, n0, state.time + t, state.g, state.discarded)


def state_at(state0: TCMState, t: float) -> TCMState:
    """State at absolute time ``t`` from an initial snapshot."""
    return evolve(state0, t - state0.time)


# --- marginals and tangles ------------------------------------------------------

def marginals(state: TCMState) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``(rho_atoms, rho_atom1, rho_atom1_field)``.

    ``rho_atom1_field`` lives on ``[2, D_F]`` with atom 1 as the first factor.
    """
    a = state.amps
    rho_atoms = a @ a.conj().T
    t = a.reshape(2, 2, -1)
    rho_a1 = np.einsum("abn,cbn->ac", t, t.conj())
    d = state.field_dim
    rho_a1f = np.einsum("abn,cbm->ancm", t, t.conj()).reshape(2 * d, 2 * d)
    return rho_atoms, rho_a1, rho_a1f


def atom2_field_marginal(state: TCMState) -> np.ndarray:
    """``rho_{A2 F}`` on ``[2, D_F]``."""
    t = state.amps.reshape(2, 2, -1)
    d = state.field_dim
    return np.einsum("ban,bcm->ancm", t, t.conj()).reshape(2 * d, 2 * d)


def field_marginal(state: TCMState) -> np.ndarray:
    """Reduced field density matrix ``rho_F``."""
    a = state.amps
    return a.T @ a.conj()


def atomic_inversion(state: TCMState) -> float:
    """``P(ee) - P(gg)``."""
    p = np.sum(np.abs(state.amps) ** 2, axis=1)
    return float(p[0] - p[3])


class BipartiteTangles(NamedTuple):
    field_ensemble: float
    atom_remainder: float
    atom_atom: float
    atom_field: float


def _field_ensemble(rho_atoms: np.ndarray) -> float:
    return clamp_nonnegative(2 * (1 - purity(rho_atoms)), "field-ensemble tangle")


def atom_field_tangle_two_ways(state: TCMState) -> tuple[float, float]:
    """Atom-1/field tangle computed directly and through the shortcut identity.

    The direct value is the rank-2 I-tangle of ``rho_A1F``. The identity
    replaces ``Tr(rho rho~)`` by half the field-ensemble tangle, which holds
    when the atoms are exchange symmetric.
    """
    rho_atoms, rho_a1, rho_a1f = marginals(state)
    dims = (2, state.field_dim)
    direct = float(i_tangle_rank2(rho_a1f, dims))
    lam = osborne_lambda_min(rho_a1f, dims)
    tau_f = _field_ensemble(rho_atoms)
    tau_rest = 2 * (1 - purity(rho_a1))
    return direct, 0.5 * tau_f + lam * tau_rest


def bipartite_tangles(state: TCMState) -> BipartiteTangles:
    """Field/ensemble, atom-1/rest, atom/atom and atom-1/field tangles."""
    rho_atoms, rho_a1, rho_a1f = marginals(state)
    return BipartiteTangles(
        _field_ensemble(rho_atoms),
        clamp_nonnegative(2 * (1 - purity(rho_a1)), "atom-remainder tangle"),
        float(concurrence_two_qubit(rho_atoms)) ** 2,
        float(i_tangle_rank2(rho_a1f, (2, state.field_dim))),
    )


def _clamp_residual(value: float) -> float:
    # small round-off is snapped; genuine negatives are returned untouched
    return 0.0 if -RESIDUAL_TOL <= value < 0 else float(value)


def i_residual_tangle(state: TCMState, field_dim: int = 3) -> float:
    """Label-averaged residual tangle with the field treated as ``field_dim``-level.

    ``(1/3)[tau_A1 + tau_A2 + (d/2) tau_F - 2(tau_A1A2 + tau_A1F + tau_A2F)]``;
    with exchange symmetry it is
    ``(1/3)[2 tau_A1(A2F) + (3/2) tau_F - 2 tau_A1A2 - 4 tau_A1F]`` at ``d = 3``.
    Negative values beyond round-off are returned as is.
    """
    return i_residual_tangle_pure(state.vector, state.dims, field_dim)


# --- general 2 x 2 x D residual tangle --------------------------------------------

def effective_dimension(psi: np.ndarray, dims, tol: float = 1e-9) -> int:
    """Schmidt rank of the third party against the two qubits (at most 4)."""
    da, db, dc = dims
    s = np.linalg.svd(np.asarray(psi).reshape(da * db, dc), compute_uv=False)
    return min(int(np.sum(s > tol)), da * db)


def i_residual_tangle_pure(psi: np.ndarray, dims=None, field_dim: int | None = None) -> float:
    """I-residual tangle of a pure state on ``2 x 2 x D``.

    Each bipartite tangle uses the scale ``m/2`` with ``m`` the smaller of the
    two (effective) dimensions, so only the third-party-versus-qubits term
    picks up ``d/2``. ``field_dim`` defaults to the Schmidt rank of the third
    party; for three qubits the ordinary residual tangle is recovered.
    """
    psi = np.asarray(psi, dtype=complex).ravel()
    if dims is None:
        dims = [2, 2, psi.size // 4]
    da, db, dc = (int(x) for x in dims)
    if (da, db) != (2, 2) or da * db * dc != psi.size:
        raise ValueError(f"expected dims [2, 2, D] for a vector of size {psi.size}")
    d = effective_dimension(psi, dims) if field_dim is None else int(field_dim)
    rho = projector(psi)
    r_a = partial_trace(rho, dims, 0)
    r_b = partial_trace(rho, dims, 1)
    r_ab = partial_trace(rho, dims, [0, 1])
    r_ac = partial_trace(rho, dims, [0, 2])
    r_bc = partial_trace(rho, dims, [1, 2])
    t_a = 2 * (1 - purity(r_a))
    t_b = 2 * (1 - purity(r_b))
    t_c = (d / 2) * 2 * (1 - purity(r_ab))
    t_ab = float(concurrence_two_qubit(r_ab)) ** 2
    t_ac = float(i_tangle_rank2(r_ac, (2, dc)))
    t_bc = float(i_tangle_rank2(r_bc, (2, dc)))
    return _clamp_residual((t_a + t_b + t_c - 2 * (t_ab + t_ac + t_bc)) / 3)


def i_residual_tangle_batch(psis: np.ndarray, dc: int, field_dim: int | None = None) -> np.ndarray:
    """Vectorized :func:`i_residual_tangle_pure` for states of shape ``(B, 4 * dc)``."""
    b = psis.shape[0]
    t = psis.reshape(b, 2, 2, dc)
    if field_dim is None:
        s = np.linalg.svd(psis.reshape(b, 4, dc), compute_uv=False)
        d = np.minimum(np.sum(s > 1e-9, axis=1), 4)
    else:
        d = np.full(b, field_dim)
    r_ab = np.einsum("xabn,xcdn->xabcd", t, t.conj()).reshape(b, 4, 4)
    r_a = np.einsum("xabn,xcbn->xac", t, t.conj())
    r_b = np.einsum("xabn,xadn->xbd", t, t.conj())
    r_ac = np.einsum("xabn,xcbm->xancm", t, t.conj()).reshape(b, 2 * dc, 2 * dc)
    r_bc = np.einsum("xabn,xacm->xbncm", t, t.conj()).reshape(b, 2 * dc, 2 * dc)
    pur = lambda r: np.real(np.einsum("xij,xji->x", r, r))
    t_a, t_b = 2 * (1 - pur(r_a)), 2 * (1 - pur(r_b))
    t_c = d * (1 - pur(r_ab))
    t_ab = wootters_concurrence_batch(r_ab) ** 2
    t_ac = i_tangle_rank2_batch(r_ac, (2, dc))
    t_bc = i_tangle_rank2_batch(r_bc, (2, dc))
    out = (t_a + t_b + t_c - 2 * (t_ab + t_ac + t_bc)) / 3
    return np.where((out < 0) & (out >= -RESIDUAL_TOL), 0.0, out)


# --- factorization approximation --------------------------------------------------

@dataclass(frozen=True)
class JxCoefficients:
    """Amplitudes of an atomic state on the symmetric ``J_x`` eigenstates.

    ``d[0], d[1], d[2]`` correspond to ``m = -1, 0, 1``; ``singlet_weight`` is
    the probability on the dark singlet, which the approximation ignores.
    """

    d: tuple[complex, complex, complex]
    singlet_weight: float = 0.0

    @property
    def magnitudes(self) -> np.ndarray:
        return np.abs(np.asarray(self.d))


_PLUS = np.array([1, 1]) / np.sqrt(2)
_MINUS = np.array([1, -1]) / np.sqrt(2)
JX_BASIS = np.array([
    np.kron(_MINUS, _MINUS),
    (np.kron(_PLUS, _MINUS) + np.kron(_MINUS, _PLUS)) / np.sqrt(2),
    np.kron(_PLUS, _PLUS),
])
SINGLET = np.array([0, 1, -1, 0]) / np.sqrt(2)


def jx_coefficients(atomic_kind) -> JxCoefficients:
    """Expand an atomic preset (or four amplitudes) in the ``J_x`` triplet."""
    if isinstance(atomic_kind, str) and atomic_kind == "singlet":
        amp = SINGLET.astype(complex)
    else:
        amp = TCMConfig("fock", 0, atomic_kind).atomic_amplitudes()
    d = JX_BASIS.conj() @ amp
    sw = float(abs(np.vdot(SINGLET, amp)) ** 2)
    if sw > 1e-12:
        warnings.warn(f"atomic state has singlet weight {sw:.3g}, excluded from the approximation",
                      stacklevel=2)
    return JxCoefficients(tuple(complex(x) for x in d), sw)


APPROX_FORMS = ("corrected", "uncorrected")


def approx_constant(d: JxCoefficients, form: str = "corrected") -> float:
    """Time-independent part ``c`` of the approximation (see :func:`approx_field_ensemble_tangle`)."""
    dm, d0, dp = d.magnitudes ** 2
    c = 4 * (dm**2 + d0**2 + dp**2) + 2 * d0 * dp + dm * (2 * d0 + 3 * dp)
    if form == "uncorrected":
        return c - 4 * dm * dp
    if form != "corrected":
        raise ValueError(f"unknown approximation form {form!r}; choose from {APPROX_FORMS}")
    return c


def approx_oscillation(d: JxCoefficients, tp, form: str = "corrected"):
    """Oscillating part ``h(t')``."""
    dm, d0, dp = d.magnitudes ** 2
    if form == "uncorrected":
        return 2 * d0 * (dm + dp) * np.cos(4 * tp) + dm * dp * np.cos(8 * tp)
    if form != "corrected":
        raise ValueError(f"unknown approximation form {form!r}; choose from {APPROX_FORMS}")
    return (2 * d0 * (dm + dp) + 4 * dm * dp) * np.cos(4 * tp) - dm * dp * np.cos(8 * tp)


def approx_field_ensemble_tangle(d: JxCoefficients, nbar: float, t, g: float = 1.0,
                                 n_atoms: int = 2, form: str = "corrected"):
    """Large-photon-number estimate of the field/ensemble tangle.

    ``2 {1 - [c - h(t')]/4}`` with the rescaled time
    ``t' = g t / (2 sqrt(nbar - N/2 + 1/2))``, where ``[c - h]/4`` is the
    purity of the decohered mixture of the ``J_x`` pointer states.

    ``form='uncorrected'`` uses the commonly quoted coefficients: a constant
    ``-4|d_-1|^2 |d_1|^2`` inside ``c`` and ``+|d_-1|^2 |d_1|^2 cos 8t'``
    inside ``h``. At ``t = 0`` that gives a purity below ``sum |d_m|^4``,
    which no mixture of the orthogonal pointer states can reach, and it does
    not converge to the exact curve. ``form='corrected'`` (default) moves
    the ``-4|d_-1|^2 |d_1|^2`` term into ``h`` as a ``cos 4t'`` term and
    flips the sign of the ``cos 8t'`` term. This restores purity
    ``sum |d_m|^4`` at ``t = 0`` and matches a fit of the exact large-``nbar``
    dynamics.
    """
    if nbar <= 1:
        raise ValueError("the approximation needs a mean photon number above 1")
    tp = g * np.asarray(t, dtype=float) / (2 * np.sqrt(nbar - n_atoms / 2 + 0.5))
    return 2 * (1 - 0.25 * (approx_constant(d, form) - approx_oscillation(d, tp, form)))


# --- time series ------------------------------------------------------------------

@dataclass
class TangleTrace:
    """Per-time-step tangles and inversion; arrays share the ``time`` axis."""

    time: np.ndarray
    inversion: np.ndarray
    field_ensemble: np.ndarray
    atom_remainder: np.ndarray | None = None
    atom_atom: np.ndarray | None = None
    atom_field: np.ndarray | None = None
    atom_field_identity: np.ndarray | None = None
    i_residual: np.ndarray | None = None
    approx: np.ndarray | None = None
    purity: np.ndarray | None = None

    COLUMNS = ("t", "inversion", "tau_F_ens", "tau_atom_rest", "tau_atom_atom",
               "tau_atom_field", "tau_residual", "tau_approx")

    def rows(self):
        cols = [self.time, self.inversion, self.field_ensemble, self.atom_remainder,
                self.atom_atom, self.atom_field, self.i_residual, self.approx]
        for i in range(self.time.size):
            yield [float("nan") if c is None else float(c[i]) for c in cols]


def time_grid(tmax: float, dt: float = 1.0, tmin: float = 0.0) -> np.ndarray:
    """Inclusive grid ``tmin, tmin + dt, ..., <= tmax``."""
    if dt <= 0:
        raise ValueError("time step must be positive")
    n = int(math.floor((tmax - tmin) / dt + 1e-9))
    return tmin + dt * np.arange(n + 1)


def simulate(cfg: TCMConfig, times, full: bool = True) -> TangleTrace:
    """Exact run over ``times``.

    With ``full=False`` only the inversion, the field/ensemble tangle and its
    approximation are computed; the remaining tangles need the atom/field
    marginal and are the expensive part.
    """
    times = np.asarray(times, dtype=float)
    s0 = initial_state(cfg)
    nbar = cfg.mean_photons()
    approx = None
    if nbar > 1:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            d = jx_coefficients(cfg.atoms)
        approx = approx_field_ensemble_tangle(d, nbar, times, cfg.g)
    n = times.size
    inv, tf, pur = np.empty(n), np.empty(n), np.empty(n)
    extra = {k: np.empty(n) for k in ("rest", "aa", "af", "afi", "res")} if full else None
    for i, t in enumerate(times):
        s = state_at(s0, t)
        inv[i] = atomic_inversion(s)
        rho_atoms = s.amps @ s.amps.conj().T
        tf[i] = _field_ensemble(rho_atoms)
        pur[i] = s.norm() ** 4
        if full:
            tb = bipartite_tangles(s)
            direct, ident = atom_field_tangle_two_ways(s)
            extra["rest"][i] = tb.atom_remainder
            extra["aa"][i] = tb.atom_atom
            extra["af"][i] = direct
            extra["afi"][i] = ident
            extra["res"][i] = i_residual_tangle(s)
    trace = TangleTrace(times, inv, tf, approx=approx, purity=pur)
    if full:
        trace.atom_remainder = extra["rest"]
        trace.atom_atom = extra["aa"]
        trace.atom_field = extra["af"]
        trace.atom_field_identity = extra["afi"]
        trace.i_residual = extra["res"]
    return trace


def approximation_gap(nbar: float, atoms: str = "ee", dt: float = 0.05,
                      window=(0.2, 2.5), form: str = "corrected") -> float:
    """Sup-norm gap between exact and approximate field/ensemble tangle.

    The comparison runs over ``t in [window[0], window[1]] * sqrt(nbar)`` for
    a coherent field with mean photon number ``nbar``.
    """
    root = math.sqrt(nbar)
    times = time_grid(window[1] * root, dt, window[0] * root)
    tr = simulate(TCMConfig("coherent", root, atoms), times, full=False)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        approx = approx_field_ensemble_tangle(jx_coefficients(atoms), nbar, times, form=form)
    return float(np.max(np.abs(tr.field_ensemble - approx)))


__all__ = [
    "ATOM_LABELS",
    "BipartiteTangles",
    "JxCoefficients",
    "TCMConfig",
    "TCMState",
    "TangleTrace",
    "approx_field_ensemble_tangle",
    "approximation_gap",
    "atom2_field_marginal",
    "atom_field_tangle_two_ways",
    "atomic_inversion",
    "bipartite_tangles",
    "coherent_amplitudes",
    "coherent_window",
    "effective_dimension",
    "evolve",
    "field_marginal",
    "i_residual_tangle",
    "i_residual_tangle_batch",
    "i_residual_tangle_pure",
    "initial_state",
    "jx_coefficients",
    "marginals",
    "propagator_block",
    "propagator_blocks",
    "simulate",
    "state_at",
    "time_grid",
]
