"""Gottesman-Knill simulation of Clifford circuits acting on ``|0...0>``.

The tableau keeps ``n`` signed Pauli generators as letter codes
(``0=I, 1=X, 2=Y, 3=Z``) with qubit 1 leftmost. Gates conjugate each
generator letter by letter using lookup tables; every measurement of a Pauli
product is then classified as Plus, Minus or Random.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

LETTERS = "IXYZ"
CODE = {ch: i for i, ch in enumerate(LETTERS)}
MAX_FULL_STABILIZER = 16

# PRODUCT_LETTER[a, b] and PRODUCT_PHASE[a, b] (exponent of i) give a*b
PRODUCT_LETTER = np.array([
    [0, 1, 2, 3],
    [1, 0, 3, 2],
    [2, 3, 0, 1],
    [3, 2, 1, 0],
], dtype=np.int8)
PRODUCT_PHASE = np.array([
    [0, 0, 0, 0],
    [0, 0, 1, 3],  # XY = iZ, XZ = -iY
    [0, 3, 0, 1],  # YX = -iZ, YZ = iX
    [0, 1, 3, 0],  # ZX = iY, ZY = -iX
], dtype=np.int8)

# CNOT conjugation of (control, target) letter pairs
CNOT_UPDATES = {
    (0, 0): (0, 0), (0, 1): (0, 1), (0, 2): (3, 2), (0, 3): (3, 3),
    (1, 0): (1, 1), (1, 1): (1, 0), (1, 2): (2, 3), (1, 3): (2, 2),
    (2, 0): (2, 1), (2, 1): (2, 0), (2, 2): (1, 3), (2, 3): (1, 2),
    (3, 0): (3, 0), (3, 1): (3, 1), (3, 2): (0, 2), (3, 3): (0, 3),
}
# results that pick up a minus sign: XZ -> -YY and YY -> -XZ
CNOT_SIGN_FLIP = {(2, 2), (1, 3)}

CNOT_LETTER = np.zeros((4, 4, 2), dtype=np.int8)
CNOT_FLIP = np.zeros((4, 4), dtype=bool)
for (_a, _b), (_c, _d) in CNOT_UPDATES.items():
    CNOT_LETTER[_a, _b] = (_c, _d)
    CNOT_FLIP[_a, _b] = (_c, _d) in CNOT_SIGN_FLIP

# single-qubit conjugation: new letter and sign flip for each old letter
_SINGLE = {
    "H": ([0, 3, 2, 1], [False, False, True, False]),
    "P": ([0, 2, 1, 3], [False, False, True, False]),
    "X": ([0, 1, 2, 3], [False, False, True, True]),
    "Y": ([0, 1, 2, 3], [False, True, False, True]),
    "Z": ([0, 1, 2, 3], [False, True, True, False]),
}
SINGLE_LETTER = {k: np.array(v[0], dtype=np.int8) for k, v in _SINGLE.items()}
SINGLE_FLIP = {k: np.array(v[1], dtype=bool) for k, v in _SINGLE.items()}

SINGLE_QUBIT_GATES = tuple(_SINGLE)
GATE_NAMES = SINGLE_QUBIT_GATES + ("CNOT",)


class Prediction(enum.IntEnum):
    """Outcome class of a Pauli-product measurement."""

    MINUS = -1
    RANDOM = 0
    PLUS = 1

    def __str__(self) -> str:
        return self.name.capitalize()


@dataclass(frozen=True)
class PauliString:
    """Signed Pauli product, e.g. ``-XYY``; qubit 1 is the leftmost letter."""

    sign: int
    letters: str

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("Pauli string sign must be +1 or -1")
        if not self.letters or any(ch not in CODE for ch in self.letters):
            raise ValueError(f"invalid Pauli letters {self.letters!r}")

    @classmethod
    def parse(cls, text: str) -> "PauliString":
        text = text.strip()
        sign = 1
        if text[:1] in ("+", "-"):
            sign = -1 if text[0] == "-" else 1
            text = text[1:]
        return cls(sign, text.upper())

    @classmethod
    def from_codes(cls, codes, sign: int = 1) -> "PauliString":
        return cls(int(sign), "".join(LETTERS[int(c)] for c in codes))

    @property
    def n(self) -> int:
        return len(self.letters)

    @property
    def codes(self) -> np.ndarray:
        return np.array([CODE[ch] for ch in self.letters], dtype=np.int8)

    def symplectic(self) -> np.ndarray:
        """``2n`` bits: x-part then z-part."""
        c = self.codes
        return np.concatenate([(c == 1) | (c == 2), (c >= 2)]).astype(np.uint8)

    def __str__(self) -> str:
        return ("-" if self.sign < 0 else "+") + self.letters

    def __mul__(self, other: "PauliString") -> "PauliString":
        phase, codes = multiply_codes(self.codes, other.codes)
        phase = (phase + (0 if self.sign * other.sign > 0 else 2)) % 4
        if phase % 2:
            raise ValueError(f"{self} and {other} anticommute; product is not Hermitian")
        return PauliString.from_codes(codes, 1 if phase == 0 else -1)


def multiply_codes(a: np.ndarray, b: np.ndarray) -> tuple[int, np.ndarray]:
    """Letterwise product; returns ``(phase exponent of i mod 4, letters)``."""
    a = np.asarray(a, dtype=np.int8)
    b = np.asarray(b, dtype=np.int8)
    return int(PRODUCT_PHASE[a, b].sum() % 4), PRODUCT_LETTER[a, b]


def codes_to_index(codes: np.ndarray) -> np.ndarray:
    """Base-4 index with qubit 1 as the most significant digit (works on the last axis)."""
    codes = np.asarray(codes, dtype=np.int64)
    n = codes.shape[-1]
    weights = 4 ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return codes @ weights


def index_to_codes(index: int, n: int) -> np.ndarray:
    out = np.zeros(n, dtype=np.int8)
    for q in range(n - 1, -1, -1):
        out[q] = index % 4
        index //= 4
    return out


def all_measurement_codes(n: int) -> np.ndarray:
    """Every unsigned Pauli product as a ``(4^n, n)`` code array in base-4 order."""
    grids = np.indices((4,) * n).reshape(n, -1).T
    return grids.astype(np.int8)


def symplectic_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Symplectic inner product mod 2 of bit vectors (last axis of length ``2n``)."""
    n = a.shape[-1] // 2
    return (a[..., :n] @ b[..., n:].T + a[..., n:] @ b[..., :n].T) % 2


class Tableau:
    """Stabilizer generators of the current state.

    Generators are stored as an ``(n, n)`` code array plus an ``(n,)`` sign
    array. ``apply`` mutates in place and returns ``self`` so calls chain.
    """

    def __init__(self, codes: np.ndarray, signs: np.ndarray):
        self.codes = np.array(codes, dtype=np.int8)
        self.signs = np.array(signs, dtype=np.int8)
        self.n = self.codes.shape[1]
        self._full = None

    def copy(self) -> "Tableau":
        return Tableau(self.codes.copy(), self.signs.copy())

    def __eq__(self, other) -> bool:
        return (isinstance(other, Tableau) and np.array_equal(self.codes, other.codes)
                and np.array_equal(self.signs, other.signs))

    @property
    def generators(self) -> list[PauliString]:
        return [PauliString.from_codes(c, s) for c, s in zip(self.codes, self.signs)]

    def symplectic(self) -> np.ndarray:
        """``(n, 2n)`` bit matrix: x-part then z-part of every generator."""
        c = self.codes
        return np.concatenate([(c == 1) | (c == 2), c >= 2], axis=1).astype(np.uint8)

    def __repr__(self) -> str:
        return "<" + ", ".join(str(g) for g in self.generators) + ">"

    def _check_qubit(self, i: int) -> int:
        if not 1 <= i <= self.n:
            raise IndexError(f"qubit {i} out of range 1..{self.n}")
        return i - 1

    def apply(self, gate: str, *qubits: int) -> "Tableau":
        """Conjugate every generator by one gate (1-based qubit indices)."""
        self._full = None
        gate = gate.upper()
        if gate in SINGLE_LETTER:
            if len(qubits) != 1:
                raise ValueError(f"{gate} takes one qubit")
            q = self._check_qubit(qubits[0])
            old = self.codes[:, q].copy()
            self.codes[:, q] = SINGLE_LETTER[gate][old]
            self.signs[SINGLE_FLIP[gate][old]] *= -1
            return self
        if gate == "CNOT":
            if len(qubits) != 2:
                raise ValueError("CNOT takes a control and a target")
            c, t = self._check_qubit(qubits[0]), self._check_qubit(qubits[1])
            if c == t:
                raise ValueError("CNOT control and target must differ")
            a, b = self.codes[:, c].copy(), self.codes[:, t].copy()
            new = CNOT_LETTER[a, b]
            self.codes[:, c], self.codes[:, t] = new[:, 0], new[:, 1]
            self.signs[CNOT_FLIP[a, b]] *= -1
            return self
        raise ValueError(f"unknown gate {gate!r}")

    # --- invariants -----------------------------------------------------------

    def check(self) -> None:
        """Raise if the generators stop commuting or become dependent."""
        s = self.symplectic()
        if np.any(symplectic_product(s, s)):
            raise AssertionError("stabilizer generators do not commute")
        if gf2_rank(s) != self.n:
            raise AssertionError("stabilizer generators are not independent")

    # --- measurement ------------------------------------------------------------

    def full_stabilizer(self) -> dict[str, int]:
        """All ``2^n`` stabilizer elements as ``{letters: sign}``."""
        codes, signs = self._full_arrays()
        return {PauliString.from_codes(c).letters: int(s) for c, s in zip(codes, signs)}

    def _full_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        if self._full is not None:
            return self._full
        if self.n > MAX_FULL_STABILIZER:
            raise ValueError(f"full stabilizer expansion is limited to {MAX_FULL_STABILIZER} qubits")
        codes = np.zeros((1, self.n), dtype=np.int8)
        phases = np.zeros(1, dtype=np.int64)
        for g, s in zip(self.codes, self.signs):
            ph = PRODUCT_PHASE[g[None, :], codes].sum(axis=1) + (0 if s > 0 else 2)
            new = PRODUCT_LETTER[g[None, :], codes]
            codes = np.concatenate([codes, new])
            phases = np.concatenate([phases, (phases + ph) % 4])
        if np.any(phases % 2):
            raise AssertionError("stabilizer product picked up an imaginary phase")
        signs = np.where(phases == 0, 1, -1).astype(np.int8)
        self._full = (codes, signs)
        return self._full

    def predict(self, m: PauliString | str) -> Prediction:
        """Outcome class of measuring the unsigned Pauli product ``m``."""
        if isinstance(m, str):
            m = PauliString.parse(m)
        if m.n != self.n:
            raise ValueError(f"measurement has {m.n} letters, state has {self.n} qubits")
        if np.any(symplectic_product(self.symplectic(), m.symplectic()[None, :])):
            return Prediction.RANDOM
        if self.n > MAX_FULL_STABILIZER:
            return Prediction(self.element_sign(m))
        codes, signs = self._full_arrays()
        hit = np.flatnonzero(np.all(codes == m.codes[None, :], axis=1))
        if hit.size != 1:
            raise AssertionError(f"{m.letters} commutes with the stabilizer but is not in it")
        return Prediction(int(signs[hit[0]]) * m.sign)

    def predict_all(self) -> np.ndarray:
        """Predictions for all ``4^n`` products in base-4 order (int8: 1, -1, 0)."""
        codes, signs = self._full_arrays()
        out = np.zeros(4**self.n, dtype=np.int8)
        out[codes_to_index(codes)] = signs
        return out

    def element_sign(self, m: PauliString | str) -> int | None:
        """Sign of ``m`` in the stabilizer group, or ``None`` if ``m`` is not in it.

        Decomposes ``m`` over the generators with GF(2) elimination, so it
        works above the full-expansion guard.
        """
        if isinstance(m, str):
            m = PauliString.parse(m)
        s = self.symplectic()
        combo = gf2_solve(s.T, m.symplectic())
        if combo is None:
            return None
        acc = PauliString.from_codes(np.zeros(self.n, dtype=np.int8))
        for k in np.flatnonzero(combo):
            acc = acc * PauliString.from_codes(self.codes[k], self.signs[k])
        if acc.letters != m.letters:
            raise AssertionError("GF(2) decomposition did not reproduce the string")
        return acc.sign * m.sign


def new_tableau(n: int) -> Tableau:
    """Generators ``Z_1, ..., Z_n`` of ``|0...0>``."""
    if n < 1:
        raise ValueError("need at least one qubit")
    return Tableau(3 * np.eye(n, dtype=np.int8), np.ones(n, dtype=np.int8))


def apply_gate(t: Tableau, gate: str, *qubits: int) -> Tableau:
    """Functional wrapper: return a new tableau with the gate applied."""
    return t.copy().apply(gate, *qubits)


def predict(t: Tableau, m: PauliString | str) -> Prediction:
    return t.predict(m)


def full_stabilizer(t: Tableau) -> dict[str, int]:
    return t.full_stabilizer()


# --- GF(2) helpers ------------------------------------------------------------------

def gf2_rank(m: np.ndarray) -> int:
    m = np.array(m, dtype=np.uint8) % 2
    rank = 0
    rows, cols = m.shape
    for c in range(cols):
        piv = np.flatnonzero(m[rank:, c])
        if piv.size == 0:
            continue
        p = rank + piv[0]
        m[[rank, p]] = m[[p, rank]]
        others = np.flatnonzero(m[:, c])
        others = others[others != rank]
        m[others] ^= m[rank]
        rank += 1
        if rank == rows:
            break
    return rank


def gf2_solve(a: np.ndarray, b: np.ndarray) -> np.ndarray | None:
    """Solve ``a x = b`` over GF(2); ``None`` if inconsistent."""
    a = np.array(a, dtype=np.uint8) % 2
    b = np.array(b, dtype=np.uint8) % 2
    rows, cols = a.shape
    aug = np.concatenate([a, b[:, None]], axis=1)
    pivots = []
    r = 0
    for c in range(cols):
        piv = np.flatnonzero(aug[r:, c])
        if piv.size == 0:
            continue
        p = r + piv[0]
        aug[[r, p]] = aug[[p, r]]
        others = np.flatnonzero(aug[:, c])
        others = others[others != r]
        aug[others] ^= aug[r]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    if np.any(aug[r:, -1]):
        return None
    x = np.zeros(cols, dtype=np.uint8)
    for i, c in enumerate(pivots):
        x[c] = aug[i, -1]
    return x


def cluster_generator(n: int, site: int, neighbours) -> PauliString:
    """``K^(a) = X_a prod_b Z_b`` over the neighbours of site ``a`` (1-based)."""
    codes = np.zeros(n, dtype=np.int8)
    codes[site - 1] = 1
    for b in neighbours:
        codes[b - 1] = 3
    return PauliString.from_codes(codes)


__all__ = [
    "GATE_NAMES",
    "LETTERS",
    "PauliString",
    "Prediction",
    "Tableau",
    "all_measurement_codes",
    "apply_gate",
    "cluster_generator",
    "codes_to_index",
    "full_stabilizer",
    "gf2_rank",
    "gf2_solve",
    "index_to_codes",
    "multiply_codes",
    "new_tableau",
    "predict",
]
