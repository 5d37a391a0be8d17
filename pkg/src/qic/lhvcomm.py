"""Local hidden-variable tables with classical communication.

Each qubit row holds an entry per observable ``I, X, Y, Z``: a phase stored
as an exponent of ``i`` (mod 4) and a set of shared random variables
``R_j`` stored as a bitmask, bit ``j-1`` for ``R_j``. Multiplying entries
adds phases and XORs masks, so repeated ``R``'s cancel automatically.

The module also evaluates cluster-state correlation-center patterns that
simulate logical Clifford gates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .lattice import checkerboard_colour, neighbours, parse_shape
from .stabilizer import CODE, LETTERS, PauliString, Prediction, cluster_generator

I_, X_, Y_, Z_ = 0, 1, 2, 3
MAX_QUBITS = 63


class CompatibilityError(ValueError):
    """Control and target rows are correlated with opposite ``XYZ = +-i`` branches."""


def _popcount(x: int) -> int:
    return bin(x).count("1")


def phase_sign(exp: int) -> int:
    """Read rule for a phase: drop a factor ``i`` and keep the sign (``0,1 -> +1``; ``2,3 -> -1``)."""
    return 1 if exp % 4 in (0, 1) else -1


def format_entry(exp: int, rset: int) -> str:
    """Human-readable entry such as ``-iR1R3`` (``1`` for the empty product)."""
    prefix = {0: "", 1: "i", 2: "-", 3: "-i"}[exp % 4]
    rs = "".join(f"R{j + 1}" for j in range(rset.bit_length()) if rset >> j & 1)
    if not rs:
        return {0: "1", 1: "i", 2: "-1", 3: "-i"}[exp % 4]
    return prefix + rs


# --- sign patterns -----------------------------------------------------------------

@dataclass(frozen=True)
class SignPattern:
    """Initial sign of each qubit's ``Y`` phase: ``+1`` for ``+i``, ``-1`` for ``-i``."""

    signs: tuple[int, ...]
    name: str = "custom"

    def __post_init__(self):
        if any(s not in (1, -1) for s in self.signs):
            raise ValueError("sign pattern entries must be +1 or -1")

    @property
    def n(self) -> int:
        return len(self.signs)

    @classmethod
    def ghz(cls, n: int) -> "SignPattern":
        """Qubit 1 starts at ``-i`` and the rest at ``+i``."""
        return cls(tuple([-1] + [1] * (n - 1)), "ghz")

    @classmethod
    def checkerboard(cls, shape) -> "SignPattern":
        """Alternating signs so no two lattice neighbours agree; site 1 starts at ``-i``."""
        rows, cols = parse_shape(shape)
        signs = tuple(-1 if checkerboard_colour(a, cols) == 0 else 1
                      for a in range(1, rows * cols + 1))
        return cls(signs, "checkerboard")

    @classmethod
    def named(cls, name: str, shape) -> "SignPattern":
        rows, cols = parse_shape(shape)
        if name == "ghz":
            return cls.ghz(rows * cols)
        if name == "checkerboard":
            return cls.checkerboard((rows, cols))
        raise ValueError(f"unknown sign pattern {name!r}; use ghz or checkerboard")


@dataclass(frozen=True)
class RAssignment:
    """Values ``+-1`` of the random variables ``R_j`` (1-based keys)."""

    values: Mapping[int, int]

    @property
    def mask(self) -> int:
        m = 0
        for j, v in self.values.items():
            if v not in (1, -1):
                raise ValueError("R values must be +1 or -1")
            if v < 0:
                m |= 1 << (j - 1)
        return m

    def covers(self, rset: int) -> bool:
        have = sum(1 << (j - 1) for j in self.values)
        return rset & ~have == 0

    @classmethod
    def from_mask(cls, n: int, mask: int) -> "RAssignment":
        return cls({j: -1 if mask >> (j - 1) & 1 else 1 for j in range(1, n + 1)})

    @classmethod
    def all(cls, n: int):
        for mask in range(2**n):
            yield cls.from_mask(n, mask)


def r_value(rset: int, neg_mask: int) -> int:
    """Product of the ``R``'s in ``rset`` when those in ``neg_mask`` equal ``-1``."""
    return -1 if _popcount(rset & neg_mask) % 2 else 1


# --- the table ------------------------------------------------------------------------

class LHVTable:
    """Per-qubit LHV entries. Gate methods mutate in place and return ``self``."""

    def __init__(self, phases: np.ndarray, rsets: Sequence[Sequence[int]], experimental: bool = False):
        self.phases = np.array(phases, dtype=np.int64) % 4
        self.rsets = [list(map(int, row)) for row in rsets]
        self.n = self.phases.shape[0]
        self.experimental = experimental
        if self.n > MAX_QUBITS:
            raise ValueError(f"at most {MAX_QUBITS} qubits are supported")

    def copy(self) -> "LHVTable":
        return LHVTable(self.phases.copy(), [row[:] for row in self.rsets], self.experimental)

    def __eq__(self, other) -> bool:
        return (isinstance(other, LHVTable) and np.array_equal(self.phases, other.phases)
                and self.rsets == other.rsets)

    def entry(self, qubit: int, letter: str | int) -> tuple[int, int]:
        """``(phase exponent, rset mask)`` of one entry (1-based qubit)."""
        col = CODE[letter] if isinstance(letter, str) else int(letter)
        q = self._check_qubit(qubit)
        return int(self.phases[q, col]), self.rsets[q][col]

    def rows(self) -> list[list[str]]:
        """Formatted ``X, Y, Z`` entries per qubit."""
        return [[format_entry(self.phases[q, c], self.rsets[q][c]) for c in (X_, Y_, Z_)]
                for q in range(self.n)]

    def __repr__(self) -> str:
        return "\n".join(f"qubit {q + 1}: " + "  ".join(r) for q, r in enumerate(self.rows()))

    def _check_qubit(self, i: int) -> int:
        if not 1 <= i <= self.n:
            raise IndexError(f"qubit {i} out of range 1..{self.n}")
        return i - 1

    # --- invariants ---------------------------------------------------------------

    def branch(self, qubit: int) -> int:
        """Phase exponent of ``X*Y*Z`` on one row (1 for ``+i``, 3 for ``-i``)."""
        q = self._check_qubit(qubit)
        return int(self.phases[q, X_] + self.phases[q, Y_] + self.phases[q, Z_]) % 4

    def check(self) -> None:
        """Raise if any row breaks the identical-correlation structure."""
        for q in range(self.n):
            ph, rs = self.phases[q], self.rsets[q]
            if ph[I_] != 0 or rs[I_] != 0:
                raise AssertionError(f"qubit {q + 1}: identity entry is not 1")
            if ph[X_] % 2 or ph[Z_] % 2 or ph[Y_] % 2 == 0:
                raise AssertionError(f"qubit {q + 1}: X, Z must be real and Y imaginary")
            if rs[X_] ^ rs[Y_] ^ rs[Z_]:
                raise AssertionError(f"qubit {q + 1}: rsets of X, Y, Z do not cancel")

    # --- gates ---------------------------------------------------------------------

    def apply(self, gate: str, *qubits: int) -> "LHVTable":
        gate = gate.upper()
        if gate == "H":
            return self.apply_h(*qubits)
        if gate == "CNOT":
            return self.apply_cnot(*qubits)
        if gate == "P":
            return self.apply_p(*qubits)
        if gate in ("X", "Y", "Z"):
            return self.apply_pauli(gate, *qubits)
        raise ValueError(f"unknown gate {gate!r}")

    def apply_h(self, i: int) -> "LHVTable":
        """Swap the X and Z entries and negate the Y phase."""
        q = self._check_qubit(i)
        ph, rs = self.phases[q], self.rsets[q]
        ph[X_], ph[Z_] = ph[Z_], ph[X_]
        ph[Y_] = (ph[Y_] + 2) % 4
        rs[X_], rs[Z_] = rs[Z_], rs[X_]
        return self

    def compatible(self, c: int, t: int) -> bool:
        return self.branch(c) == self.branch(t)

    def apply_cnot(self, c: int, t: int) -> "LHVTable":
        """Control/target update with products of old entries on both rows."""
        qc, qt = self._check_qubit(c), self._check_qubit(t)
        if qc == qt:
            raise ValueError("CNOT control and target must differ")
        if not self.compatible(c, t):
            raise CompatibilityError(
                f"CNOT({c},{t}): rows are not identically correlated (XYZ = +i on one, -i on the other)")
        pc, pt = self.phases[qc].copy(), self.phases[qt].copy()
        rc, rt = self.rsets[qc][:], self.rsets[qt][:]
        self.phases[qc, X_] = (pc[X_] + pt[X_]) % 4
        self.rsets[qc][X_] = rc[X_] ^ rt[X_]
        self.phases[qc, Y_] = (pc[Y_] + pt[X_]) % 4
        self.rsets[qc][Y_] = rc[Y_] ^ rt[X_]
        self.phases[qt, Z_] = (pc[Z_] + pt[Z_]) % 4
        self.rsets[qt][Z_] = rc[Z_] ^ rt[Z_]
        self.phases[qt, Y_] = (pc[Z_] + pt[Y_]) % 4
        self.rsets[qt][Y_] = rc[Z_] ^ rt[Y_]
        return self

    def apply_p(self, i: int) -> "LHVTable":
        """Experimental phase gate: X takes minus the old Y, Y takes the old X.

        The result generally breaks the real/imaginary structure and the table
        is marked experimental.
        """
        q = self._check_qubit(i)
        ph, rs = self.phases[q], self.rsets[q]
        ph[X_], ph[Y_] = (ph[Y_] + 2) % 4, ph[X_]
        rs[X_], rs[Y_] = rs[Y_], rs[X_]
        self.experimental = True
        return self

    def apply_pauli(self, gate: str, i: int) -> "LHVTable":
        """Pauli gate: negate the two entries that anticommute with it."""
        q = self._check_qubit(i)
        flip = {"X": (Y_, Z_), "Y": (X_, Z_), "Z": (X_, Y_)}[gate.upper()]
        for col in flip:
            self.phases[q, col] = (self.phases[q, col] + 2) % 4
        return self

    # --- reading ---------------------------------------------------------------------

    def residue(self, m: PauliString | str) -> tuple[int, int]:
        """Product of the entries named by ``m``: ``(phase exponent, rset)``."""
        if isinstance(m, str):
            m = PauliString.parse(m)
        if m.n != self.n:
            raise ValueError(f"measurement has {m.n} letters, table has {self.n} qubits")
        exp, rs = 0 if m.sign > 0 else 2, 0
        for q, ch in enumerate(m.letters):
            col = CODE[ch]
            exp += self.phases[q, col]
            rs ^= self.rsets[q][col]
        return int(exp % 4), rs

    def predict_joint(self, m: PauliString | str) -> Prediction:
        exp, rs = self.residue(m)
        if rs:
            return Prediction.RANDOM
        return Prediction(phase_sign(exp))

    def predict_all(self) -> np.ndarray:
        """Joint predictions for all ``4^n`` products in base-4 order (qubit 1 most significant)."""
        if self.n > 12:
            raise ValueError("exhaustive prediction is limited to 12 qubits")
        exp = np.zeros(1, dtype=np.int64)
        rs = np.zeros(1, dtype=np.uint64)
        for q in range(self.n):
            exp = (exp[:, None] + self.phases[q][None, :]).ravel()
            rs = (rs[:, None] ^ np.array(self.rsets[q], dtype=np.uint64)[None, :]).ravel()
        out = np.where(exp % 4 < 2, 1, -1).astype(np.int8)
        out[rs != 0] = 0
        return out


def new_table(n: int, pattern: SignPattern | None = None) -> LHVTable:
    """Table for ``|0...0>``: X and Y of qubit ``j`` carry ``R_j``, Z and I are 1."""
    if n < 1:
        raise ValueError("need at least one qubit")
    pattern = pattern or SignPattern.ghz(n)
    if pattern.n != n:
        raise ValueError(f"sign pattern covers {pattern.n} qubits, table needs {n}")
    phases = np.zeros((n, 4), dtype=np.int64)
    phases[:, Y_] = [1 if s > 0 else 3 for s in pattern.signs]
    rsets = [[0, 1 << j, 1 << j, 0] for j in range(n)]
    return LHVTable(phases, rsets)


def apply_h(t: LHVTable, i: int) -> LHVTable:
    return t.copy().apply_h(i)


def apply_cnot(t: LHVTable, c: int, target: int) -> LHVTable:
    return t.copy().apply_cnot(c, target)


def apply_p(t: LHVTable, i: int) -> LHVTable:
    return t.copy().apply_p(i)


def predict_joint(t: LHVTable, m: PauliString | str) -> Prediction:
    return t.predict_joint(m)


# --- local outcomes and the communication protocol -----------------------------------

@dataclass(frozen=True)
class LocalOutcomes:
    """Corrected outcome per measured set and the bits the protocol used."""

    outcomes: tuple[int, ...]
    raw: tuple[int, ...]
    flipped: bool
    bits_communicated: int

    @property
    def product(self) -> int:
        return int(np.prod(self.outcomes))


def sample_locals(t: LHVTable, locals_: str | PauliString, r: RAssignment | int,
                  partition: Iterable[Iterable[int]] | None = None) -> LocalOutcomes:
    """Local outcomes of each set of qubits after the sign correction.

    Parameters
    ----------
    t : LHVTable
    locals_ : str or PauliString
        One letter per qubit; ``I`` marks an unmeasured qubit.
    r : RAssignment or int
        Values of the random variables, or a bitmask of which ``R_j`` are ``-1``.
    partition : iterable of iterables of int, optional
        Disjoint 1-based qubit sets, one per party. Defaults to one set per qubit.
        Set 1 is the party that applies the correction.
    """
    m = PauliString.parse(locals_) if isinstance(locals_, str) else locals_
    if m.n != t.n:
        raise ValueError("local measurement string has the wrong length")
    neg = r if isinstance(r, (int, np.integer)) else r.mask
    sets = [[q] for q in range(1, t.n + 1)] if partition is None else [sorted(set(s)) for s in partition]
    seen: set[int] = set()
    for s in sets:
        if seen.intersection(s):
            raise ValueError("partition sets overlap")
        seen.update(s)
    for q, ch in enumerate(m.letters, start=1):
        if ch != "I" and q not in seen:
            raise ValueError(f"measured qubit {q} is not in any set")
    raw, odd = [], []
    for s in sets:
        exp, rs = 0, 0
        for q in s:
            e, x = t.entry(q, m.letters[q - 1])
            exp += e
            rs ^= x
        raw.append(phase_sign(exp) * r_value(rs, neg))
        odd.append(exp % 2)
    l = len(sets)
    # the first party hears q_k from parties 2..l-1 and flips if q_1...q_{l-1} is i or -1
    p_trunc = sum(odd[: l - 1]) % 4 if l > 1 else 0
    flip = p_trunc in (1, 2)
    outcomes = list(raw)
    if flip:
        outcomes[0] = -outcomes[0]
    return LocalOutcomes(tuple(outcomes), tuple(raw), flip, max(0, l - 2))


# --- correlation-center patterns ---------------------------------------------------

def pauli_codes_for_input(label: str) -> list[str]:
    """Split an input label into generator letters: ``Y`` needs both ``X`` and ``Z``."""
    return {"X": ["X"], "Z": ["Z"], "Y": ["X", "Z"], "I": []}[label]


@dataclass(frozen=True)
class CenterPattern:
    """A correlation-center diagram on a chain or grid cluster.

    ``centers`` are the sites whose ``K^(a)`` enter the product; ``inputs``
    and ``outputs`` are the logical input and output sites.
    """

    shape: tuple[int, int]
    centers: frozenset
    inputs: tuple[int, ...]
    outputs: tuple[int, ...]

    @property
    def n(self) -> int:
        return self.shape[0] * self.shape[1]

    def element(self) -> PauliString:
        """Signed product of ``K^(a)`` over the centers, in ascending site order."""
        nb = neighbours(self.shape)
        acc = PauliString(1, "I" * self.n)
        for a in sorted(self.centers):
            acc = acc * cluster_generator(self.n, a, nb[a])
        return acc

    def measurement(self) -> PauliString:
        """The element's letters with the output sites blanked to ``I`` (sign dropped)."""
        letters = list(self.element().letters)
        for o in self.outputs:
            letters[o - 1] = "I"
        return PauliString(1, "".join(letters))

    def diagram(self) -> str:
        """Rows of ``#`` (center) and ``.`` (not a center)."""
        rows, cols = self.shape
        return "\n".join("".join("#" if r * cols + c + 1 in self.centers else "."
                                 for c in range(cols)) for r in range(rows))


@dataclass(frozen=True)
class GatePatterns:
    """Generating patterns of one logical gate, keyed by generator input label."""

    gate: str
    shape: tuple[int, int]
    inputs: tuple[int, ...]
    outputs: tuple[int, ...]
    generators: Mapping[str, frozenset]

    def pattern(self, label: str) -> CenterPattern:
        """Pattern for any input Pauli label (one letter per logical input).

        Labels outside the generating set are products of generators, so their
        center sets are the symmetric difference of the generator sets.
        """
        label = label.upper()
        if len(label) != len(self.inputs) or any(ch not in LETTERS for ch in label):
            raise ValueError(f"{self.gate} needs an input label of {len(self.inputs)} Pauli letters")
        if set(label) == {"I"}:
            raise ValueError("identity input has no pattern")
        centers: frozenset = frozenset()
        for pos, ch in enumerate(label):
            for part in pauli_codes_for_input(ch):
                key = "I" * pos + part + "I" * (len(label) - pos - 1)
                centers = centers ^ self.generators[key]
        return CenterPattern(self.shape, centers, self.inputs, self.outputs)


def _fs(*xs) -> frozenset:
    return frozenset(xs)


PATTERN_LIBRARY: dict[str, GatePatterns] = {
    "H": GatePatterns("H", (1, 5), (1,), (5,), {"X": _fs(1, 3, 4), "Z": _fs(2, 3, 5)}),
    "P": GatePatterns("P", (1, 5), (1,), (5,), {"X": _fs(1, 3, 4, 5), "Z": _fs(2, 4)}),
    "CNOT": GatePatterns("CNOT", (3, 7), (1, 15), (7, 21), {
        "XI": _fs(1, 3, 4, 5, 7, 11, 19, 21),
        "ZI": _fs(2, 3, 5, 6),
        "IX": _fs(15, 17, 19, 21),
        "IZ": _fs(5, 6, 11, 16, 18, 20),
    }),
}


class PatternLibrary:
    """Lookup of gate patterns by gate name and input label."""

    def __init__(self, gates: Mapping[str, GatePatterns] | None = None):
        self.gates = dict(PATTERN_LIBRARY if gates is None else gates)

    def __getitem__(self, gate: str) -> GatePatterns:
        return self.gates[gate.upper()]

    def pattern(self, gate: str, label: str) -> CenterPattern:
        return self[gate].pattern(label)


@dataclass(frozen=True)
class PatternResult:
    """Signed Pauli on the output sites predicted by a pattern."""

    sign: int
    letters: str
    residue: tuple[int, int] = field(compare=False)

    def __str__(self) -> str:
        return ("-" if self.sign < 0 else "+") + self.letters


def eval_pattern(cluster: LHVTable, pattern: CenterPattern | PauliString | str,
                 outputs: Sequence[int] | None = None) -> PatternResult:
    """Logical output of a pattern evaluated on a cluster's LHV table.

    The entries at every non-output site named by the pattern are multiplied
    (the element's own overall sign is not included). The residue must equal
    ``+-`` the product of entries for a unique Pauli choice on the outputs.
    """
    if isinstance(pattern, CenterPattern):
        m, outputs = pattern.measurement(), pattern.outputs
    else:
        m = PauliString.parse(pattern) if isinstance(pattern, str) else pattern
        if outputs is None:
            raise ValueError("outputs are required when evaluating a bare Pauli string")
        letters = list(m.letters)
        for o in outputs:
            letters[o - 1] = "I"
        m = PauliString(1, "".join(letters))
    exp, rs = cluster.residue(m)
    matches = []
    for combo in itertools.product("IXYZ", repeat=len(outputs)):
        e2, r2 = 0, 0
        for o, ch in zip(outputs, combo):
            e, x = cluster.entry(o, ch)
            e2 += e
            r2 ^= x
        if r2 == rs and (exp - e2) % 2 == 0:
            matches.append((1 if (exp - e2) % 4 == 0 else -1, "".join(combo)))
    matches = [mt for mt in matches if set(mt[1]) != {"I"}]
    if len(matches) != 1:
        raise ValueError(f"residue {format_entry(exp, rs)} matches {len(matches)} output entries")
    sign, letters = matches[0]
    return PatternResult(sign, letters, (exp, rs))


def concat_patterns(first: CenterPattern, second: CenterPattern | None) -> CenterPattern:
    """Chain two single-qubit-gate patterns, overlapping first's output with second's input.

    The overlap site is a center iff either pattern has a center there.
    """
    if second is None or not second.centers:
        return first
    for p in (first, second):
        if p.shape[0] != 1 or len(p.inputs) != 1 or len(p.outputs) != 1:
            raise ValueError("concatenation is supported for single-qubit chain patterns only")
    if first.outputs != (first.n,) or second.inputs != (1,):
        raise ValueError("first output must be its last site and second input its first site")
    offset = first.n - 1
    n = first.n + second.n - 1
    centers = frozenset(first.centers) | {c + offset for c in second.centers}
    return CenterPattern((1, n), frozenset(centers), first.inputs, (n,))


__all__ = [
    "CenterPattern",
    "CompatibilityError",
    "GatePatterns",
    "LHVTable",
    "LocalOutcomes",
    "PATTERN_LIBRARY",
    "PatternLibrary",
    "PatternResult",
    "RAssignment",
    "SignPattern",
    "apply_cnot",
    "apply_h",
    "apply_p",
    "concat_patterns",
    "eval_pattern",
    "format_entry",
    "new_table",
    "phase_sign",
    "predict_joint",
    "r_value",
    "sample_locals",
]
