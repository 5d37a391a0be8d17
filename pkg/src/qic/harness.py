"""Circuits, the dual-simulator diff, the local-consistency sweep and CSV output.

A circuit runs through both the stabilizer tableau and the LHV table, and
their predictions are compared measurement by measurement.
"""

from __future__ import annotations

import csv
import io
import itertools
import re
import sys
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .lattice import cluster_gate_sequence, neighbours, parse_shape
from .lhvcomm import (
    CenterPattern,
    LHVTable,
    PatternLibrary,
    PatternResult,
    SignPattern,
    concat_patterns,
    eval_pattern,
    new_table,
    sample_locals,
)
from .stabilizer import (
    PauliString,
    Prediction,
    Tableau,
    cluster_generator,
    index_to_codes,
    new_tableau,
)

LHV_GATES = ("H", "CNOT")
EXPERIMENTAL_GATES = ("P", "X", "Y", "Z")
ARITY = {"H": 1, "P": 1, "X": 1, "Y": 1, "Z": 1, "CNOT": 2}


class CircuitSyntaxError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class Gate(NamedTuple):
    name: str
    qubits: tuple[int, ...]

    def __str__(self) -> str:
        return " ".join([self.name, *map(str, self.qubits)])


@dataclass(frozen=True)
class Circuit:
    """Ordered gates on ``n`` qubits with 1-based indices.

    ``shape`` records the lattice for cluster circuits so a checkerboard sign
    pattern can follow the grid colouring.
    """

    n: int
    gates: tuple[Gate, ...]
    shape: tuple[int, int] | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("a circuit needs at least one qubit")
        for g in self.gates:
            if g.name not in ARITY:
                raise ValueError(f"unknown gate {g.name!r}")
            if len(g.qubits) != ARITY[g.name]:
                raise ValueError(f"{g.name} takes {ARITY[g.name]} qubit(s)")
            if any(not 1 <= q <= self.n for q in g.qubits):
                raise ValueError(f"{g} has an index outside 1..{self.n}")
            if g.name == "CNOT" and g.qubits[0] == g.qubits[1]:
                raise ValueError(f"{g}: control equals target")

    def to_text(self) -> str:
        return "\n".join([f"qubits {self.n}", *map(str, self.gates)]) + "\n"

    def lhv_safe(self) -> bool:
        return all(g.name in LHV_GATES for g in self.gates)

    def sign_pattern(self, name: str) -> SignPattern:
        return SignPattern.named(name, self.shape or (1, self.n))


def parse_circuit(text: str) -> Circuit:
    """Parse the line-oriented circuit format.

    The first non-comment line is ``qubits N``; each further line holds one
    gate such as ``H 1`` or ``CNOT 1 2``. ``#`` starts a comment.
    """
    n = None
    gates = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if n is None:
            if parts[0].lower() != "qubits" or len(parts) != 2 or not parts[1].isdigit():
                raise CircuitSyntaxError(lineno, "expected 'qubits N' header")
            n = int(parts[1])
            if n < 1:
                raise CircuitSyntaxError(lineno, "qubit count must be positive")
            continue
        name = parts[0].upper()
        if name not in ARITY:
            raise CircuitSyntaxError(lineno, f"unknown gate {parts[0]!r}")
        if len(parts) - 1 != ARITY[name] or not all(p.isdigit() for p in parts[1:]):
            raise CircuitSyntaxError(lineno, f"{name} takes {ARITY[name]} integer qubit index(es)")
        qubits = tuple(int(p) for p in parts[1:])
        if any(not 1 <= q <= n for q in qubits):
            raise CircuitSyntaxError(lineno, f"qubit index out of range 1..{n}")
        if name == "CNOT" and qubits[0] == qubits[1]:
            raise CircuitSyntaxError(lineno, "CNOT control equals target")
        gates.append(Gate(name, qubits))
    if n is None:
        raise CircuitSyntaxError(1, "missing 'qubits N' header")
    return Circuit(n, tuple(gates))


def build_ghz_circuit(n: int) -> Circuit:
    """H on qubit 1, then CNOT from qubit 1 to each other qubit."""
    if n < 2:
        raise ValueError("a GHZ circuit needs at least 2 qubits")
    gates = [Gate("H", (1,))] + [Gate("CNOT", (1, j)) for j in range(2, n + 1)]
    return Circuit(n, tuple(gates))


def cluster_generators(shape) -> list[PauliString]:
    """``K^(a)`` for every lattice site."""
    nb = neighbours(shape)
    n = len(nb)
    return [cluster_generator(n, a, nb[a]) for a in sorted(nb)]


def build_cluster_circuit(shape, verify: bool = True) -> Circuit:
    """Cluster-state circuit on a chain (``5``, ``"chain:5"``) or grid (``(3, 3)``, ``"grid:3x3"``).

    With ``verify`` the circuit is simulated and every ``K^(a)`` must come out
    with sign ``+1``.
    """
    rows, cols = parse_shape(shape)
    gates = tuple(Gate(name, q) for name, q in cluster_gate_sequence((rows, cols)))
    circ = Circuit(rows * cols, gates, (rows, cols))
    if verify:
        tab = run_stabilizer(circ)
        for k in cluster_generators((rows, cols)):
            if tab.element_sign(k) != 1:
                raise AssertionError(f"cluster circuit does not stabilize {k}")
    return circ


# --- running the simulators ------------------------------------------------------------

def run_stabilizer(c: Circuit) -> Tableau:
    t = new_tableau(c.n)
    for g in c.gates:
        t.apply(g.name, *g.qubits)
    return t


def _resolve_pattern(c: Circuit, signs: SignPattern | str) -> SignPattern:
    return c.sign_pattern(signs) if isinstance(signs, str) else signs


def run_lhv(c: Circuit, signs: SignPattern | str = "ghz", allow_experimental: bool = False) -> LHVTable:
    """Build the LHV table gate by gate.

    Raises
    ------
    ValueError
        A gate outside H/CNOT without ``allow_experimental``.
    CompatibilityError
        A CNOT whose rows are not identically correlated.
    """
    if not allow_experimental and not c.lhv_safe():
        bad = sorted({g.name for g in c.gates if g.name not in LHV_GATES})
        raise ValueError(f"gates {bad} need allow_experimental for the LHV model")
    t = new_table(c.n, _resolve_pattern(c, signs))
    for g in c.gates:
        t.apply(g.name, *g.qubits)
    return t


@dataclass
class DiffReport:
    """Outcome of comparing both simulators on a set of measurements."""

    total: int
    matches: int
    mismatches: list[tuple[PauliString, Prediction, Prediction]] = field(default_factory=list)

    def __post_init__(self):
        if self.total != self.matches + len(self.mismatches):
            raise AssertionError("diff report totals do not add up")

    @property
    def ok(self) -> bool:
        return not self.mismatches


def parse_scope(scope: str | tuple | None):
    """``"all"`` or ``"sample:K"`` to ``None`` or ``K``."""
    if scope is None or scope == "all":
        return None
    if isinstance(scope, tuple):
        return int(scope[1])
    m = re.fullmatch(r"sample:(\d+)", str(scope))
    if not m:
        raise ValueError(f"scope must be 'all' or 'sample:K', got {scope!r}")
    return int(m.group(1))


def dual_run(c: Circuit, signs: SignPattern | str = "ghz", scope="all", seed: int | None = None,
             allow_experimental: bool = False) -> DiffReport:
    """Compare stabilizer and LHV predictions on all or a sample of the ``4^n`` products.

    Random must meet Random and signs must agree exactly.
    """
    tab = run_stabilizer(c)
    lhv = run_lhv(c, signs, allow_experimental)
    k = parse_scope(scope)
    if k is None:
        qm, cl = tab.predict_all(), lhv.predict_all()
        bad = np.flatnonzero(qm != cl)
        mismatches = [(PauliString.from_codes(index_to_codes(int(i), c.n)),
                       Prediction(int(qm[i])), Prediction(int(cl[i]))) for i in bad]
        return DiffReport(qm.size, qm.size - bad.size, mismatches)
    rng = np.random.default_rng(seed)
    total = 4**c.n
    k = min(k, total)
    if total <= 1 << 24:
        idx = np.sort(rng.choice(total, size=k, replace=False))
        strings = [index_to_codes(int(i), c.n) for i in idx]
    else:
        strings = list(rng.integers(0, 4, size=(k, c.n)))
    mismatches = []
    for codes in strings:
        m = PauliString.from_codes(codes)
        a, b = tab.predict(m), lhv.predict_joint(m)
        if a != b:
            mismatches.append((m, a, b))
    return DiffReport(len(strings), len(strings) - len(mismatches), mismatches)


@dataclass
class ConsistencyReport:
    """Local-outcome consistency over every stabilizer element and R assignment."""

    n: int
    elements: int
    assignments: int
    checked: int
    failures: list[tuple[str, int]]
    bits: int

    @property
    def ok(self) -> bool:
        return not self.failures


def consistency_run(c: Circuit, signs: SignPattern | str = "ghz") -> ConsistencyReport:
    """Check corrected single-qubit outcomes multiply to the joint result.

    Every element of the full stabilizer is measured locally, one party per
    qubit, under every assignment of ``R_1..R_n``.
    """
    tab = run_stabilizer(c)
    lhv = run_lhv(c, signs)
    group = tab.full_stabilizer()
    failures = []
    checked = 0
    bits = max(0, c.n - 2)
    for letters, sign in group.items():
        if lhv.predict_joint(letters) != Prediction(sign):
            failures.append((letters, -1))
            continue
        for mask in range(2**c.n):
            out = sample_locals(lhv, letters, mask)
            checked += 1
            if out.product != sign or out.bits_communicated != bits:
                failures.append((letters, mask))
    return ConsistencyReport(c.n, len(group), 2**c.n, checked, failures, bits)


@dataclass
class MerminReport:
    """Brute-force search over local values of X and Y on three qubits."""

    assignments: int
    survivors: int
    xxx_values: tuple[int, ...]
    stabilizer_xxx: Prediction
    control_survivors: int
    control_xxx_values: tuple[int, ...]

    @property
    def contradiction(self) -> bool:
        return (self.survivors > 0 and self.xxx_values == (-1,)
                and self.stabilizer_xxx == Prediction.PLUS)


def mermin_demo() -> MerminReport:
    """No assignment of local X/Y values reproduces the GHZ stabilizer without communication.

    The three constraints come from ``-XYY, -YXY, -YYX``. The control drops
    the last constraint and then finds ``XXX`` values of both signs.
    """
    constraints = [(0, 1, 1), (1, 0, 1), (1, 1, 0)]  # 0 = X, 1 = Y per qubit

    def search(active):
        values = set()
        count = 0
        for bits in itertools.product((1, -1), repeat=6):
            m = np.array(bits).reshape(3, 2)  # m[j, 0] = m_x^j, m[j, 1] = m_y^j
            if all(m[0, a] * m[1, b] * m[2, c] == -1 for a, b, c in active):
                count += 1
                values.add(int(m[0, 0] * m[1, 0] * m[2, 0]))
        return count, tuple(sorted(values))

    survivors, vals = search(constraints)
    control, control_vals = search(constraints[:2])
    tab = run_stabilizer(build_ghz_circuit(3))
    return MerminReport(64, survivors, vals, tab.predict("XXX"), control, control_vals)


# --- random circuits ---------------------------------------------------------------------

def random_circuit(n: int, depth: int, rng: np.random.Generator, signs: SignPattern | str = "ghz",
                   p_cnot: float = 0.5, max_tries: int = 1000) -> Circuit:
    """Random H/CNOT circuit whose every CNOT meets the LHV correlation condition.

    A CNOT that would join rows on opposite branches is redrawn rather than
    discarding the whole circuit.
    """
    if n < 2:
        p_cnot = 0.0
    pattern = SignPattern.named(signs, n) if isinstance(signs, str) else signs
    table = new_table(n, pattern)
    gates: list[Gate] = []
    for _ in range(depth):
        for _try in range(max_tries):
            if rng.random() < p_cnot:
                c, t = (int(x) + 1 for x in rng.choice(n, size=2, replace=False))
                if not table.compatible(c, t):
                    continue
                gate = Gate("CNOT", (c, t))
            else:
                gate = Gate("H", (int(rng.integers(1, n + 1)),))
            break
        else:
            raise RuntimeError("could not draw a compatible gate")
        table.apply(gate.name, *gate.qubits)
        gates.append(gate)
    return Circuit(n, tuple(gates))


# --- logical gate sequences on chains -------------------------------------------------

@dataclass(frozen=True)
class SequenceResult:
    gates: tuple[str, ...]
    input: str
    pattern: CenterPattern
    element: PauliString
    element_sign_ok: bool
    result: PatternResult
    steps: tuple[PatternResult, ...]


def cluster_table(shape, signs: str = "checkerboard") -> LHVTable:
    circ = build_cluster_circuit(shape, verify=False)
    return run_lhv(circ, signs)


def sequence_pattern(gates: Sequence[str] | str, input_letter: str,
                     library: PatternLibrary | None = None) -> SequenceResult:
    """Concatenate single-qubit gate patterns and evaluate the chain.

    Each gate's pattern is chosen by the Pauli arriving at its input, which
    is the output letter of the previous gate.
    """
    library = library or PatternLibrary()
    if isinstance(gates, str):
        gates = [g.strip().upper() for g in gates.split(",") if g.strip()]
    if not gates:
        raise ValueError("empty gate sequence")
    letter = input_letter.upper()
    pattern = None
    steps = []
    for g in gates:
        p = library.pattern(g, letter)
        if p.shape[0] != 1:
            raise ValueError(f"{g} is not a single-qubit chain pattern")
        step = eval_pattern(cluster_table(p.shape), p)
        steps.append(step)
        pattern = p if pattern is None else concat_patterns(pattern, p)
        letter = step.letters
    table = cluster_table(pattern.shape)
    element = pattern.element()
    tab = run_stabilizer(build_cluster_circuit(pattern.shape, verify=False))
    ok = tab.element_sign(element) == 1
    return SequenceResult(tuple(gates), input_letter.upper(), pattern, element, ok,
                          eval_pattern(table, pattern), tuple(steps))


# --- CSV ------------------------------------------------------------------------------

def write_csv(header: Sequence[str], rows: Iterable[Sequence], out=None) -> str:
    """Write rows as CSV to a path, a file object, or stdout; return the text."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(x) for x in r])
    text = buf.getvalue()
    if out is None:
        sys.stdout.write(text)
    elif hasattr(out, "write"):
        out.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    return text


def _fmt(x):
    if isinstance(x, float) or isinstance(x, np.floating):
        return repr(float(x))
    if isinstance(x, Prediction):
        return str(x)
    return x


__all__ = [
    "Circuit",
    "CircuitSyntaxError",
    "ConsistencyReport",
    "DiffReport",
    "Gate",
    "MerminReport",
    "SequenceResult",
    "build_cluster_circuit",
    "build_ghz_circuit",
    "cluster_generators",
    "cluster_table",
    "consistency_run",
    "dual_run",
    "mermin_demo",
    "parse_circuit",
    "parse_scope",
    "random_circuit",
    "run_lhv",
    "run_stabilizer",
    "sequence_pattern",
    "write_csv",
]
