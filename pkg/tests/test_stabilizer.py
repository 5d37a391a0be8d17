import itertools
from functools import reduce

import numpy as np
import pytest

from qic import lattice
from qic import stabilizer as st
from qic.stabilizer import PauliString, Prediction

PAULI = {
    "I": np.eye(2),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]]),
    "Z": np.diag([1.0, -1.0]),
}
GATES = {
    "H": np.array([[1, 1], [1, -1]]) / np.sqrt(2),
    "P": np.diag([1, 1j]),
    "X": PAULI["X"],
    "Y": PAULI["Y"],
    "Z": PAULI["Z"],
}


def dense_pauli(letters):
    return reduce(np.kron, [PAULI[ch] for ch in letters])


def dense_gate(n, gate, *qubits):
    if gate == "CNOT":
        c, t = qubits
        dim = 2**n
        u = np.zeros((dim, dim))
        for j in range(dim):
            bits = [(j >> (n - 1 - k)) & 1 for k in range(n)]
            if bits[c - 1]:
                bits[t - 1] ^= 1
            u[int("".join(map(str, bits)), 2), j] = 1
        return u
    ops = [np.eye(2)] * n
    ops[qubits[0] - 1] = GATES[gate]
    return reduce(np.kron, ops)


def run_both(n, gates):
    t = st.new_tableau(n)
    psi = np.zeros(2**n, dtype=complex)
    psi[0] = 1
    for g, *q in gates:
        t.apply(g, *q)
        psi = dense_gate(n, g, *q) @ psi
    return t, psi


def dense_prediction(psi, letters):
    ev = np.vdot(psi, dense_pauli(letters) @ psi).real
    if abs(ev - 1) < 1e-9:
        return Prediction.PLUS
    if abs(ev + 1) < 1e-9:
        return Prediction.MINUS
    assert abs(ev) < 1e-9
    return Prediction.RANDOM


def random_gates(n, count, rng):
    out = []
    for _ in range(count):
        if n > 1 and rng.random() < 0.4:
            c, t = rng.choice(np.arange(1, n + 1), 2, replace=False)
            out.append(("CNOT", int(c), int(t)))
        else:
            out.append((str(rng.choice(list(GATES))), int(rng.integers(1, n + 1))))
    return out


class TestPauliString:
    def test_parse(self):
        p = PauliString.parse("-xyy")
        assert p.sign == -1 and p.letters == "XYY" and str(p) == "-XYY"
        assert str(PauliString.parse("ZI")) == "+ZI"

    @pytest.mark.parametrize("text", ["", "XQ", "+"])
    def test_bad(self, text):
        with pytest.raises(ValueError):
            PauliString.parse(text)

    def test_bad_sign(self):
        with pytest.raises(ValueError):
            PauliString(2, "X")

    def test_symplectic(self):
        np.testing.assert_array_equal(PauliString.parse("IXYZ").symplectic(), [0, 1, 1, 0, 0, 0, 1, 1])

    def test_products_match_matrices(self):
        for a, b in itertools.product(["".join(p) for p in itertools.product("IXYZ", repeat=2)], repeat=2):
            pa, pb = PauliString.parse(a), PauliString.parse(b)
            dense = dense_pauli(a) @ dense_pauli(b)
            if np.allclose(dense, dense.conj().T):
                prod = pa * pb
                np.testing.assert_allclose(prod.sign * dense_pauli(prod.letters), dense, atol=1e-12)
            else:
                with pytest.raises(ValueError):
                    pa * pb

    def test_multiply_codes_phase(self):
        phase, codes = st.multiply_codes([1], [2])
        assert phase == 1 and codes.tolist() == [3]  # XY = iZ

    def test_index_roundtrip(self):
        for idx in (0, 5, 63):
            codes = st.index_to_codes(idx, 3)
            assert int(st.codes_to_index(codes[None, :])[0]) == idx
        assert st.all_measurement_codes(2).shape == (16, 2)


class TestTableau:
    def test_initial(self):
        assert [str(g) for g in st.new_tableau(3).generators] == ["+ZII", "+IZI", "+IIZ"]
        assert [str(g) for g in st.new_tableau(1).generators] == ["+Z"]
        with pytest.raises(ValueError):
            st.new_tableau(0)

    def test_ghz(self):
        t = st.new_tableau(3).apply("H", 1).apply("CNOT", 1, 2).apply("CNOT", 1, 3)
        assert [str(g) for g in t.generators] == ["+XXX", "+ZZI", "+ZIZ"]
        full = t.full_stabilizer()
        assert len(full) == 8
        assert full["XXX"] == 1 and full["XYY"] == full["YXY"] == full["YYX"] == -1

    def test_cluster_chain(self):
        t = st.new_tableau(5)
        for q in range(1, 6):
            t.apply("H", q)
        for q in range(1, 5):
            t.apply("H", q + 1).apply("CNOT", q, q + 1).apply("H", q + 1)
        full = t.full_stabilizer()
        for g in ("XZIII", "ZXZII", "IZXZI", "IIZXZ", "IIIZX"):
            assert full[g] == 1

    @pytest.mark.parametrize("shape", ["chain:4", "chain:9", "grid:3x3", "grid:2x3"])
    def test_cluster_generators(self, shape):
        n = lattice.n_sites(shape)
        t = st.new_tableau(n)
        for q in range(1, n + 1):
            t.apply("H", q)
        for a, nb in lattice.neighbours(shape).items():
            for b in nb:
                if b > a:
                    t.apply("H", b).apply("CNOT", a, b).apply("H", b)
        for a, nb in lattice.neighbours(shape).items():
            assert t.predict(st.cluster_generator(n, a, nb)) == Prediction.PLUS

    def test_involutions(self, rng=None):
        rng = np.random.default_rng(3)
        base = st.new_tableau(4)
        for g, *q in random_gates(4, 20, rng):
            base.apply(g, *q)
        for gate in ("H", "X", "Y", "Z"):
            assert st.apply_gate(st.apply_gate(base, gate, 2), gate, 2) == base
        assert st.apply_gate(st.apply_gate(base, "CNOT", 1, 3), "CNOT", 1, 3) == base
        p4 = base.copy()
        for _ in range(4):
            p4.apply("P", 3)
        assert p4 == base

    def test_apply_gate_is_functional(self):
        t = st.new_tableau(2)
        st.apply_gate(t, "H", 1)
        assert t == st.new_tableau(2)

    @pytest.mark.parametrize("call", [("H", 0), ("H", 3), ("CNOT", 1, 1), ("CNOT", 1), ("T", 1), ("H", 1, 2)])
    def test_bad_gates(self, call):
        with pytest.raises((ValueError, IndexError)):
            st.new_tableau(2).apply(*call)

    def test_invariants_hold(self):
        rng = np.random.default_rng(4)
        t = st.new_tableau(6)
        for g, *q in random_gates(6, 200, rng):
            t.apply(g, *q)
            t.check()

    def test_check_detects_bad_generators(self):
        with pytest.raises(AssertionError):
            st.Tableau(np.array([[1, 0], [3, 0]]), np.ones(2)).check()
        with pytest.raises(AssertionError):
            st.Tableau(np.array([[3, 0], [3, 0]]), np.ones(2)).check()


class TestPrediction:
    def test_examples(self):
        t = st.new_tableau(3).apply("H", 1).apply("CNOT", 1, 2).apply("CNOT", 1, 3)
        assert t.predict("XXX") == Prediction.PLUS
        assert t.predict("XYY") == Prediction.MINUS
        assert st.predict(st.new_tableau(3), "ZZX") == Prediction.RANDOM
        assert t.predict("III") == Prediction.PLUS
        assert str(Prediction.RANDOM) == "Random"

    def test_signed_measurement(self):
        t = st.new_tableau(2)
        assert t.predict("-ZI") == Prediction.MINUS

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            st.new_tableau(2).predict("ZZZ")

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_against_state_vector(self, n):
        rng = np.random.default_rng(10 + n)
        for _ in range(15):
            t, psi = run_both(n, random_gates(n, 12, rng))
            table = t.predict_all()
            assert np.sum(table != 0) == 2**n
            for k, codes in enumerate(st.all_measurement_codes(n)):
                letters = PauliString.from_codes(codes).letters
                expect = dense_prediction(psi, letters)
                assert t.predict(letters) == expect
                assert table[k] == int(expect)

    def test_deterministic_products_multiply(self):
        rng = np.random.default_rng(8)
        t, _ = run_both(3, random_gates(3, 15, rng))
        full = t.full_stabilizer()
        for a, b in itertools.product(full, repeat=2):
            prod = PauliString(full[a], a) * PauliString(full[b], b)
            assert full[prod.letters] == prod.sign

    def test_gf2_path_above_guard(self):
        n = 18
        t = st.new_tableau(n).apply("H", 1)
        for q in range(2, n + 1):
            t.apply("CNOT", 1, q)
        with pytest.raises(ValueError):
            t.full_stabilizer()
        assert t.predict("X" * n) == Prediction.PLUS
        assert t.predict("YY" + "X" * (n - 2)) == Prediction.MINUS
        assert t.predict("YYYY" + "X" * (n - 4)) == Prediction.PLUS
        assert t.predict("ZZ" + "I" * (n - 2)) == Prediction.PLUS
        assert t.predict("Z" + "I" * (n - 1)) == Prediction.RANDOM

    def test_gf2_matches_full_expansion(self):
        rng = np.random.default_rng(9)
        t, _ = run_both(5, random_gates(5, 25, rng))
        for letters, sign in t.full_stabilizer().items():
            assert t.element_sign(letters) == sign
        assert t.element_sign("XXXXX") in (None, 1, -1)


class TestGF2:
    def test_rank(self):
        assert st.gf2_rank(np.eye(3)) == 3
        assert st.gf2_rank(np.array([[1, 1], [1, 1]])) == 1
        assert st.gf2_rank(np.array([[1, 1, 0], [0, 1, 1], [1, 0, 1]])) == 2

    def test_solve(self):
        a = np.array([[1, 1, 0], [0, 1, 1]])
        x = st.gf2_solve(a, np.array([1, 0]))
        assert np.array_equal(a @ x % 2, [1, 0])
        assert st.gf2_solve(np.array([[1, 1], [1, 1]]), np.array([1, 0])) is None
