import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from support import model_for, uc_state
from tdcodes.circuit import CX, Circuit, Gate, H, Layer
from tdcodes.errors import DimensionMismatch, InvalidSize
from tdcodes.pauli import PauliOp
from tdcodes.tableau import (
    Tableau,
    canonical,
    conjugate,
    new_zero,
    pauli_expectation,
    run,
    states_equal,
    verify_code_state,
)


def labels(state):
    return sorted(p.label() for p in state.generators())


def random_circuit(draw, n, length):
    gates = []
    for _ in range(length):
        kind = draw(st.sampled_from(["H", "X", "Z", "CNOT", "CNOT"]))
        if kind == "CNOT" and n > 1:
            c, t = draw(st.permutations(range(n)))[:2]
            gates.append(CX(c, t))
        else:
            gates.append(Gate("H" if kind == "CNOT" else kind, (draw(st.integers(0, n - 1)),)))
    return Circuit(n, [Layer([g]) for g in gates])


@st.composite
def circuits(draw, max_qubits=6, max_len=40):
    n = draw(st.integers(1, max_qubits))
    return random_circuit(draw, n, draw(st.integers(0, max_len)))


def test_zero_state():
    assert labels(new_zero(1)) == ["+Z"]
    assert labels(new_zero(3)) == ["+IIZ", "+IZI", "+ZII"]
    assert pauli_expectation(new_zero(1), PauliOp.from_label("+X")) == 0
    with pytest.raises(InvalidSize):
        new_zero(0)


def test_basic_gates():
    bell = run(Circuit(2, [Layer([H(0)]), Layer([CX(0, 1)])]))
    assert labels(canonical(bell)) == ["+XX", "+ZZ"]
    flipped = run(Circuit(1, [Layer([Gate("X", (0,))])]))
    assert labels(flipped) == ["-Z"]
    with pytest.raises(IndexError):
        new_zero(2).h(2)
    with pytest.raises(IndexError):
        new_zero(2).cnot(0, 5)


def test_expectations():
    zero = new_zero(1)
    plus = new_zero(1).h(0)
    Z = PauliOp.from_label("+Z")
    assert pauli_expectation(zero, Z) == 1
    assert pauli_expectation(plus, Z) == 0
    assert pauli_expectation(plus, PauliOp.from_label("+X")) == 1
    assert pauli_expectation(plus, PauliOp.from_label("-X")) == -1
    bell = new_zero(2).h(0).cnot(0, 1)
    assert pauli_expectation(bell, PauliOp.from_label("-YY")) == 1
    with pytest.raises(DimensionMismatch):
        pauli_expectation(zero, PauliOp.from_label("+ZZ"))


@pytest.mark.parametrize(
    "label,gate,expected",
    [
        ("+XI", H(0), "+ZI"),
        ("+ZI", H(0), "+XI"),
        ("+YI", H(0), "-YI"),
        ("+XI", CX(0, 1), "+XX"),
        ("+IZ", CX(0, 1), "+ZZ"),
        ("+IX", CX(0, 1), "+IX"),
        ("+YI", CX(0, 1), "+YX"),
        ("+ZI", Gate("X", (0,)), "-ZI"),
        ("+XI", Gate("Z", (0,)), "-XI"),
        ("+YI", Gate("X", (0,)), "-YI"),
    ],
)
def test_conjugation_rules(label, gate, expected):
    assert conjugate(PauliOp.from_label(label), gate).label() == expected


def test_canonical_form_examples():
    a = new_zero(2).h(0).cnot(0, 1)
    b = new_zero(2).h(1).cnot(1, 0)
    assert states_equal(a, b) and a == b
    assert not states_equal(new_zero(2), new_zero(2).pauli_x(1))
    assert not states_equal(new_zero(2), new_zero(3))


@settings(max_examples=60, deadline=None)
@given(circuits())
def test_generators_stay_independent(circ):
    state = run(circ)
    assert state.independent()
    gens = state.generators()
    assert all(p.commutes_with(q) for p, q in itertools.combinations(gens, 2))
    assert all(pauli_expectation(state, p) == 1 for p in gens)


@settings(max_examples=60, deadline=None)
@given(circuits(), st.data())
def test_product_signs_are_consistent(circ, data):
    state = run(circ)
    gens = state.generators()
    pick = lambda: data.draw(st.lists(st.booleans(), min_size=len(gens), max_size=len(gens)))

    def element(mask):
        acc = PauliOp.identity(state.n)
        for g, m in zip(gens, mask):
            if m:
                acc = acc * g
        return acc

    s, t = element(pick()), element(pick())
    sign_s, sign_t = pauli_expectation(state, s), pauli_expectation(state, t)
    assert sign_s == 1 and sign_t == 1
    assert pauli_expectation(state, s * t) == sign_s * sign_t
    assert pauli_expectation(state, -s) == -1


def fixture_states():
    states = [new_zero(3), new_zero(3).h(0), new_zero(3).h(0).cnot(0, 1), new_zero(3).h(1).cnot(1, 0)]
    states.append(new_zero(3).h(0).cnot(0, 2).cnot(0, 1))
    states.append(new_zero(3).h(2).cnot(2, 1).cnot(1, 0))
    states.append(new_zero(3).pauli_x(2))
    return states


def test_equality_is_an_equivalence_relation():
    states = fixture_states()
    for a in states:
        assert states_equal(a, a)
    for a, b in itertools.product(states, repeat=2):
        assert states_equal(a, b) == states_equal(b, a)
    for a, b, c in itertools.product(states, repeat=3):
        if states_equal(a, b) and states_equal(b, c):
            assert states_equal(a, c)
    # Two non-trivial coincidences in the fixture: the Bell pair and the GHZ state.
    assert sum(states_equal(a, b) for a, b in itertools.combinations(states, 2)) == 2


@settings(max_examples=40, deadline=None)
@given(circuits(max_qubits=5), st.data())
def test_canonical_form_is_basis_independent(circ, data):
    state = run(circ)
    gens = state.generators()
    # Multiply one generator into others and shuffle; the state is unchanged.
    j = data.draw(st.integers(0, len(gens) - 1))
    mixed = [g * gens[j] if k != j and data.draw(st.booleans()) else g for k, g in enumerate(gens)]
    order = data.draw(st.permutations(range(len(gens))))
    other = Tableau.from_paulis([mixed[k] for k in order])
    assert states_equal(state, other)


def test_verify_xcube_code_state():
    model = model_for((0, 1, 2, 3), (2, 3, 3))
    report = verify_code_state(uc_state((0, 1, 2, 3), (2, 3, 3)), model)
    assert report.passed
    assert len(report.a_values) == 18 and len(report.b_values) == 54
    assert report.to_dict()["pass"] is True


def test_verify_zero_state():
    model = model_for((0, 1, 2, 2), (3, 3))
    report = verify_code_state(new_zero(model.n_qubits), model)
    assert set(report.b_values) == {1}
    assert set(report.a_values) == {0}
    assert not report.passed and all(v["term"] == "A" for v in report.violations)


def test_apply_pauli_flips_anticommuting_generators():
    state = new_zero(2).apply_pauli(PauliOp.from_label("+XI"))
    assert labels(state) == ["+IZ", "-ZI"]
    dense = np.array([[0, 0], [0, 0]])
    assert state.x.tolist() == dense.tolist()
