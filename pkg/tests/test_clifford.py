import random

import numpy as np
import pytest
from conftest import dense_unitary, random_gate, units_mod

from qudstab import oracle
from qudstab.clifford import (
    ConjugationTableau,
    GateSpec,
    NotLiftableError,
    apply,
    circuit_conjugation,
    compose,
    conjugate,
    gate_tableau,
    identity_conjugation,
    inverse,
    is_symplectic,
    lift_symplectic,
    reduce_weyl_to_z,
)
from qudstab.modmath import ring_params
from qudstab.tableau import TableauContractError, standard_basis_tableau
from qudstab.weyl import PhasedWeyl, harmonic_number, operator_eq

DIMS = [2, 3, 4, 5, 6]


@pytest.mark.parametrize("d", DIMS)
@pytest.mark.parametrize("n", [1, 2])
def test_gate_conjugation_matches_dense(d, n):
    rng = random.Random(d * 10 + n)
    ring = ring_params(d)
    for _ in range(15):
        g = random_gate(rng, d, n, allow_w=True)
        U = gate_tableau(g, n, ring)
        assert is_symplectic(U.C, n, ring)
        Ud = dense_unitary([g], d, n)
        p = PhasedWeyl(
            rng.randrange(ring.D), tuple(rng.randrange(ring.D) for _ in range(2 * n)), ring
        )
        lhs = Ud @ oracle.phased_weyl_dense(p) @ Ud.conj().T
        rhs = oracle.phased_weyl_dense(conjugate(U, p))
        assert np.max(np.abs(lhs - rhs)) < 1e-9


@pytest.mark.parametrize("d", DIMS)
def test_compose_and_inverse(d):
    rng = random.Random(d)
    ring = ring_params(d)
    n = 2
    for _ in range(10):
        gs = [random_gate(rng, d, n) for _ in range(4)]
        U = circuit_conjugation(gs, n, ring)
        # compose agrees with folding one gate at a time
        V = identity_conjugation(n, ring)
        for g in gs:
            V = compose(gate_tableau(g, n, ring), V)
        assert U == V
        I2 = compose(U, inverse(U))
        assert I2 == identity_conjugation(n, ring)


def test_apply_to_tableau():
    ring = ring_params(3)
    T = standard_basis_tableau((0, 0), ring)
    g = GateSpec("F", (0,))
    T2 = apply(gate_tableau(g, 2, ring), T)
    # Z_1 -> X_1^{-1}: first column becomes (0,0 | 2,0)
    assert T2.column_vector(0) == (0, 0, 2, 0)
    assert T2.column_vector(1) == (0, 1, 0, 0)


def test_gate_argument_validation():
    ring = ring_params(4)
    with pytest.raises(TableauContractError):
        gate_tableau(GateSpec("S", (3,)), 2, ring)
    with pytest.raises(TableauContractError):
        gate_tableau(GateSpec("CX", (0, 0)), 2, ring)
    with pytest.raises(TableauContractError):
        gate_tableau(GateSpec("M", (0,), a=2), 1, ring)  # 2 not a unit mod 4
    with pytest.raises(TableauContractError):
        gate_tableau(GateSpec("Q", (0,)), 1, ring)


def test_eq15_mapping_table():
    """Every gate's action on the Z and X generators, exactly."""
    for d in DIMS:
        ring = ring_params(d)
        D = ring.D
        Z = PhasedWeyl(0, (1, 0), ring)
        X = PhasedWeyl(0, (0, 1), ring)
        S = gate_tableau(GateSpec("S", (0,)), 1, ring)
        assert conjugate(S, Z) == Z
        assert conjugate(S, X) == PhasedWeyl(0, (1, 1), ring)
        F = gate_tableau(GateSpec("F", (0,)), 1, ring)
        assert conjugate(F, Z) == PhasedWeyl(0, (0, -1), ring)
        assert conjugate(F, X) == Z
        for a in units_mod(d):
            M = gate_tableau(GateSpec("M", (0,), a=a), 1, ring)
            assert operator_eq(conjugate(M, Z), PhasedWeyl(0, (pow(a, -1, d), 0), ring))
            assert operator_eq(conjugate(M, X), PhasedWeyl(0, (0, a), ring))
        ZI = PhasedWeyl(0, (1, 0, 0, 0), ring)
        IZ = PhasedWeyl(0, (0, 1, 0, 0), ring)
        XI = PhasedWeyl(0, (0, 0, 1, 0), ring)
        IX = PhasedWeyl(0, (0, 0, 0, 1), ring)
        CZ = gate_tableau(GateSpec("CZ", (0, 1)), 2, ring)
        assert conjugate(CZ, ZI) == ZI
        assert conjugate(CZ, IZ) == IZ
        assert conjugate(CZ, XI) == PhasedWeyl(0, (0, 1, 1, 0), ring)
        assert conjugate(CZ, IX) == PhasedWeyl(0, (1, 0, 0, 1), ring)
        CX = gate_tableau(GateSpec("CX", (0, 1)), 2, ring)
        assert conjugate(CX, ZI) == ZI
        assert conjugate(CX, IZ) == PhasedWeyl(0, (-1, 1, 0, 0), ring)
        assert conjugate(CX, XI) == PhasedWeyl(0, (0, 0, 1, 1), ring)
        assert conjugate(CX, IX) == IX


@pytest.mark.parametrize("d", [2, 3, 4, 6])
def test_lift_symplectic_random(d):
    rng = random.Random(d * 13)
    ring = ring_params(d)
    n = 2
    for _ in range(10):
        gs = [random_gate(rng, d, n) for _ in range(5)]
        C = circuit_conjugation(gs, n, ring).C
        Cmodd = [[x % d for x in row] for row in C]
        L = lift_symplectic(Cmodd, n, ring)
        assert is_symplectic(L, n, ring)
        for i in range(2 * n):
            for j in range(2 * n):
                assert (L[i][j] - Cmodd[i][j]) % d == 0


def test_lift_symplectic_rejects_non_symplectic():
    ring = ring_params(4)
    bad = [[1, 0], [0, 2]]  # det 2: not symplectic mod 4
    with pytest.raises(NotLiftableError):
        lift_symplectic(bad, 1, ring)


@pytest.mark.parametrize("d", DIMS)
@pytest.mark.parametrize("n", [1, 2])
def test_reduce_weyl_to_z(d, n):
    rng = random.Random(d + n)
    ring = ring_params(d)
    for _ in range(20):
        v = tuple(rng.randrange(ring.D) for _ in range(2 * n))
        U, idx, k, gates = reduce_weyl_to_z(v, ring)
        assert idx == 0
        eta = harmonic_number(v, d)
        target = [0] * (2 * n)
        target[0] = eta
        got = conjugate(U, PhasedWeyl(0, v, ring))
        assert operator_eq(got, PhasedWeyl(2 * k, tuple(target), ring))
        # the gate list realizes the same tableau
        assert circuit_conjugation(gates, n, ring) == U


def test_reduce_weyl_mod_d_only():
    # d=6, v=(4,0): no unit sends 4 to 2 mod 12, so the landing is mod d
    ring = ring_params(6)
    v = (4, 0)
    U, idx, k, gates = reduce_weyl_to_z(v, ring)
    got = conjugate(U, PhasedWeyl(0, v, ring))
    assert got.v[0] % 6 == 2 and got.v[1] % 6 == 0
    assert operator_eq(got, PhasedWeyl(2 * k, (2, 0), ring))
