"""Shared helpers: random stabilizer states with a dense shadow, random
programs, and dense utilities used across the suite."""

import random

import numpy as np

from qudstab import oracle
from qudstab.clifford import GateSpec, apply as apply_conjugation, gate_tableau
from qudstab.modmath import ring_params
from qudstab.tableau import standard_basis_tableau
from qudstab.weyl import PauliVector


def units_mod(d):
    return [a for a in range(1, d) if np.gcd(a, d) == 1]


def random_gate(rng, d, n, allow_w=False):
    kinds = ["S", "F", "Finv", "M"]
    if allow_w:
        kinds.append("W")
    if n > 1:
        kinds += ["CZ", "CX", "SWAP"]
    kind = rng.choice(kinds)
    if kind in ("CZ", "CX", "SWAP"):
        q1 = rng.randrange(n)
        q2 = rng.randrange(n - 1)
        q2 += q2 >= q1
        return GateSpec(kind, (q1, q2))
    if kind == "M":
        return GateSpec("M", (rng.randrange(n),), a=rng.choice(units_mod(d)))
    if kind == "W":
        ring = ring_params(d)
        targets = tuple(range(n))
        return GateSpec(
            "W",
            targets,
            zexp=tuple(rng.randrange(ring.D) for _ in targets),
            xexp=tuple(rng.randrange(ring.D) for _ in targets),
            tphase=rng.randrange(ring.D),
        )
    return GateSpec(kind, (rng.randrange(n),))


def random_stabilizer_state(rng, d, n, ngates=6, allow_w=False):
    """(tableau, dense state): random Clifford gates on a random basis state."""
    ring = ring_params(d)
    basis = tuple(rng.randrange(d) for _ in range(n))
    T = standard_basis_tableau(basis, ring)
    psi = oracle.basis_state(basis, d)
    for _ in range(ngates):
        g = random_gate(rng, d, n, allow_w=allow_w)
        T = apply_conjugation(gate_tableau(g, n, ring), T)
        psi = oracle.apply_gate(psi, g, ring, n)
    return T, psi


def tableau_state(T):
    """Dense unit vector of the (1-dimensional) stabilized subspace."""
    gens = [T.column_operator(j) for j in range(T.ncols)]
    basis = oracle.stabilized_subspace(gens, T.n, T.ring.d)
    assert basis.shape[1] == 1, f"stabilized subspace has dim {basis.shape[1]}"
    return basis[:, 0]


def states_match(a, b, tol=1e-9):
    return abs(abs(np.vdot(a, b)) - 1) < tol


def dense_unitary(gates, d, n):
    ring = ring_params(d)
    N = d**n
    U = np.eye(N, dtype=complex)
    cols = []
    for i in range(N):
        psi = U[:, i].copy()
        for g in gates:
            psi = oracle.apply_gate(psi, g, ring, n)
        cols.append(psi)
    return np.column_stack(cols)


def random_pauli_vector(rng, d, n):
    ring = ring_params(d)
    return PauliVector(
        rng.randrange(d), tuple(rng.randrange(ring.D) for _ in range(2 * n)), ring
    )


# -- random program text ----------------------------------------------------

_GATE_POOL = ["S", "F", "Finv", "M", "CZ", "CX", "SWAP", "W"]


def random_program(rng, d, n, max_gates=8, max_measurements=3):
    """Random circuit text with measurements and conditionals."""
    ring = ring_params(d)
    lines = [f"dim {d}", f"qudits {n}"]
    records = []
    n_meas = rng.randrange(1, max_measurements + 1)
    n_gates = rng.randrange(max_gates + 1)
    slots = ["g"] * n_gates + ["m"] * n_meas
    rng.shuffle(slots)
    for slot in slots:
        if slot == "m":
            name = f"r{len(records)}"
            if rng.random() < 0.5:
                lines.append(f"measure z {rng.randrange(n)} -> {name}")
            else:
                zv = ",".join(str(rng.randrange(ring.D)) for _ in range(n))
                xv = ",".join(str(rng.randrange(ring.D)) for _ in range(n))
                delta = rng.randrange(d)
                lines.append(f"measure w z={zv} x={xv} delta={delta} -> {name}")
            records.append(name)
            continue
        cond = ""
        if records and rng.random() < 0.25:
            cond = f" if {rng.choice(records)}={rng.randrange(d)}"
        kind = rng.choice(_GATE_POOL)
        if kind in ("CZ", "CX", "SWAP"):
            if n < 2:
                kind = "S"
            else:
                q1 = rng.randrange(n)
                q2 = rng.randrange(n - 1)
                q2 += q2 >= q1
                lines.append(f"{kind} {q1} {q2}{cond}")
                continue
        if kind == "M":
            lines.append(f"M {rng.randrange(n)} {rng.choice(units_mod(d))}{cond}")
        elif kind == "W":
            qs = sorted(rng.sample(range(n), rng.randrange(1, n + 1)))
            zv = ",".join(str(rng.randrange(ring.D)) for _ in qs)
            xv = ",".join(str(rng.randrange(ring.D)) for _ in qs)
            qstr = " ".join(str(q) for q in qs)
            lines.append(f"W {qstr} z={zv} x={xv} t={rng.randrange(ring.D)}{cond}")
        else:
            lines.append(f"{kind} {rng.randrange(n)}{cond}")
    return "\n".join(lines) + "\n"
