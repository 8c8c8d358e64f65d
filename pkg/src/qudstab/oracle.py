"""Dense state-vector reference backend.

Everything here is deliberately independent of the tableau machinery: Weyl
operators are built as explicit d^n x d^n matrices from Z and X, gates from
their defining unitaries, and measurement by projector arithmetic. The
stabilizer simulator is validated against this module, never the other way
round.

Guarded by a hard d^n cap so a typo cannot allocate gigabytes.
"""

from __future__ import annotations

import numpy as np

from .modmath import RingParams, mod_inverse
from .weyl import PhasedWeyl

MAX_DENSE_DIM = 4096


class DenseLimitError(ValueError):
    """d^n exceeds what the dense backend is allowed to allocate."""


def _check_dim(d: int, n: int) -> int:
    N = d**n
    if N > MAX_DENSE_DIM:
        raise DenseLimitError(f"dense backend capped at {MAX_DENSE_DIM}, got d^n={N}")
    return N


def tau_value(d: int) -> complex:
    """tau = exp(i pi (d^2 + 1) / d): a primitive D-th root of unity."""
    return np.exp(1j * np.pi * (d * d + 1) / d)


def z_matrix(d: int) -> np.ndarray:
    return np.diag(np.exp(2j * np.pi * np.arange(d) / d))


def x_matrix(d: int) -> np.ndarray:
    X = np.zeros((d, d), dtype=complex)
    for q in range(d):
        X[(q + 1) % d, q] = 1.0
    return X


def weyl_dense(v, ring: RingParams) -> np.ndarray:
    """W_v = kron over qudits of tau^{-a b} Z^a X^b."""
    d = ring.d
    n = len(v) // 2
    _check_dim(d, n)
    Z = z_matrix(d)
    X = x_matrix(d)
    out = np.array([[1.0 + 0j]])
    for q in range(n):
        a = v[q] % ring.D
        b = v[n + q] % ring.D
        local = tau_value(d) ** (-a * b) * (
            np.linalg.matrix_power(Z, a % d) @ np.linalg.matrix_power(X, b % d)
        )
        # tau^{-ab} Z^a X^b is well defined mod D: shifting a or b by D
        # multiplies Z^a X^b by 1 and the prefactor by tau^{-D*...} = 1.
        out = np.kron(out, local)
    return out


def phased_weyl_dense(p: PhasedWeyl) -> np.ndarray:
    return tau_value(p.ring.d) ** p.t * weyl_dense(p.v, p.ring)


def basis_state(q, d: int) -> np.ndarray:
    """|q_1 ... q_n> as a flat vector."""
    n = len(q)
    N = _check_dim(d, n)
    idx = 0
    for x in q:
        idx = idx * d + (x % d)
    psi = np.zeros(N, dtype=complex)
    psi[idx] = 1.0
    return psi


def apply_local(psi: np.ndarray, U: np.ndarray, targets, d: int, n: int) -> np.ndarray:
    """Apply a d^k x d^k unitary to the given qudits of an n-qudit state."""
    k = len(targets)
    tens = psi.reshape([d] * n)
    tens = np.moveaxis(tens, targets, range(k))
    shaped = tens.reshape(d**k, -1)
    shaped = U @ shaped
    tens = shaped.reshape([d] * n)
    tens = np.moveaxis(tens, range(k), targets)
    return tens.reshape(-1)


# ---------------------------------------------------------------------------
# Gate unitaries.
# ---------------------------------------------------------------------------


def s_gate(d: int) -> np.ndarray:
    """S = sum_q tau^{q^2} |q><q|  (so S X S^+ = tau^{-1} Z X)."""
    tau = tau_value(d)
    return np.diag(np.array([tau ** (q * q) for q in range(d)]))


def f_gate(d: int) -> np.ndarray:
    """Fourier: F|q> = d^{-1/2} sum_r e^{2 pi i rq/d} |r>."""
    w = np.exp(2j * np.pi / d)
    return np.array([[w ** (r * q) for q in range(d)] for r in range(d)]) / np.sqrt(d)


def m_gate(d: int, a: int) -> np.ndarray:
    """M_a |q> = |a q mod d> for a unit a."""
    if mod_inverse(a, d) is None:
        raise ValueError(f"{a} is not a unit mod {d}")
    U = np.zeros((d, d), dtype=complex)
    for q in range(d):
        U[(a * q) % d, q] = 1.0
    return U


def cz_gate(d: int) -> np.ndarray:
    w = np.exp(2j * np.pi / d)
    diag = np.array([w ** (q1 * q2) for q1 in range(d) for q2 in range(d)])
    return np.diag(diag)


def cx_gate(d: int) -> np.ndarray:
    """|c, t> -> |c, t + c mod d> (control first)."""
    N = d * d
    U = np.zeros((N, N), dtype=complex)
    for c in range(d):
        for t in range(d):
            U[c * d + (t + c) % d, c * d + t] = 1.0
    return U


def swap_gate(d: int) -> np.ndarray:
    N = d * d
    U = np.zeros((N, N), dtype=complex)
    for a in range(d):
        for b in range(d):
            U[b * d + a, a * d + b] = 1.0
    return U


def gate_dense(gate, ring: RingParams) -> tuple[np.ndarray, tuple[int, ...]]:
    """(unitary, targets) for a GateSpec-shaped gate (duck-typed)."""
    d = ring.d
    kind = gate.kind
    if kind == "S":
        return s_gate(d), gate.targets
    if kind == "F":
        return f_gate(d), gate.targets
    if kind == "Finv":
        return f_gate(d).conj().T, gate.targets
    if kind == "M":
        return m_gate(d, gate.a % d), gate.targets
    if kind == "CZ":
        return cz_gate(d), gate.targets
    if kind == "CX":
        return cx_gate(d), gate.targets
    if kind == "SWAP":
        return swap_gate(d), gate.targets
    if kind == "W":
        k = len(gate.targets)
        v = [0] * (2 * k)
        for i in range(k):
            v[i] = gate.zexp[i] % ring.D
            v[k + i] = gate.xexp[i] % ring.D
        U = tau_value(d) ** (gate.tphase % ring.D) * weyl_dense(tuple(v), ring)
        return U, gate.targets
    raise ValueError(f"unknown gate kind {kind!r}")


def apply_gate(psi: np.ndarray, gate, ring: RingParams, n: int) -> np.ndarray:
    U, targets = gate_dense(gate, ring)
    return apply_local(psi, U, list(targets), ring.d, n)


# ---------------------------------------------------------------------------
# Stabilized subspaces and measurement.
# ---------------------------------------------------------------------------


def pauli_projector(p: PhasedWeyl, outcome: int) -> np.ndarray:
    """Projector onto the tau^{2*outcome}-eigenspace of the measured operator.

    For P with P^s proportional to I this is (1/s') sum_j (tau^{-2 outcome} P)^j
    over the cyclic group generated by P; implemented directly as the average
    over j = 0..d-1, which is exact for any legal measurement operator.
    """
    d = p.ring.d
    P = phased_weyl_dense(p)
    N = P.shape[0]
    tau = tau_value(d)
    acc = np.zeros((N, N), dtype=complex)
    term = np.eye(N, dtype=complex)
    phase = tau ** (-2 * (outcome % d))
    for _ in range(d):
        acc += term
        term = phase * (P @ term)
    return acc / d


def stabilized_subspace(generators: list[PhasedWeyl], n: int, d: int) -> np.ndarray:
    """Orthonormal basis (columns) of the joint +1 eigenspace."""
    N = _check_dim(d, n)
    proj = np.eye(N, dtype=complex)
    for g in generators:
        P = phased_weyl_dense(g)
        acc = np.zeros((N, N), dtype=complex)
        term = np.eye(N, dtype=complex)
        for _ in range(d):
            acc += term
            term = P @ term
        proj = proj @ (acc / d)
    # columns spanning the image of the product projector
    u, s, _ = np.linalg.svd(proj)
    rank = int(np.sum(s > 0.5))
    return u[:, :rank]


def measure_outcomes(psi: np.ndarray, p: PhasedWeyl):
    """All (outcome, probability, post_state) triples with probability > 0."""
    out = []
    for h in range(p.ring.d):
        proj = pauli_projector(p, h)
        phi = proj @ psi
        prob = float(np.real(np.vdot(phi, phi)))
        if prob > 1e-12:
            out.append((h, prob, phi / np.sqrt(prob)))
    return out


def overlap_with_subspace(psi: np.ndarray, basis: np.ndarray) -> float:
    """|projection of psi onto span(basis)|^2 (basis columns orthonormal)."""
    coeff = basis.conj().T @ psi
    return float(np.real(np.vdot(coeff, coeff)))


# ---------------------------------------------------------------------------
# Full-program simulation.
# ---------------------------------------------------------------------------


def simulate(program, fix: dict | None = None):
    """Enumerate all trajectories of a parsed program on |0...0>.

    Returns a list of (outcomes, probability, state) with `outcomes` a dict of
    record names. `fix` pins named outcomes; trajectories incompatible with a
    pin are dropped. Conditionals read earlier outcomes of the same
    trajectory.
    """
    ring = program.ring
    n = program.n
    _check_dim(ring.d, n)
    fix = fix or {}
    psi0 = basis_state((0,) * n, ring.d)
    branches = [({}, 1.0, psi0)]
    for inst in program.instructions:
        new_branches = []
        for outcomes, prob, psi in branches:
            if inst.condition is not None:
                name, want = inst.condition
                if outcomes[name] != want:
                    new_branches.append((outcomes, prob, psi))
                    continue
            if inst.op == "gate":
                new_branches.append(
                    (outcomes, prob, apply_gate(psi, inst.gate, ring, n))
                )
            else:  # measurement
                p = inst.pauli(ring, n)
                for h, pr, phi in measure_outcomes(psi, p):
                    if inst.record in fix and fix[inst.record] != h:
                        continue
                    o2 = dict(outcomes)
                    o2[inst.record] = h
                    new_branches.append((o2, prob * pr, phi))
        branches = new_branches
    return branches
