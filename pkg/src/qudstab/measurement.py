"""Pauli measurement on stabilizer tableaus, exact for composite d.

The measured observable is P = tau^{-2 delta} W_p (a PauliVector); outcome h
labels the tau^{2h}-eigenspace. For composite d an outcome is generally
supported on a *coset* {kappa, kappa + eta, ...} of eta Z_d with
eta = gcd(d, [p, v_1], ..., [p, v_l]): s = d/eta branches, each of
probability 1/s. The engine:

1. funnels all nonzero commutators into one pivot column by invertible
   column operations (Euclid on the commutator row),
2. rescales the pivot by a unit so its commutator is exactly eta,
3. reads kappa off the eigenphase of W_{s p} (a group member up to phase),
4. on a chosen branch: raises the pivot to the s-th power, adjoins the
   measured operator with its outcome phase, and renormalizes.

The pivot column (pre-power) is kept as the measurement byproduct: powers of
it map one outcome branch onto another (`byproduct_shift`).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .clifford import GateSpec
from .modmath import RingParams, SymplecticForm, symplectic_product, unit_for_gcd
from .tableau import (
    StabilizerTableau,
    TableauContractError,
    _Work,
    clear_phase,
    membership,
    normalize_generators,
)
from .weyl import PauliVector


class UnsupportedOutcomeError(ValueError):
    """A fixed outcome lies outside the possible coset (probability zero)."""


@dataclass(frozen=True)
class OutcomeCoset:
    """Possible outcomes: kappa + eta*j mod d, j = 0..(d/eta - 1)."""

    kappa: int
    eta: int

    def members(self, d: int) -> list[int]:
        return [(self.kappa + self.eta * j) % d for j in range(d // self.eta)]

    def contains(self, h: int, d: int) -> bool:
        return (h - self.kappa) % self.eta == 0


@dataclass(frozen=True)
class MeasurementRecord:
    outcome: int
    coset: OutcomeCoset
    probability: Fraction  # of this branch
    byproduct: PauliVector  # pivot column; identity column when deterministic

    @property
    def deterministic(self) -> bool:
        return self.probability == 1


@dataclass(frozen=True)
class TerminalDistribution:
    coset: OutcomeCoset
    branch_count: int
    branch_probability: Fraction


@dataclass
class _Analysis:
    work: _Work
    pivot: int | None  # None when P commutes with the whole group
    eta: int
    s: int
    kappa: int


def _commutator_row(work: _Work, v, modulus: int) -> list[int]:
    form = SymplecticForm(work.n)
    return [
        symplectic_product(v, work.col_vector(k), form, modulus)
        for k in range(work.ncols)
    ]


def _analyze(T: StabilizerTableau, p: PauliVector) -> _Analysis:
    ring = T.ring
    d, D = ring.d, ring.D
    work = _Work(T)
    row = _commutator_row(work, p.v, d)
    eta = gcd(d, *row) if row else d
    s = d // eta
    pivot = None
    if s > 1:
        # rightmost non-commuting column is the pivot; funnel the rest into it
        pivot = max(k for k in range(work.ncols) if row[k] % d)
        for c in range(work.ncols):
            if c == pivot:
                continue
            while symplectic_product(p.v, work.col_vector(c), SymplecticForm(work.n), d):
                form = SymplecticForm(work.n)
                a = symplectic_product(p.v, work.col_vector(pivot), form, d)
                b = symplectic_product(p.v, work.col_vector(c), form, d)
                if a == 0:
                    work.swap(pivot, c)
                elif a <= b:
                    work.combine(pivot, c, -(b // a))
                else:
                    work.combine(c, pivot, -(a // b))
        e = symplectic_product(p.v, work.col_vector(pivot), SymplecticForm(work.n), d)
        u = unit_for_gcd(e, d)
        if u != 1:
            work.scale(pivot, u)  # commutator of the pivot becomes exactly eta
    # eigenphase of W_{s p}, which commutes with the whole group
    sp = tuple((s * x) % D for x in p.v)
    res = clear_phase(T, sp)
    if res is None:
        raise TableauContractError(
            "measured operator's s-th power is not stabilized: "
            "tableau does not describe a full stabilizer state"
        )
    t = res[0] % d
    if t % s:  # pragma: no cover - impossible for a consistent state
        raise TableauContractError("eigenphase not divisible by the branch count")
    kappa = (t // s - p.phi) % eta
    return _Analysis(work, pivot, eta, s, kappa)


def terminal_distribution(T: StabilizerTableau, p: PauliVector) -> TerminalDistribution:
    """Outcome coset and branch probabilities, without touching the state."""
    a = _analyze(T, p)
    return TerminalDistribution(
        OutcomeCoset(a.kappa, a.eta), a.s, Fraction(1, a.s)
    )


def measure_pauli(
    T: StabilizerTableau,
    p: PauliVector,
    *,
    rng=None,
    fix: int | None = None,
):
    """Measure P = tau^{-2 phi} W_v; returns (post_tableau, record).

    `fix` pins the outcome (UnsupportedOutcomeError if its probability is 0);
    otherwise a random branch is drawn from `rng` (required when s > 1).
    """
    ring = T.ring
    d, D = ring.d, ring.D
    a = _analyze(T, p)
    coset = OutcomeCoset(a.kappa, a.eta)
    if fix is not None:
        if not coset.contains(fix % d, d):
            raise UnsupportedOutcomeError(
                f"outcome {fix} has probability 0 (coset {a.kappa} mod {a.eta})"
            )
        chosen = fix % d
    elif a.s == 1:
        chosen = a.kappa
    else:
        if rng is None:
            raise TableauContractError("random branch requested without an rng")
        chosen = (a.kappa + a.eta * rng.randrange(a.s)) % d
    if a.pivot is None:
        record = MeasurementRecord(
            chosen, coset, Fraction(1, a.s), PauliVector(0, (0,) * (2 * T.n), ring)
        )
        return T, record
    work = a.work
    byproduct = PauliVector(work.phase[a.pivot], work.col_vector(a.pivot), ring)
    work.scale(a.pivot, a.s)  # keep only the commuting power of the pivot
    work.adjoin((chosen + p.phi) % D, p.v)
    # the pivot power may now be redundant; drop it if the rest generate it
    pivot_op = PauliVector(work.phase[a.pivot], work.col_vector(a.pivot), ring)
    rest = _Work(work.to_tableau())
    rest.drop(a.pivot)
    if membership(rest.to_tableau(), pivot_op) is not None:
        work.drop(a.pivot)
    post = normalize_generators(work.to_tableau())
    record = MeasurementRecord(chosen, coset, Fraction(1, a.s), byproduct)
    return post, record


def measure_z(T: StabilizerTableau, r: int, *, rng=None, fix: int | None = None):
    """Standard-basis measurement of qudit r: P = W_{e_r} (a Z operator)."""
    if not 0 <= r < T.n:
        raise TableauContractError(f"qudit index {r} out of range")
    v = [0] * (2 * T.n)
    v[r] = 1
    return measure_pauli(T, PauliVector(0, tuple(v), T.ring), rng=rng, fix=fix)


def byproduct_shift(T: StabilizerTableau, record: MeasurementRecord, z: int):
    """Map a measured branch onto the branch with outcome shifted by z*eta.

    Conjugating the post-measurement state by the z-th power of the byproduct
    operator only shifts generator phases: phi_k -> phi_k - z [u, v_k].
    Returns (shifted_tableau, shifted_outcome).
    """
    u = record.byproduct.v
    D = T.ring.D
    form = SymplecticForm(T.n)
    phase = tuple(
        (T.phase_row[j] - z * symplectic_product(u, T.column_vector(j), form, D)) % D
        for j in range(T.ncols)
    )
    out = StabilizerTableau(T.ring, T.n, phase, T.weyl_block, T.xi)
    return out, (record.outcome + z * record.coset.eta) % T.ring.d


# ---------------------------------------------------------------------------
# Deferred measurement: coherent controlled-Pauli constructions.
# ---------------------------------------------------------------------------


def build_controlled_pauli_circuit(
    p: PauliVector, ctrl: int, targets
) -> list[GateSpec]:
    """Gates realizing sum_c |c><c| (x) P^c with P = tau^{-2 phi} W_v.

    Per target factor tau^{-ab} Z^a X^b: CX^b then CZ^a supply (Z^a X^b)^c,
    S^{-ab} on the control supplies tau^{-ab c^2}, and a Z^{-phi} on the
    control supplies the tau^{-2 phi c} prefactor.
    """
    ring = p.ring
    d, D = ring.d, ring.D
    m = len(targets)
    if len(p.v) != 2 * m:
        raise TableauContractError("Pauli vector length does not match targets")
    if ctrl in targets:
        raise TableauContractError("control must be distinct from targets")
    gates: list[GateSpec] = []
    if p.phi % D:
        gates.append(
            GateSpec("W", (ctrl,), zexp=((-p.phi) % D,), xexp=(0,))
        )
    for i, tgt in enumerate(targets):
        a = p.v[i] % D
        b = p.v[m + i] % D
        gates += [GateSpec("CX", (ctrl, tgt))] * (b % d)
        gates += [GateSpec("CZ", (ctrl, tgt))] * (a % d)
        gates += [GateSpec("S", (ctrl,))] * ((-a * b) % D)
    return gates


def build_deferred_measurement_circuit(p: PauliVector, ancilla: int, targets):
    """(gates, ancilla): F on the ancilla, controlled-P, F^{-1}, then a
    standard-basis measurement of the ancilla reproduces measuring P."""
    gates = [GateSpec("F", (ancilla,))]
    gates += build_controlled_pauli_circuit(p, ancilla, targets)
    gates += [GateSpec("Finv", (ancilla,))]
    return gates, ancilla
