"""Clifford-group conjugation tableaus and the standard gate set.

A unitary U in the Clifford group acts on Weyl operators by

    U W_{e_j} U^+ = tau^{-2 h_j} W_{C e_j}

with C a symplectic matrix mod D and h a phase vector mod D; (h | C) is the
conjugation tableau of U. Applying U to a stabilizer tableau is then a single
matrix product — phases fold through h, the Xi block is untouched.

Gate set (column vectors ordered z_1..z_n, x_1..x_n):

    S      phase gate            Z -> Z,          X -> tau^{-1} Z X
    F      Fourier transform     Z -> X^{-1},     X -> Z
    Finv   inverse Fourier
    M_a    multiplier (a unit)   Z -> Z^{a^{-1}}, X -> X^a
    CZ     controlled-Z          X(x)I -> X(x)Z,  I(x)X -> Z(x)X
    CX     controlled-X          Z(x)I -> Z(x)I,  I(x)Z -> Z^+(x)Z,
                                 X(x)I -> X(x)X,  I(x)X -> I(x)X
    SWAP
    W      phased Weyl operator  (conjugation: C = I, h_j = -[u, e_j])
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from .modmath import (
    DimensionMismatchError,
    RingParams,
    SymplecticForm,
    mod_inverse,
    symplectic_product,
    unit_for_gcd,
)
from .tableau import StabilizerTableau, TableauContractError, _lex_min_gf2, _sigma_functional
from .weyl import PhasedWeyl, proportional_phase


class NotLiftableError(ValueError):
    """A mod-d symplectic matrix with no symplectic lift mod D was given."""


@dataclass(frozen=True)
class ConjugationTableau:
    ring: RingParams
    n: int
    h: tuple[int, ...]  # length 2n
    C: tuple[tuple[int, ...], ...]  # 2n x 2n, symplectic mod D

    def __post_init__(self) -> None:
        D = self.ring.D
        object.__setattr__(self, "h", tuple(x % D for x in self.h))
        object.__setattr__(
            self, "C", tuple(tuple(x % D for x in row) for row in self.C)
        )
        if len(self.h) != 2 * self.n or len(self.C) != 2 * self.n:
            raise DimensionMismatchError("conjugation tableau must be 2n-sized")


def identity_conjugation(n: int, ring: RingParams) -> ConjugationTableau:
    C = tuple(
        tuple(1 if i == j else 0 for j in range(2 * n)) for i in range(2 * n)
    )
    return ConjugationTableau(ring, n, (0,) * (2 * n), C)


def is_symplectic(C, n: int, ring: RingParams) -> bool:
    """C^T sigma C = sigma (mod D)."""
    D = ring.D
    form = SymplecticForm(n)
    cols = [tuple(C[i][j] for i in range(2 * n)) for j in range(2 * n)]
    for a in range(2 * n):
        ea = [0] * (2 * n)
        ea[a] = 1
        for b in range(2 * n):
            eb = [0] * (2 * n)
            eb[b] = 1
            want = symplectic_product(ea, eb, form, D)
            if symplectic_product(cols[a], cols[b], form, D) != want:
                return False
    return True


def _mat_vec(C, v, D):
    return tuple(sum(C[i][k] * v[k] for k in range(len(v))) % D for i in range(len(C)))


def apply(U: ConjugationTableau, T: StabilizerTableau) -> StabilizerTableau:
    """The tableau of U |psi> given the tableau of |psi>."""
    if U.ring != T.ring or U.n != T.n:
        raise DimensionMismatchError("mismatched ring or qudit count")
    D = U.ring.D
    phase = tuple(
        (T.phase_row[j] + sum(U.h[k] * T.weyl_block[k][j] for k in range(2 * T.n))) % D
        for j in range(T.ncols)
    )
    block = tuple(
        tuple(
            sum(U.C[i][k] * T.weyl_block[k][j] for k in range(2 * T.n)) % D
            for j in range(T.ncols)
        )
        for i in range(2 * T.n)
    )
    return StabilizerTableau(T.ring, T.n, phase, block, T.xi)


def conjugate(U: ConjugationTableau, p: PhasedWeyl) -> PhasedWeyl:
    """U p U^+ for a phase-tracked Weyl operator."""
    if U.ring != p.ring or U.n != p.n:
        raise DimensionMismatchError("mismatched ring or qudit count")
    D = U.ring.D
    t = (p.t - 2 * sum(U.h[k] * p.v[k] for k in range(2 * p.n))) % D
    return PhasedWeyl(t, _mat_vec(U.C, p.v, D), p.ring)


def compose(outer: ConjugationTableau, inner: ConjugationTableau) -> ConjugationTableau:
    """Tableau of (outer . inner): inner acts first."""
    if outer.ring != inner.ring or outer.n != inner.n:
        raise DimensionMismatchError("mismatched ring or qudit count")
    D = outer.ring.D
    k2 = 2 * outer.n
    C = tuple(
        tuple(sum(outer.C[i][k] * inner.C[k][j] for k in range(k2)) % D for j in range(k2))
        for i in range(k2)
    )
    h = tuple(
        (inner.h[j] + sum(outer.h[k] * inner.C[k][j] for k in range(k2))) % D
        for j in range(k2)
    )
    return ConjugationTableau(outer.ring, outer.n, h, C)


def inverse(U: ConjugationTableau) -> ConjugationTableau:
    """C^{-1} = -sigma C^T sigma for symplectic C; h folds back through it."""
    D = U.ring.D
    n = U.n
    k2 = 2 * n

    # (-sigma C^T sigma)[i][j]
    def sig(i):  # sigma e_i
        return (i + n, 1) if i < n else (i - n, -1)

    Cinv = [[0] * k2 for _ in range(k2)]
    for i in range(k2):
        a, sa = sig(i)
        for j in range(k2):
            b, sb = sig(j)
            Cinv[i][j] = (sa * sb * U.C[b][a]) % D
    hinv = tuple(
        (-sum(U.h[k] * Cinv[k][j] for k in range(k2))) % D for j in range(k2)
    )
    return ConjugationTableau(U.ring, n, hinv, tuple(tuple(r) for r in Cinv))


# ---------------------------------------------------------------------------
# Gates.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GateSpec:
    """One circuit gate: kind in {S, F, Finv, M, CZ, CX, SWAP, W}.

    `targets` lists qudit indices (ctrl first for CX). M carries the unit
    multiplier `a`; W carries per-target Z/X exponents and an overall tau
    exponent `tphase` (which only matters to dense simulation — a global
    phase is invisible to conjugation).
    """

    kind: str
    targets: tuple[int, ...]
    a: int | None = None
    zexp: tuple[int, ...] = field(default=())
    xexp: tuple[int, ...] = field(default=())
    tphase: int = 0


def _embed_one(core, q: int, n: int) -> list[list[int]]:
    """2x2 core acting on (z_q, x_q), identity elsewhere."""
    C = [[1 if i == j else 0 for j in range(2 * n)] for i in range(2 * n)]
    idx = [q, n + q]
    for a in range(2):
        for b in range(2):
            C[idx[a]][idx[b]] = core[a][b]
    return C


def _embed_two(core, q1: int, q2: int, n: int) -> list[list[int]]:
    """4x4 core acting on (z_q1, z_q2, x_q1, x_q2)."""
    C = [[1 if i == j else 0 for j in range(2 * n)] for i in range(2 * n)]
    idx = [q1, q2, n + q1, n + q2]
    for a in range(4):
        for b in range(4):
            C[idx[a]][idx[b]] = core[a][b]
    return C


def weyl_gate_vector(gate: GateSpec, n: int, ring: RingParams) -> tuple[int, ...]:
    """The 2n Weyl index vector of a W gate."""
    u = [0] * (2 * n)
    for q, a, b in zip(gate.targets, gate.zexp, gate.xexp):
        u[q] = a % ring.D
        u[n + q] = b % ring.D
    return tuple(u)


def gate_tableau(gate: GateSpec, n: int, ring: RingParams) -> ConjugationTableau:
    D = ring.D
    kind = gate.kind
    if any(not 0 <= q < n for q in gate.targets):
        raise TableauContractError(f"gate target out of range for n={n}")
    if kind in ("S", "F", "Finv", "M"):
        (q,) = gate.targets
        if kind == "S":
            core = [[1, 1], [0, 1]]
        elif kind == "F":
            core = [[0, 1], [-1, 0]]
        elif kind == "Finv":
            core = [[0, -1], [1, 0]]
        else:
            a = gate.a % ring.d
            if gcd(a, ring.d) != 1:
                raise TableauContractError(f"multiplier {gate.a} is not a unit mod {ring.d}")
            # units mod even d are odd, so the canonical lift is a unit mod D
            core = [[mod_inverse(a, D), 0], [0, a]]
        C = _embed_one(core, q, n)
        return ConjugationTableau(ring, n, (0,) * (2 * n), tuple(tuple(r) for r in C))
    if kind in ("CZ", "CX", "SWAP"):
        q1, q2 = gate.targets
        if q1 == q2:
            raise TableauContractError("two-qudit gate needs distinct targets")
        if kind == "CZ":
            core = [[1, 0, 0, 1], [0, 1, 1, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
        elif kind == "CX":
            core = [[1, -1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 1, 1]]
        else:
            core = [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]
        C = _embed_two(core, q1, q2, n)
        return ConjugationTableau(ring, n, (0,) * (2 * n), tuple(tuple(r) for r in C))
    if kind == "W":
        u = weyl_gate_vector(gate, n, ring)
        form = SymplecticForm(n)
        h = []
        for j in range(2 * n):
            e = [0] * (2 * n)
            e[j] = 1
            h.append((-symplectic_product(u, e, form, D)) % D)
        return ConjugationTableau(ring, n, tuple(h), identity_conjugation(n, ring).C)
    raise TableauContractError(f"unknown gate kind {kind!r}")


def circuit_conjugation(gates, n: int, ring: RingParams) -> ConjugationTableau:
    """Tableau of a gate list applied in program order (first gate first)."""
    U = identity_conjugation(n, ring)
    for g in gates:
        U = compose(gate_tableau(g, n, ring), U)
    return U


# ---------------------------------------------------------------------------
# Symplectic lifting mod d -> mod D.
# ---------------------------------------------------------------------------


def lift_symplectic(C, n: int, ring: RingParams):
    """A symplectic-mod-D matrix congruent to C mod d.

    d odd: D = d, so C itself must already be symplectic. d even: columns are
    lifted one at a time by d * (mod-2 correction); each correction is the
    lexicographically least solution of the induced GF(2) system. Raises
    NotLiftableError when some system is infeasible.
    """
    d, D = ring.d, ring.D
    if d % 2 == 1:
        Cm = tuple(tuple(x % d for x in row) for row in C)
        if not is_symplectic(Cm, n, ring):
            raise NotLiftableError("matrix is not symplectic mod d")
        return Cm
    form = SymplecticForm(n)
    cols = [[C[i][j] % D for i in range(2 * n)] for j in range(2 * n)]

    def sigma_target(a: int, b: int) -> int:
        ea = [0] * (2 * n)
        ea[a] = 1
        eb = [0] * (2 * n)
        eb[b] = 1
        return symplectic_product(ea, eb, form, D)

    lifted: list[tuple[int, ...]] = []
    for j in range(2 * n):
        rows = []
        rhs = []
        for h, cb in enumerate(lifted):
            val = symplectic_product(cb, cols[j], form, D)
            want = sigma_target(h, j)
            if (val - want) % d:
                raise NotLiftableError("matrix is not symplectic mod d")
            rows.append(_sigma_functional(cb, n, 2))
            rhs.append((((want - val) % D) // d) % 2)
        x = _lex_min_gf2(rows, rhs) if rows else [0] * (2 * n)
        if x is None:
            raise NotLiftableError(f"no symplectic lift for column {j}")
        lifted.append(tuple((cols[j][i] + d * x[i]) % D for i in range(2 * n)))
    out = tuple(tuple(lifted[j][i] for j in range(2 * n)) for i in range(2 * n))
    assert is_symplectic(out, n, ring)
    return out


# ---------------------------------------------------------------------------
# Reduction of an arbitrary Weyl operator to a power of Z_1.
# ---------------------------------------------------------------------------


def _lower_triangular_gates(q: int, m: int, D: int) -> list[GateSpec]:
    """Gates realizing (z, x) -> (z, x - m z) on qudit q: F S^m F^{-1}."""
    return (
        [GateSpec("Finv", (q,))]
        + [GateSpec("S", (q,))] * (m % D)
        + [GateSpec("F", (q,))]
    )


def reduce_weyl_to_z(v, ring: RingParams):
    """(U, 0, k, gates): a Clifford with U W_v U^+ = tau^{2k} W_{eta e_1}.

    eta = gcd(v, d) is the harmonic number; the reduction lands the whole
    vector on the Z part of qudit 0 mod d (an exact mod-D landing does not
    always exist), with the leftover proportionality sign recorded in k.
    `gates` realizes U in program order.
    """
    n = len(v) // 2
    d, D = ring.d, ring.D
    gates: list[GateSpec] = []
    U = identity_conjugation(n, ring)
    w = [x % D for x in v]

    def emit(new_gates):
        nonlocal U, w
        for g in new_gates:
            gates.append(g)
            G = gate_tableau(g, n, ring)
            U = compose(G, U)
            w = list(_mat_vec(G.C, w, D))

    for q in range(n):
        while True:
            z = w[q] % d
            x = w[n + q] % d
            if x == 0:
                break
            if z == 0:
                emit([GateSpec("F", (q,))])  # (z, x) -> (x, -z)
                continue
            if z >= x:
                emit([GateSpec("S", (q,))] * ((-(z // x)) % D))
            else:
                emit(_lower_triangular_gates(q, x // z, D))
    for q in range(1, n):
        while w[q] % d:
            z0 = w[0] % d
            zq = w[q] % d
            if z0 == 0:
                emit([GateSpec("SWAP", (0, q))])
                continue
            if z0 <= zq:
                emit([GateSpec("CX", (q, 0))] * (zq // z0))  # z_q -= m z_0
            else:
                emit([GateSpec("CX", (0, q))] * (z0 // zq))  # z_0 -= m z_q
    g = w[0] % d
    eta = gcd(g, d)
    if g and g != eta:
        u = unit_for_gcd(g, d)  # u g = eta (mod d); scale z_0 by u
        a = mod_inverse(u, d)  # M_a sends Z -> Z^{a^{-1}} = Z^u
        emit([GateSpec("M", (0,), a=a)])
    target = [0] * (2 * n)
    target[0] = eta % D
    k = proportional_phase(tuple(w), tuple(target), ring)
    assert k is not None
    return U, 0, k, gates
