"""Stabilizer tableaus: phase row + Weyl block (+ optional phase-correction
block Xi for extended tableaus), everything mod D.

Column j denotes the generator tau^{-2 phi_j} W_{v_j}. A tableau is *proper*
when its Weyl columns are pairwise symplectically orthogonal mod D (not just
mod d); groups without proper tableaus (e.g. {Z^2, X^2} at d=4) are handled in
extended form, where Xi carries the cross-phase data needed to recombine
columns linearly:

    2 Xi[h][j] = [v_h, v_j]  (mod D),   Xi antisymmetric, zero diagonal.

All public operations are pure: they return new tableaus.
"""

from __future__ import annotations

from dataclasses import dataclass

from .modmath import (
    RingParams,
    SymplecticForm,
    image_size_mod,
    kernel_mod,
    mod_inverse,
    solve_linear,
    symplectic_product,
)
from .weyl import PauliVector, PhasedWeyl, identity_weyl, multiply, operator_eq, power


class TableauContractError(ValueError):
    """A tableau operation was called outside its contract."""


class IllegalGroupError(ValueError):
    """The column set generates lambda*I for some scalar lambda != 1."""


def _half_phase(val: int, ring: RingParams) -> int:
    """Canonical x with 2x = val (mod D); val must be 0 mod d."""
    d, D = ring.d, ring.D
    val %= D
    if d % 2 == 1:
        return (val * mod_inverse(2, d)) % d
    if val == 0:
        return 0
    if val == d:
        return d // 2
    raise TableauContractError(f"no half-phase for {val} mod {D}")


@dataclass(frozen=True)
class StabilizerTableau:
    """Immutable tableau; `xi is not None` marks the extended form."""

    ring: RingParams
    n: int
    phase_row: tuple[int, ...]
    weyl_block: tuple[tuple[int, ...], ...]  # 2n rows, ncols columns
    xi: tuple[tuple[int, ...], ...] | None = None

    def __post_init__(self) -> None:
        D = self.ring.D
        object.__setattr__(self, "phase_row", tuple(x % D for x in self.phase_row))
        object.__setattr__(
            self,
            "weyl_block",
            tuple(tuple(x % D for x in row) for row in self.weyl_block),
        )
        if self.xi is not None:
            object.__setattr__(
                self, "xi", tuple(tuple(x % D for x in row) for row in self.xi)
            )
        if len(self.weyl_block) != 2 * self.n:
            raise TableauContractError("Weyl block must have 2n rows")

    @property
    def ncols(self) -> int:
        return len(self.phase_row)

    @property
    def is_extended(self) -> bool:
        return self.xi is not None

    def column_vector(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.weyl_block)

    def column(self, j: int) -> PauliVector:
        return PauliVector(self.phase_row[j], self.column_vector(j), self.ring)

    def column_operator(self, j: int) -> PhasedWeyl:
        return self.column(j).to_phased()

    def columns(self) -> list[PauliVector]:
        return [self.column(j) for j in range(self.ncols)]

    def to_extended(self) -> "StabilizerTableau":
        """Attach a Xi block (computed from scratch) if not already present."""
        if self.xi is not None:
            return self
        ell = self.ncols
        form = SymplecticForm(self.n)
        xi = [[0] * ell for _ in range(ell)]
        for h in range(ell):
            vh = self.column_vector(h)
            for j in range(h + 1, ell):
                val = symplectic_product(vh, self.column_vector(j), form, self.ring.D)
                half = _half_phase(val, self.ring)
                xi[h][j] = half
                xi[j][h] = (-half) % self.ring.D
        return StabilizerTableau(
            self.ring, self.n, self.phase_row, self.weyl_block,
            tuple(tuple(r) for r in xi),
        )

    def to_json_dict(self) -> dict:
        out = {
            "n": self.n,
            "d": self.ring.d,
            "D": self.ring.D,
            "phase_row": list(self.phase_row),
            "weyl_block": [list(row) for row in self.weyl_block],
        }
        if self.xi is not None:
            out["xi"] = [list(row) for row in self.xi]
        return out


def standard_basis_tableau(q, ring: RingParams) -> StabilizerTableau:
    """Proper tableau of |q_1 ... q_n>: phase row q, Z-block I, X-block 0."""
    n = len(q)
    if any(not 0 <= x < ring.d for x in q):
        raise TableauContractError(f"basis labels must lie in [0, {ring.d})")
    block = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    block += [[0] * n for _ in range(n)]
    return StabilizerTableau(ring, n, tuple(q), tuple(tuple(r) for r in block))


def is_proper(T: StabilizerTableau) -> bool:
    form = SymplecticForm(T.n)
    for h in range(T.ncols):
        vh = T.column_vector(h)
        for j in range(h + 1, T.ncols):
            if symplectic_product(vh, T.column_vector(j), form, T.ring.D) != 0:
                return False
    return True


# ---------------------------------------------------------------------------
# Mutable workspace: all column surgery happens here, exactly once.
# ---------------------------------------------------------------------------


class _Work:
    """Mutable extended tableau with exact Xi bookkeeping."""

    def __init__(self, T: StabilizerTableau):
        E = T.to_extended()
        self.ring = E.ring
        self.n = E.n
        self.phase = list(E.phase_row)
        self.W = [list(row) for row in E.weyl_block]
        self.xi = [list(row) for row in E.xi]

    @property
    def ncols(self) -> int:
        return len(self.phase)

    def col_vector(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.W)

    def combine(self, h: int, j: int, m: int) -> None:
        """S_j := S_h^m S_j with exact phase corrections (closed form)."""
        if h == j:
            raise TableauContractError("combine requires distinct columns")
        D = self.ring.D
        self.phase[j] = (self.phase[j] + m * (self.phase[h] + self.xi[h][j])) % D
        for row in self.W:
            row[j] = (row[j] + m * row[h]) % D
        ell = self.ncols
        newcol = [(self.xi[k][j] + m * self.xi[k][h]) % D for k in range(ell)]
        newrow = [(self.xi[j][k] + m * self.xi[h][k]) % D for k in range(ell)]
        for k in range(ell):
            self.xi[k][j] = newcol[k]
        self.xi[j] = newrow
        self.xi[j][j] = 0

    def scale(self, j: int, alpha: int) -> None:
        """Column j (phase + Weyl) and Xi row/column j scaled by alpha."""
        D = self.ring.D
        self.phase[j] = (self.phase[j] * alpha) % D
        for row in self.W:
            row[j] = (row[j] * alpha) % D
        for k in range(self.ncols):
            self.xi[k][j] = (self.xi[k][j] * alpha) % D
            self.xi[j][k] = (self.xi[j][k] * alpha) % D
        self.xi[j][j] = 0

    def swap(self, i: int, j: int) -> None:
        self.phase[i], self.phase[j] = self.phase[j], self.phase[i]
        for row in self.W:
            row[i], row[j] = row[j], row[i]
        self.xi[i], self.xi[j] = self.xi[j], self.xi[i]
        for row in self.xi:
            row[i], row[j] = row[j], row[i]

    def reduce_coeff(self, h: int, j: int) -> None:
        """Subtract d from Weyl entry (h, j), fixing phase and Xi exactly."""
        ring = self.ring
        d, D = ring.d, ring.D
        form = SymplecticForm(self.n)
        e_h = [0] * (2 * self.n)
        e_h[h] = 1
        vj = self.col_vector(j)
        self.W[h][j] = (self.W[h][j] - d) % D
        sp = symplectic_product(vj, e_h, form, D)
        self.phase[j] = (self.phase[j] - (d // 2) * sp) % D
        for k in range(self.ncols):
            if k == j:
                continue
            delta = (d // 2) * symplectic_product(e_h, self.col_vector(k), form, D)
            self.xi[j][k] = (self.xi[j][k] - delta) % D
            self.xi[k][j] = (self.xi[k][j] + delta) % D

    def adjoin(self, phi: int, v) -> int:
        """Append a column; its Xi entries are computed from first principles."""
        ring = self.ring
        D = ring.D
        form = SymplecticForm(self.n)
        v = [x % D for x in v]
        new_row = []
        for k in range(self.ncols):
            val = symplectic_product(self.col_vector(k), v, form, D)
            half = _half_phase(val, ring)
            self.xi[k].append(half)
            new_row.append((-half) % D)
        new_row.append(0)
        self.xi.append(new_row)
        self.phase.append(phi % D)
        for i, row in enumerate(self.W):
            row.append(v[i])
        return self.ncols - 1

    def drop(self, j: int) -> None:
        del self.phase[j]
        for row in self.W:
            del row[j]
        del self.xi[j]
        for row in self.xi:
            del row[j]

    def to_tableau(self) -> StabilizerTableau:
        return StabilizerTableau(
            self.ring,
            self.n,
            tuple(self.phase),
            tuple(tuple(row) for row in self.W),
            tuple(tuple(row) for row in self.xi),
        )


# ---------------------------------------------------------------------------
# Public column operations.
# ---------------------------------------------------------------------------


def _check_indices(T: StabilizerTableau, *idx: int) -> None:
    for j in idx:
        if not 0 <= j < T.ncols:
            raise TableauContractError(f"column index {j} out of range")


def column_combine(T: StabilizerTableau, h: int, j: int, m: int) -> StabilizerTableau:
    """Replace generator S_j by S_h^m S_j."""
    _check_indices(T, h, j)
    if h == j:
        raise TableauContractError("h and j must differ")
    if not T.is_extended:
        if not is_proper(T):
            raise TableauContractError(
                "column_combine needs an extended or proper tableau"
            )
        D = T.ring.D
        phase = list(T.phase_row)
        phase[j] = (phase[j] + m * phase[h]) % D
        block = [list(row) for row in T.weyl_block]
        for row in block:
            row[j] = (row[j] + m * row[h]) % D
        return StabilizerTableau(T.ring, T.n, tuple(phase), tuple(tuple(r) for r in block))
    work = _Work(T)
    work.combine(h, j, m)
    return work.to_tableau()


def column_scale(T: StabilizerTableau, j: int, alpha: int) -> StabilizerTableau:
    _check_indices(T, j)
    from math import gcd

    if gcd(alpha, T.ring.D) != 1:
        raise TableauContractError(f"{alpha} is not a unit mod {T.ring.D}")
    if not T.is_extended:
        D = T.ring.D
        phase = list(T.phase_row)
        phase[j] = (phase[j] * alpha) % D
        block = [list(row) for row in T.weyl_block]
        for row in block:
            row[j] = (row[j] * alpha) % D
        return StabilizerTableau(T.ring, T.n, tuple(phase), tuple(tuple(r) for r in block))
    work = _Work(T)
    work.scale(j, alpha)
    return work.to_tableau()


def reduce_coefficient_mod_d(T: StabilizerTableau, h: int, j: int) -> StabilizerTableau:
    if T.ring.d % 2:
        raise TableauContractError("mod-d reduction is a d-even operation")
    if not T.is_extended:
        raise TableauContractError("mod-d reduction needs an extended tableau")
    _check_indices(T, j)
    if not 0 <= h < 2 * T.n:
        raise TableauContractError(f"Weyl row {h} out of range")
    if T.weyl_block[h][j] < T.ring.d:
        return T  # nothing to reduce
    work = _Work(T)
    work.reduce_coeff(h, j)
    return work.to_tableau()


# ---------------------------------------------------------------------------
# Validation, membership, normalization.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    code: str | None = None
    detail: str | None = None


def _kernel_scalar_violation(T: StabilizerTableau):
    """A kernel combination whose product is a nontrivial scalar, or None.

    The exponent vectors m with W m = 0 (mod d) form a lattice on which the
    product's scalar is a homomorphism, so checking lattice generators
    suffices.
    """
    d = T.ring.d
    Wmodd = [[x % d for x in row] for row in T.weyl_block]
    ident = identity_weyl(T.n, T.ring)
    for m in kernel_mod(Wmodd, d):
        prod = ident
        for j, mj in enumerate(m):
            if mj:
                prod = multiply(prod, power(T.column_operator(j), mj))
        if not operator_eq(prod, ident):
            return m
    return None


def validate(T: StabilizerTableau) -> ValidationReport:
    form = SymplecticForm(T.n)
    d, D = T.ring.d, T.ring.D
    for h in range(T.ncols):
        vh = T.column_vector(h)
        for j in range(h + 1, T.ncols):
            if symplectic_product(vh, T.column_vector(j), form, d) != 0:
                return ValidationReport(False, "non-commuting", f"columns {h},{j}")
    if T.xi is not None:
        for h in range(T.ncols):
            for j in range(T.ncols):
                if (T.xi[h][j] + T.xi[j][h]) % D:
                    return ValidationReport(False, "xi-asymmetric", f"entries {h},{j}")
                vh = T.column_vector(h)
                want = symplectic_product(vh, T.column_vector(j), form, D)
                if (2 * T.xi[h][j] - want) % D:
                    return ValidationReport(False, "xi-inconsistent", f"entries {h},{j}")
    m = _kernel_scalar_violation(T)
    if m is not None:
        return ValidationReport(False, "illegal-scalar", f"combination {m}")
    return ValidationReport(True)


def clear_phase(T: StabilizerTableau, v):
    """(t, witness) with tau^{-2t} W_v in the group, or None.

    Works for proper and extended tableaus alike: adjoins the d*e_h identity
    columns (d even), then W_{-v}, solves the Weyl system mod D, and replays
    the solution as column combines so Xi does the exact phase accounting.
    `witness` gives the combination over the real columns.
    """
    ring = T.ring
    d, D = ring.d, ring.D
    ell = T.ncols
    for j in range(ell):
        vj = T.column_vector(j)
        if symplectic_product(vj, v, SymplecticForm(T.n), d) != 0:
            return None
    work = _Work(T)
    if d % 2 == 0:
        for h in range(2 * T.n):
            e = [0] * (2 * T.n)
            e[h] = d
            work.adjoin(0, e)  # W_{d e_h} = +I exactly
    c = work.adjoin(0, [(-x) % D for x in v])
    A = [row[:c] for row in work.W]
    rhs = [x % D for x in v]
    m = solve_linear(A, rhs, D)
    if m is None:
        return None
    for i in range(c):
        if m[i]:
            work.combine(i, c, m[i])
    if any(row[c] % D for row in work.W):  # pragma: no cover - algebra guarantee
        raise IllegalGroupError("clearing failed to cancel the Weyl part")
    return work.phase[c] % D, [m[i] % d for i in range(ell)]


def membership(T: StabilizerTableau, target: PauliVector):
    """Witness coefficients when the group contains tau^{-2 phi} W_v, else None."""
    res = clear_phase(T, target.v)
    if res is None:
        return None
    t, witness = res
    if (target.phi - t) % T.ring.d:
        return None
    return witness


def _euclid_columns(work: _Work, row: int, i: int, j: int) -> None:
    """Invertible column ops leaving gcd (mod d) at column i, 0 at column j."""
    d = work.ring.d
    while work.W[row][j] % d:
        a = work.W[row][i] % d
        b = work.W[row][j] % d
        if a == 0:
            work.swap(i, j)
            continue
        if a <= b:
            work.combine(i, j, -(b // a))
        else:
            work.combine(j, i, -(a // b))


def normalize_generators(T: StabilizerTableau, pad: bool = False) -> StabilizerTableau:
    """Same group, at most 2n columns (gcd column-echelon elimination mod d).

    Columns whose Weyl part vanishes mod d must denote the identity exactly;
    anything else (e.g. -I) is an illegal group and raises.
    """
    work = _Work(T)
    d = work.ring.d
    n2 = 2 * work.n
    p = 0
    for r in range(n2):
        cols = [c for c in range(p, work.ncols) if work.W[r][c] % d]
        if not cols:
            continue
        pivot = cols[0]
        for c in cols[1:]:
            _euclid_columns(work, r, pivot, c)
        if work.W[r][pivot] % d == 0:
            continue  # gcd migrated away entirely (cannot happen, but be safe)
        if pivot != p:
            work.swap(pivot, p)
        p += 1
    ident = identity_weyl(work.n, work.ring)
    for c in range(work.ncols - 1, p - 1, -1):
        op = PauliVector(work.phase[c], work.col_vector(c), work.ring).to_phased()
        if not operator_eq(op, ident):
            raise IllegalGroupError(
                f"column {c} denotes a nontrivial scalar multiple of I"
            )
        work.drop(c)
    if pad:
        while work.ncols < n2:
            work.adjoin(0, [0] * n2)
    return work.to_tableau()


# ---------------------------------------------------------------------------
# Properization (d even) via the mod-2 congruence systems.
# ---------------------------------------------------------------------------


def _gf2_feasible(A, b) -> bool:
    if not A or not A[0]:
        return all(x % 2 == 0 for x in b)
    return solve_linear(A, b, 2) is not None


def _lex_min_gf2(A, b):
    """Lexicographically least solution of A x = b (mod 2), or None."""
    if not _gf2_feasible(A, b):
        return None
    ncols = len(A[0]) if A else 0
    cur_a = [list(row) for row in A]
    cur_b = list(b)
    x = []
    for _ in range(ncols):
        rest = [row[1:] for row in cur_a]
        b0 = cur_b
        b1 = [(bv - row[0]) % 2 for bv, row in zip(cur_b, cur_a)]
        if _gf2_feasible(rest, b0):
            x.append(0)
            cur_b = b0
        else:
            x.append(1)
            cur_b = b1
        cur_a = rest
    return x


def _sigma_functional(w, n: int, modulus: int):
    """Row vector r with r . x = [w, x] (mod modulus)."""
    r = [0] * (2 * n)
    for i in range(n):
        r[n + i] = w[i] % modulus
        r[i] = (-w[n + i]) % modulus
    return r


def make_proper(T: StabilizerTableau):
    """A proper tableau denoting the same operators, or None when impossible.

    d odd: every tableau is proper already (returned without Xi). d even:
    column-by-column lift v_j -> v_j + d x_j, with x_j the lexicographically
    least mod-2 solution making the new column symplectically orthogonal
    (mod D) to all previous lifted columns while leaving its operator fixed.
    """
    ring = T.ring
    d, D = ring.d, ring.D
    n = T.n
    if d % 2 == 1:
        return StabilizerTableau(ring, n, T.phase_row, T.weyl_block)
    Wmod2 = [[x % 2 for x in row] for row in T.weyl_block]
    if kernel_mod(Wmod2, 2):
        return None  # columns dependent mod 2: no proper tableau exists
    form = SymplecticForm(n)
    lifted: list[tuple[int, ...]] = []
    for j in range(T.ncols):
        vj = T.column_vector(j)
        rows = [_sigma_functional(vj, n, 2)]
        rhs = [0]
        for vb in lifted:
            val = symplectic_product(vb, vj, form, D)
            if val % d:
                return None  # columns do not even commute mod d
            rows.append(_sigma_functional(vb, n, 2))
            rhs.append((val // d) % 2)
        x = _lex_min_gf2(rows, rhs)
        if x is None:
            return None
        lifted.append(tuple((vj[i] + d * x[i]) % D for i in range(2 * n)))
    block = tuple(
        tuple(lifted[j][i] for j in range(T.ncols)) for i in range(2 * n)
    )
    out = StabilizerTableau(ring, n, T.phase_row, block)
    assert is_proper(out)
    return out


def group_order(T: StabilizerTableau) -> int:
    """|G|, the number of distinct group elements, phases included.

    For a legal group, elements are in bijection with the Weyl-block column
    span mod d; legality itself is certified on the kernel lattice.
    """
    m = _kernel_scalar_violation(T)
    if m is not None:
        raise IllegalGroupError(f"combination {m} yields a nontrivial scalar")
    d = T.ring.d
    Wmodd = [[x % d for x in row] for row in T.weyl_block]
    return image_size_mod(Wmodd, d)
