"""Exact arithmetic over Z_M for arbitrary (possibly composite) modulus M.

Everything the tableau layer needs from number theory lives here:

- ring parameters (d, D) with D = d for odd d and D = 2d for even d,
- the symplectic inner product mod D,
- gcd / modular-inverse helpers,
- Smith normal form over the integers (reduced mod M on request),
- linear-system solving mod M via the Smith form (Gaussian elimination over a
  field is not available when M is composite),
- kernel generators and image size of a matrix mod M.

All residues are stored as canonical representatives in {0, ..., M-1}; all
operations are pure functions over immutable values.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

# d is capped so that no product of two residues mod 2d leaves 64-bit range;
# in CPython ints are unbounded, the cap just keeps the contract explicit.
MAX_DIMENSION = 1 << 15


class InvalidDimensionError(ValueError):
    """Raised for qudit dimensions outside [2, MAX_DIMENSION]."""


class DimensionMismatchError(ValueError):
    """Raised when vector/matrix shapes disagree."""


@dataclass(frozen=True)
class RingParams:
    """The pair (d, D): qudit dimension and working modulus (order of tau)."""

    d: int
    D: int

    def __post_init__(self) -> None:
        if self.d < 2 or self.d > MAX_DIMENSION:
            raise InvalidDimensionError(f"dimension {self.d} out of range")
        expected = self.d if self.d % 2 == 1 else 2 * self.d
        if self.D != expected:
            raise InvalidDimensionError(f"D must be {expected} for d={self.d}")


def ring_params(d: int) -> RingParams:
    """Ring parameters for dimension d: D = d (d odd) or 2d (d even)."""
    if d < 2:
        raise InvalidDimensionError(f"dimension must be >= 2, got {d}")
    return RingParams(d, d if d % 2 == 1 else 2 * d)


@dataclass(frozen=True)
class SymplecticForm:
    """The standard symplectic form on Z^{2n}: [v,w] = v_z.w_x - v_x.w_z."""

    n: int


def symplectic_product(v, w, form: SymplecticForm, modulus: int) -> int:
    """v^T sigma_{2n} w mod `modulus`."""
    n = form.n
    if len(v) != 2 * n or len(w) != 2 * n:
        raise DimensionMismatchError(
            f"expected length {2 * n}, got {len(v)} and {len(w)}"
        )
    total = 0
    for i in range(n):
        total += v[i] * w[n + i] - v[n + i] * w[i]
    return total % modulus


def gcd_with(d: int, values) -> int:
    """gcd of d together with all values; d when every value is 0 mod d."""
    if d < 1:
        raise ValueError("d must be positive")
    g = d
    for x in values:
        g = gcd(g, x % d)
    return g


def mod_inverse(a: int, M: int):
    """Canonical inverse of a mod M, or None when gcd(a, M) != 1."""
    if M < 2:
        raise ValueError("modulus must be >= 2")
    a %= M
    if gcd(a, M) != 1:
        return None
    return pow(a, -1, M)


def unit_for_gcd(e: int, d: int) -> int:
    """A unit u mod d with u * e = gcd(e, d) (mod d); u = 1 for e = 0.

    Writing e = g*e' with g = gcd(e, d), any lift of e'^{-1} (mod d/g) that is
    coprime to d works; the smallest such lift is returned.
    """
    e %= d
    if e == 0:
        return 1
    g = gcd(e, d)
    q = d // g
    u = mod_inverse((e // g) % q, q)
    while gcd(u, d) != 1:
        u += q
    return u


# ---------------------------------------------------------------------------
# Smith normal form over the integers.
# ---------------------------------------------------------------------------


def _identity(k: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(k)] for i in range(k)]


def _row_op(A, i, j, q):
    """row_i -= q * row_j"""
    A[i] = [a - q * b for a, b in zip(A[i], A[j])]


def _col_op(A, i, j, q):
    """col_i -= q * col_j"""
    for row in A:
        row[i] -= q * row[j]


def _row_swap(A, i, j):
    A[i], A[j] = A[j], A[i]


def _col_swap(A, i, j):
    for row in A:
        row[i], row[j] = row[j], row[i]


def _find_pivot(S, t, m, n):
    """Leftmost-topmost entry of minimal magnitude in the trailing block."""
    best = None
    where = None
    for j in range(t, n):
        for i in range(t, m):
            a = abs(S[i][j])
            if a != 0 and (best is None or a < best):
                best = a
                where = (i, j)
    return where


def _snf_int(A):
    """Integer Smith normal form: returns (L, S, R) with L*A*R = S over Z.

    S is diagonal with nonnegative entries satisfying s_j | s_{j+1}; L and R
    are unimodular. Pivoting is deterministic: leftmost-topmost entry of
    minimal magnitude.
    """
    m = len(A)
    n = len(A[0])
    S = [list(row) for row in A]
    L = _identity(m)
    R = _identity(n)

    t = 0
    while t < min(m, n):
        where = _find_pivot(S, t, m, n)
        if where is None:
            break
        i0, j0 = where
        if i0 != t:
            _row_swap(S, t, i0)
            _row_swap(L, t, i0)
        if j0 != t:
            _col_swap(S, t, j0)
            _col_swap(R, t, j0)

        while True:
            # Clear column t below the pivot, promoting any remainder.
            dirty = False
            for i in range(t + 1, m):
                if S[i][t]:
                    q = S[i][t] // S[t][t]
                    _row_op(S, i, t, q)
                    _row_op(L, i, t, q)
                    if S[i][t]:
                        _row_swap(S, t, i)
                        _row_swap(L, t, i)
                        dirty = True
            for j in range(t + 1, n):
                if S[t][j]:
                    q = S[t][j] // S[t][t]
                    _col_op(S, j, t, q)
                    _col_op(R, j, t, q)
                    if S[t][j]:
                        _col_swap(S, t, j)
                        _col_swap(R, t, j)
                        dirty = True
            if dirty:
                continue
            if any(S[i][t] for i in range(t + 1, m)):
                continue
            if any(S[t][j] for j in range(t + 1, n)):
                continue
            # Divisibility chain: the pivot must divide the trailing block.
            viol = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if S[i][j] % S[t][t]:
                        viol = i
                        break
                if viol is not None:
                    break
            if viol is None:
                break
            _row_op(S, t, viol, -1)  # add the offending row into row t
            _row_op(L, t, viol, -1)

        if S[t][t] < 0:
            S[t] = [-x for x in S[t]]
            L[t] = [-x for x in L[t]]
        t += 1

    return L, S, R


def smith_normal_form(A, M: int | None = None):
    """Smith normal form of an integer matrix, reduced mod M when given.

    Returns (L, S, R) with L*A*R = S (over Z, hence also mod M); L, R are
    unimodular over Z and therefore invertible mod any M.
    """
    if not A or not A[0]:
        raise ValueError("matrix must be nonempty")
    L, S, R = _snf_int(A)
    if M is not None:
        L = [[x % M for x in row] for row in L]
        S = [[x % M for x in row] for row in S]
        R = [[x % M for x in row] for row in R]
    return L, S, R


def _diag(S, m, n):
    return [S[i][i] for i in range(min(m, n))]


def solve_linear(A, b, M: int):
    """One deterministic solution x of A x = b (mod M), or None.

    Works for composite M via the integer Smith form: with L A R = S the
    system becomes S y = L b, solved entry-wise on the diagonal.
    """
    m = len(A)
    if len(b) != m:
        raise DimensionMismatchError(f"{m} rows but {len(b)} rhs entries")
    n = len(A[0])
    L, S, R = _snf_int(A)
    c = [sum(L[i][k] * b[k] for k in range(m)) % M for i in range(m)]
    y = [0] * n
    for i in range(m):
        s = S[i][i] if i < min(m, n) else 0
        g = gcd(s, M)
        if c[i] % g:
            return None
        if g != M:
            Mg = M // g
            y[i] = (c[i] // g) * mod_inverse((s // g) % Mg, Mg) % Mg
    x = [sum(R[i][k] * y[k] for k in range(n)) % M for i in range(n)]
    return x


def kernel_mod(A, M: int):
    """Generators of the solution lattice {x in Z_M^n : A x = 0 (mod M)}."""
    m = len(A)
    n = len(A[0])
    _, S, R = _snf_int(A)
    gens = []
    for j in range(n):
        s = S[j][j] if j < min(m, n) else 0
        period = M // gcd(s, M)
        if period == M and s % M != 0:
            continue  # injective coordinate: only the zero multiple
        gen = [(R[i][j] * period) % M for i in range(n)]
        if any(gen):
            gens.append(gen)
    return gens


def image_size_mod(A, M: int) -> int:
    """Number of distinct values of A x mod M as x ranges over Z_M^n."""
    m = len(A)
    n = len(A[0])
    _, S, _ = _snf_int(A)
    size = 1
    for j in range(n):
        s = S[j][j] if j < min(m, n) else 0
        size *= M // gcd(s, M)
    return size
