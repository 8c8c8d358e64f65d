"""Phase-tracked Weyl operators: the qudit Pauli group as exact data.

A PhasedWeyl is tau^t W_v with t mod D and v in Z_D^{2n} (first n entries the
Z-part, last n the X-part). tau is never evaluated numerically here — only its
exponent is tracked; the oracle module owns the complex value.

Key exact identities used throughout (all arithmetic mod D):

    W_v W_w        = tau^[v,w] W_{v+w}
    W_v^m          = W_{mv}
    W_u W_v W_u^+  = tau^{2[u,v]} W_v
    W_{v+dx}       = (-1)^{(d+1)[v,x]} W_v       (proportionality mod d)
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .modmath import (
    DimensionMismatchError,
    RingParams,
    SymplecticForm,
    symplectic_product,
)


@dataclass(frozen=True)
class PhasedWeyl:
    """The operator tau^t W_v on n qudits."""

    t: int
    v: tuple[int, ...]
    ring: RingParams

    def __post_init__(self) -> None:
        if len(self.v) % 2:
            raise DimensionMismatchError("Weyl index vector must have even length")
        D = self.ring.D
        object.__setattr__(self, "t", self.t % D)
        object.__setattr__(self, "v", tuple(x % D for x in self.v))

    @property
    def n(self) -> int:
        return len(self.v) // 2

    def is_identity_vector(self) -> bool:
        return all(x == 0 for x in self.v) and self.t == 0


@dataclass(frozen=True)
class PauliVector:
    """A column (phi | v) denoting tau^{-2 phi} W_v — the tableau-facing view."""

    phi: int
    v: tuple[int, ...]
    ring: RingParams

    def __post_init__(self) -> None:
        D = self.ring.D
        object.__setattr__(self, "phi", self.phi % D)
        object.__setattr__(self, "v", tuple(x % D for x in self.v))

    @property
    def n(self) -> int:
        return len(self.v) // 2

    def to_phased(self) -> PhasedWeyl:
        return PhasedWeyl((-2 * self.phi) % self.ring.D, self.v, self.ring)


def identity_weyl(n: int, ring: RingParams) -> PhasedWeyl:
    return PhasedWeyl(0, (0,) * (2 * n), ring)


def _check_pair(p: PhasedWeyl, q: PhasedWeyl) -> None:
    if p.ring != q.ring or p.n != q.n:
        raise DimensionMismatchError("mismatched ring or qudit count")


def multiply(p: PhasedWeyl, q: PhasedWeyl) -> PhasedWeyl:
    """(tau^{t_p} W_{v_p})(tau^{t_q} W_{v_q}) = tau^{t_p+t_q+[v_p,v_q]} W_{v_p+v_q}."""
    _check_pair(p, q)
    D = p.ring.D
    form = SymplecticForm(p.n)
    t = p.t + q.t + symplectic_product(p.v, q.v, form, D)
    v = tuple((a + b) % D for a, b in zip(p.v, q.v))
    return PhasedWeyl(t % D, v, p.ring)


def power(p: PhasedWeyl, m: int) -> PhasedWeyl:
    """p^m = (m t, m v); negative m via W_v^+ = W_{-v}."""
    D = p.ring.D
    return PhasedWeyl((m * p.t) % D, tuple((m * x) % D for x in p.v), p.ring)


def inverse(p: PhasedWeyl) -> PhasedWeyl:
    return power(p, -1)


def commutes(v, w, ring: RingParams) -> bool:
    """W_v and W_w commute iff [v, w] = 0 mod d (mod d, not mod D)."""
    if len(v) != len(w):
        raise DimensionMismatchError("length mismatch")
    form = SymplecticForm(len(v) // 2)
    return symplectic_product(v, w, form, ring.d) == 0


def proportional_phase(w, v, ring: RingParams):
    """k with W_w = tau^{2k} W_v, or None when w != v mod d.

    For d odd the operators are equal outright (k = 0); for d even the sign
    is (-1)^{[v, x]} with x = (w - v)/d over the canonical lifts.
    """
    d, D = ring.d, ring.D
    if any((a - b) % d for a, b in zip(w, v)):
        return None
    if d % 2 == 1:
        return 0
    x = [((a - b) % D) // d for a, b in zip(w, v)]
    form = SymplecticForm(len(v) // 2)
    return (d // 2) * symplectic_product(v, x, form, 2) % d


def operator_eq(p: PhasedWeyl, q: PhasedWeyl) -> bool:
    """True iff p and q denote the same matrix (Weyl parts equal mod d and
    phases matching after the (-1)^{(d+1)[v,x]} proportionality factor)."""
    _check_pair(p, q)
    ring = p.ring
    k = proportional_phase(q.v, p.v, ring)
    if k is None:
        return False
    # q = tau^{t_q} W_{v_q} = tau^{t_q + 2k} W_{v_p}
    return (p.t - q.t - 2 * k) % ring.D == 0


def harmonic_number(v, d: int) -> int:
    """gcd(v_1, ..., v_{2n}, d); d for the zero vector."""
    g = d
    for x in v:
        g = gcd(g, x % d)
    return g


def operator_order(v, d: int) -> int:
    """Order of W_v as a unitary: d / harmonic_number(v)."""
    return d // harmonic_number(v, d)


def conjugate_by_weyl(u, p: PhasedWeyl) -> PhasedWeyl:
    """W_u p W_u^+ = tau^{t_p + 2[u, v_p]} W_{v_p}."""
    if len(u) != 2 * p.n:
        raise DimensionMismatchError("length mismatch")
    D = p.ring.D
    form = SymplecticForm(p.n)
    t = (p.t + 2 * symplectic_product(u, p.v, form, D)) % D
    return PhasedWeyl(t, p.v, p.ring)
