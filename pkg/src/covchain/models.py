"""Vector addition systems and affine nets over N^d.

An affine transition ``(a, M, b)`` maps ``u`` to ``M (u - a) + b`` whenever
``u - a`` is non-negative.  A VAS action ``c`` in Z^d is the special case
``(max(-c, 0), I, max(c, 0))``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence, Tuple, Union

from .ideals import (
    OMEGA,
    DimensionError,
    NatVec,
    OmegaVec,
    upset_minimize,
    vec_leq,
    vec_norm,
)

Matrix = Tuple[Tuple[int, ...], ...]


def identity(d: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(d)) for i in range(d))


@dataclass(frozen=True)
class Vas:
    dim: int
    actions: Tuple[Tuple[int, ...], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "actions", tuple(tuple(int(c) for c in a) for a in self.actions))
        if self.dim < 1:
            raise ValueError("dimension must be positive")
        for a in self.actions:
            if len(a) != self.dim:
                raise DimensionError(f"action {a} has length {len(a)}, expected {self.dim}")

    @property
    def norm(self) -> int:
        return max((vec_norm(a) for a in self.actions), default=0)


@dataclass(frozen=True)
class AffineTransition:
    a: NatVec
    M: Matrix
    b: NatVec

    def __post_init__(self):
        a = tuple(int(c) for c in self.a)
        b = tuple(int(c) for c in self.b)
        M = tuple(tuple(int(c) for c in row) for row in self.M)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "M", M)
        d = len(a)
        if len(b) != d or len(M) != d or any(len(row) != d for row in M):
            raise DimensionError(
                f"inconsistent transition shapes: |a|={d}, |b|={len(b)}, "
                f"A is {len(M)}x{len(M[0]) if M else 0}"
            )
        if any(c < 0 for c in a + b) or any(c < 0 for row in M for c in row):
            raise ValueError("affine transitions need non-negative a, A and b")

    @property
    def dim(self) -> int:
        return len(self.a)

    def is_identity(self) -> bool:
        return self.M == identity(self.dim)


@dataclass(frozen=True)
class AffineNet:
    dim: int
    transitions: Tuple[AffineTransition, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "transitions", tuple(self.transitions))
        if self.dim < 1:
            raise ValueError("dimension must be positive")
        for t in self.transitions:
            if t.dim != self.dim:
                raise DimensionError(f"transition of dimension {t.dim} in a {self.dim}-dimensional net")

    @property
    def norm(self) -> int:
        # A and b deliberately do not count
        return max((max(t.a, default=0) for t in self.transitions), default=0)


Model = Union[Vas, AffineNet]


@dataclass(frozen=True)
class NetClass:
    is_vas: bool
    is_reset: bool
    is_transfer: bool
    is_strongly_increasing: bool
    is_invertible: bool
    determinants: Tuple[int, ...] = field(default=(), compare=False)


def vas_to_affine(vas: Vas) -> AffineNet:
    eye = identity(vas.dim)
    return AffineNet(
        vas.dim,
        tuple(
            AffineTransition(tuple(max(-c, 0) for c in a), eye, tuple(max(c, 0) for c in a))
            for a in vas.actions
        ),
    )


def affine_to_vas(net: AffineNet) -> Vas:
    if not all(t.is_identity() for t in net.transitions):
        raise ValueError("only nets with identity matrices are VAS")
    return Vas(net.dim, tuple(tuple(bi - ai for ai, bi in zip(t.a, t.b)) for t in net.transitions))


def as_affine(model: Model) -> AffineNet:
    return vas_to_affine(model) if isinstance(model, Vas) else model


def determinant(M: Sequence[Sequence[int]]) -> int:
    """Exact integer determinant by Bareiss fraction-free elimination."""
    A = [list(row) for row in M]
    n = len(A)
    if any(len(row) != n for row in A):
        raise DimensionError("determinant of a non-square matrix")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for r in range(k + 1, n):
                if A[r][k] != 0:
                    A[k], A[r] = A[r], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def classify(net: Model) -> NetClass:
    net = as_affine(net)
    d = net.dim
    eye = identity(d)
    Ms = [t.M for t in net.transitions]
    dets = tuple(determinant(M) for M in Ms)

    def all_entries(pred):
        return all(pred(M[i][j], eye[i][j]) for M in Ms for i in range(d) for j in range(d))

    return NetClass(
        is_vas=all(M == eye for M in Ms),
        is_reset=all_entries(lambda m, e: m <= e),
        is_transfer=all(sum(M[i][j] for i in range(d)) == 1 for M in Ms for j in range(d)),
        is_strongly_increasing=all_entries(lambda m, e: m >= e),
        is_invertible=all(det != 0 for det in dets),
        determinants=dets,
    )


def _check_config(net: AffineNet, u: Sequence, what: str = "configuration") -> None:
    if len(u) != net.dim:
        raise DimensionError(f"{what} of length {len(u)} for a {net.dim}-dimensional net")


def apply_transition(t: AffineTransition, u: NatVec) -> NatVec | None:
    """``M (u - a) + b``, or None when the guard ``u >= a`` fails."""
    if len(u) != t.dim:
        raise DimensionError(f"configuration of length {len(u)} for a {t.dim}-dimensional transition")
    x = [ui - ai for ui, ai in zip(u, t.a)]
    if any(c < 0 for c in x):
        return None
    return tuple(sum(m * xj for m, xj in zip(row, x)) + bi for row, bi in zip(t.M, t.b))


def forward_step(net: Model, u: NatVec, t: AffineTransition) -> NatVec | None:
    net = as_affine(net)
    _check_config(net, u)
    return apply_transition(t, u)


def successors(net: Model, u: NatVec) -> list:
    net = as_affine(net)
    _check_config(net, u)
    out = []
    for t in net.transitions:
        w = apply_transition(t, u)
        if w is not None:
            out.append(w)
    return out


def vas_pre_min(action: Sequence[int], v: NatVec) -> NatVec:
    """Least ``u`` in N^d with ``u + action >= v``."""
    if len(action) != len(v):
        raise DimensionError("action and vector of different lengths")
    return tuple(max(vi - ai, 0) for ai, vi in zip(action, v))


def _row_minimal_solutions(row: Sequence[int], y: int) -> list:
    """Minimal ``x`` in N^d with ``sum(row[j] * x[j]) >= y``."""
    d = len(row)
    if y <= 0:
        return [(0,) * d]
    cols = [j for j in range(d) if row[j] > 0]
    if not cols:
        return []
    out = []
    x = [0] * d

    def rec(k: int, remaining: int) -> None:
        if remaining <= 0:
            # minimal iff dropping one unit anywhere breaks the inequality
            if all(x[j] == 0 or remaining + row[j] > 0 for j in cols):
                out.append(tuple(x))
            return
        if k == len(cols):
            return
        j = cols[k]
        top = -(-remaining // row[j])
        for val in range(top + 1):
            x[j] = val
            rec(k + 1, remaining - row[j] * val)
        x[j] = 0

    rec(0, y)
    return out


def affine_pre_min(t: AffineTransition, v: NatVec) -> frozenset:
    """Minimal basis of the configurations that cover ``v`` in one step of ``t``.

    Solves ``M x >= y`` with ``y = max(v - b, 0)`` row by row and joins the
    per-row minimal solutions; the result is ``{x + a}`` over the minimal ``x``.
    """
    d = t.dim
    if len(v) != d:
        raise DimensionError("transition and vector of different lengths")
    y = [max(vi - bi, 0) for vi, bi in zip(v, t.b)]
    if t.is_identity():
        return frozenset([tuple(yi + ai for yi, ai in zip(y, t.a))])
    partial = {(0,) * d}
    for i in sorted(range(d), key=lambda i: -y[i]):
        sols = _row_minimal_solutions(t.M[i], y[i])
        if not sols:
            return frozenset()
        nxt = set()
        for p in partial:
            for s in sols:
                nxt.add(tuple(max(a, b) for a, b in zip(p, s)))
        partial = upset_minimize(nxt, d).basis
    return frozenset(tuple(xi + ai for xi, ai in zip(x, t.a)) for x in partial)


def affine_pre_min_bruteforce(t: AffineTransition, v: NatVec) -> frozenset:
    """Box enumeration over ``{0..||y||}^d``; reference for :func:`affine_pre_min`."""
    d = t.dim
    y = [max(vi - bi, 0) for vi, bi in zip(v, t.b)]
    bound = max(y, default=0)
    sols = []
    for x in itertools.product(range(bound + 1), repeat=d):
        if all(sum(m * xj for m, xj in zip(row, x)) >= yi for row, yi in zip(t.M, y)):
            sols.append(x)
    if not sols:
        return frozenset()
    return frozenset(tuple(xi + ai for xi, ai in zip(x, t.a)) for x in upset_minimize(sols, d).basis)


def pre_min(net: Model, v: NatVec) -> frozenset:
    """Minimal basis of Pre_exists of the filter generated by ``v``."""
    net = as_affine(net)
    _check_config(net, v, "vector")
    cands = set()
    for t in net.transitions:
        cands |= affine_pre_min(t, v)
    if not cands:
        return frozenset()
    return upset_minimize(cands, net.dim).basis


def _omega_mul(m: int, x) -> object:
    if x is OMEGA:
        return OMEGA if m > 0 else 0
    return m * x


def _omega_add(x, y):
    return OMEGA if x is OMEGA or y is OMEGA else x + y


def post_ideal(t: AffineTransition, I: OmegaVec) -> OmegaVec | None:
    """Image ``M (I - a) + b`` of an ideal under omega arithmetic.

    Uses ``0 * w = 0`` and ``k * w = w`` for ``k >= 1``.  None when ``I``
    does not dominate the guard ``a``.
    """
    if len(I) != t.dim:
        raise DimensionError("transition and ideal of different lengths")
    if not vec_leq(t.a, I):
        return None
    x = [c if c is OMEGA else c - a for c, a in zip(I, t.a)]
    out = []
    for row, bi in zip(t.M, t.b):
        acc = bi
        for m, xj in zip(row, x):
            acc = _omega_add(acc, _omega_mul(m, xj))
        out.append(acc)
    return tuple(out)


def post_ideals(net: Model, I: OmegaVec) -> list:
    net = as_affine(net)
    return [J for J in (post_ideal(t, I) for t in net.transitions) if J is not None]

