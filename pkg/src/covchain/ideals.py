"""Ideals, filters, and downward/upward-closed subsets of N^d.

Vectors are plain tuples.  A configuration (``NatVec``) holds non-negative
Python ints; an order ideal (``OmegaVec``) may additionally hold the
sentinel :data:`OMEGA`, which is greater than every integer.  A downward
closed set is kept as the antichain of its maximal ideals (its canonical
decomposition) and an upward closed set as the antichain of its minimal
elements.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple, Union


@functools.total_ordering
class _Omega:
    """The top element adjoined to the naturals."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "w"

    def __reduce__(self):
        return "OMEGA"

    def __hash__(self) -> int:
        return hash("covchain.OMEGA")

    def __eq__(self, other) -> bool:
        return other is self

    def __lt__(self, other) -> bool:
        if other is self or isinstance(other, int):
            return False
        return NotImplemented

    def __gt__(self, other) -> bool:
        if other is self:
            return False
        if isinstance(other, int):
            return True
        return NotImplemented


OMEGA = _Omega()

OmegaNat = Union[int, _Omega]
OmegaVec = Tuple[OmegaNat, ...]
NatVec = Tuple[int, ...]


class DimensionError(ValueError):
    """Raised when vectors or sets of different dimensions are combined."""


def _check_dim(d1: int, d2: int, what: str = "vectors") -> None:
    if d1 != d2:
        raise DimensionError(f"dimension mismatch between {what}: {d1} != {d2}")


def is_omega(x) -> bool:
    return x is OMEGA


def ideal(*comps) -> OmegaVec:
    """Build an ideal vector; the strings ``"w"`` and ``"ω"`` denote omega."""
    out = []
    for c in comps:
        if c is OMEGA or c in ("w", "ω"):
            out.append(OMEGA)
        else:
            c = int(c)
            if c < 0:
                raise ValueError(f"ideal components must be >= 0, got {c}")
            out.append(c)
    return tuple(out)


def natvec(*comps) -> NatVec:
    out = tuple(int(c) for c in comps)
    if any(c < 0 for c in out):
        raise ValueError(f"configuration components must be >= 0, got {out}")
    return out


def unit(d: int, i: int, scale: int = 1) -> NatVec:
    """``scale * e_i`` in dimension ``d`` (0-based ``i``)."""
    return tuple(scale if j == i else 0 for j in range(d))


def omega_set(I: OmegaVec) -> frozenset:
    return frozenset(i for i, c in enumerate(I) if c is OMEGA)


def fin_set(I: OmegaVec) -> frozenset:
    return frozenset(i for i, c in enumerate(I) if c is not OMEGA)


def ideal_dim(I: OmegaVec) -> int:
    """Number of omega components."""
    return sum(1 for c in I if c is OMEGA)


def ideal_fdim(I: OmegaVec) -> int:
    return len(I) - ideal_dim(I)


def ideal_norm(I: OmegaVec) -> int:
    return max((c for c in I if c is not OMEGA), default=0)


def vec_norm(v: Sequence[int]) -> int:
    return max((abs(c) for c in v), default=0)


def vec_leq(u: Sequence, v: Sequence) -> bool:
    """Componentwise order, valid for both configurations and ideals."""
    _check_dim(len(u), len(v))
    return all(a <= b for a, b in zip(u, v))


def vec_join(u: Sequence[int], v: Sequence[int]) -> NatVec:
    _check_dim(len(u), len(v))
    return tuple(a if a >= b else b for a, b in zip(u, v))


def ideal_leq(I: OmegaVec, J: OmegaVec) -> bool:
    """Inclusion of ideals, i.e. componentwise order with omega on top."""
    return vec_leq(I, J)


def ideal_meet(I: OmegaVec, J: OmegaVec) -> OmegaVec:
    _check_dim(len(I), len(J), "ideals")
    return tuple(a if a <= b else b for a, b in zip(I, J))


def _ideal_rank(I: OmegaVec):
    # Strict inclusion strictly increases this key, so scanning candidates in
    # decreasing key order only needs to compare against already kept ones.
    return (ideal_dim(I), sum(c for c in I if c is not OMEGA))


def _lex_key(v):
    return tuple((1, 0) if c is OMEGA else (0, c) for c in v)


@dataclass(frozen=True)
class DownSet:
    """Downward-closed subset of N^d given by its canonical decomposition.

    Build instances with :func:`downset_canonicalize` unless the ideals are
    known to form an antichain already.
    """

    dim: int
    ideals: frozenset

    def __post_init__(self):
        for I in self.ideals:
            _check_dim(self.dim, len(I), "downset and ideal")

    def __iter__(self):
        return iter(self.sorted())

    def __len__(self) -> int:
        return len(self.ideals)

    def sorted(self) -> list:
        return sorted(self.ideals, key=_lex_key)

    @property
    def norm(self) -> int:
        return max((ideal_norm(I) for I in self.ideals), default=0)

    def is_empty(self) -> bool:
        return not self.ideals

    def is_antichain(self) -> bool:
        ids = list(self.ideals)
        return not any(
            i != j and ideal_leq(ids[i], ids[j])
            for i in range(len(ids))
            for j in range(len(ids))
        )

    def issubset(self, other: "DownSet") -> bool:
        _check_dim(self.dim, other.dim, "downsets")
        return all(any(ideal_leq(I, J) for J in other.ideals) for I in self.ideals)

    def __repr__(self) -> str:
        return "{" + ", ".join(format_vec(I) for I in self.sorted()) + "}"

    @classmethod
    def full(cls, d: int) -> "DownSet":
        return cls(d, frozenset([(OMEGA,) * d]))

    @classmethod
    def empty(cls, d: int) -> "DownSet":
        return cls(d, frozenset())


@dataclass(frozen=True)
class UpSet:
    """Upward-closed subset of N^d given by its minimal basis."""

    dim: int
    basis: frozenset

    def __post_init__(self):
        for v in self.basis:
            _check_dim(self.dim, len(v), "upset and vector")

    def __iter__(self):
        return iter(self.sorted())

    def __len__(self) -> int:
        return len(self.basis)

    def sorted(self) -> list:
        return sorted(self.basis)

    @property
    def norm(self) -> int:
        return max((max(v, default=0) for v in self.basis), default=0)

    def is_antichain(self) -> bool:
        bs = list(self.basis)
        return not any(
            i != j and vec_leq(bs[i], bs[j])
            for i in range(len(bs))
            for j in range(len(bs))
        )

    def __repr__(self) -> str:
        return "{" + ", ".join(format_vec(v) for v in self.sorted()) + "}"

    @classmethod
    def full(cls, d: int) -> "UpSet":
        return cls(d, frozenset([(0,) * d]))

    @classmethod
    def empty(cls, d: int) -> "UpSet":
        return cls(d, frozenset())


def format_vec(v: Sequence) -> str:
    return "(" + ",".join(repr(c) if c is OMEGA else str(c) for c in v) + ")"


def downset_canonicalize(ideals: Iterable[OmegaVec], dim: int | None = None) -> DownSet:
    """Keep only the maximal ideals of ``ideals``."""
    cands = set(ideals)
    if dim is None:
        if not cands:
            raise ValueError("dimension required for an empty ideal list")
        dim = len(next(iter(cands)))
    for I in cands:
        _check_dim(dim, len(I), "ideals")
    kept: list = []
    for I in sorted(cands, key=_ideal_rank, reverse=True):
        if not any(ideal_leq(I, J) for J in kept):
            kept.append(I)
    return DownSet(dim, frozenset(kept))


def upset_minimize(vectors: Iterable[NatVec], dim: int | None = None) -> UpSet:
    """Keep only the minimal vectors of ``vectors``."""
    cands = set(vectors)
    if dim is None:
        if not cands:
            raise ValueError("dimension required for an empty vector list")
        dim = len(next(iter(cands)))
    for v in cands:
        _check_dim(dim, len(v), "vectors")
    kept: list = []
    for v in sorted(cands, key=sum):
        if not any(vec_leq(w, v) for w in kept):
            kept.append(v)
    return UpSet(dim, frozenset(kept))


def downset_intersect(D1: DownSet, D2: DownSet) -> DownSet:
    _check_dim(D1.dim, D2.dim, "downsets")
    return downset_canonicalize(
        (ideal_meet(I, J) for I in D1.ideals for J in D2.ideals), D1.dim
    )


def downset_union(D1: DownSet, D2: DownSet) -> DownSet:
    _check_dim(D1.dim, D2.dim, "downsets")
    return downset_canonicalize(D1.ideals | D2.ideals, D1.dim)


def downset_contains(D: DownSet, v: Sequence) -> bool:
    """Membership of a configuration (or inclusion of an ideal) in ``D``."""
    _check_dim(D.dim, len(v), "downset and vector")
    return any(vec_leq(v, I) for I in D.ideals)


def upset_contains(U: UpSet, v: Sequence) -> bool:
    _check_dim(U.dim, len(v), "upset and vector")
    return any(vec_leq(b, v) for b in U.basis)


def upset_union(U1: UpSet, U2: UpSet) -> UpSet:
    _check_dim(U1.dim, U2.dim, "upsets")
    return upset_minimize(U1.basis | U2.basis, U1.dim)


def ideal_complement(I: OmegaVec) -> UpSet:
    d = len(I)
    return UpSet(d, frozenset(unit(d, i, I[i] + 1) for i in sorted(fin_set(I))))


def complement_candidate(ideals: Sequence[OmegaVec], choice: Sequence[int]) -> NatVec:
    """Join of ``(I_j(i_j)+1) * e_{i_j}`` over ``j``, for the chosen finite
    components ``choice[j]`` (0-based) of each ideal.

    Every minimal vector outside ``ideals`` has this form for some choice.
    """
    if len(ideals) != len(choice):
        raise ValueError("one component choice per ideal is required")
    if not ideals:
        raise ValueError("empty ideal list")
    d = len(ideals[0])
    v = [0] * d
    for I, i in zip(ideals, choice):
        if I[i] is OMEGA:
            raise ValueError(f"component {i} of {format_vec(I)} is not finite")
        v[i] = max(v[i], I[i] + 1)
    return tuple(v)


def downset_complement(D: DownSet) -> UpSet:
    """Minimal basis of N^d minus D.

    Intersects the per-ideal complements one ideal at a time, keeping the
    partial joins minimized so the full product of choices is never built.
    """
    d = D.dim
    partial = {(0,) * d}
    for I in sorted(D.ideals, key=_lex_key):
        fin = sorted(fin_set(I))
        if not fin:
            return UpSet.empty(d)
        nxt = set()
        for v in partial:
            if any(v[i] > I[i] for i in fin):
                # already outside I
                nxt.add(v)
                continue
            for i in fin:
                w = list(v)
                w[i] = I[i] + 1
                nxt.add(tuple(w))
        partial = upset_minimize(nxt, d).basis
    return UpSet(d, frozenset(partial))


def upset_complement(U: UpSet) -> DownSet:
    """Canonical decomposition of N^d minus the upward closure of ``U``."""
    d = U.dim
    current = {(OMEGA,) * d}
    for b in sorted(U.basis):
        pieces = [i for i in range(d) if b[i] >= 1]
        if not pieces:
            return DownSet.empty(d)
        nxt = set()
        for I in current:
            if not vec_leq(b, I):
                # I already misses the filter generated by b
                nxt.add(I)
                continue
            for i in pieces:
                J = list(I)
                J[i] = b[i] - 1
                nxt.add(tuple(J))
        current = downset_canonicalize(nxt, d).ideals
    return DownSet(d, frozenset(current))
