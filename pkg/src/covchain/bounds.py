"""Controls, the size/length bound tables, and thinness tests.

For a control ``(g, n0)`` and dimension ``d`` the tables are

    N_0 = n0,   N_{i+1} = g^(L_i + 1)(n0)
    L_0 = 0,    L_{i+1} = L_i + prod_{1<=j<=i+1} (d - j + 1) * (N_j + 1)

All arithmetic is on Python ints; the tables leave 64-bit range already for
d = 3.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Tuple

from .ideals import OMEGA, DimensionError, OmegaVec

# General (non-affine) controls are iterated one application at a time.
MAX_GENERAL_ITERATIONS = 10**6


@dataclass(frozen=True)
class Control:
    """A monotone expansive control function together with an initial size.

    Either ``step`` is given and ``g(x) = x + step``, or ``func`` is an
    arbitrary monotone expansive function on the naturals.
    """

    n0: int
    step: Optional[int] = None
    func: Optional[Callable[[int], int]] = field(default=None, compare=False)
    _memo: list = field(default_factory=list, compare=False, repr=False)

    def __post_init__(self):
        if self.n0 < 0:
            raise ValueError("initial size must be >= 0")
        if (self.step is None) == (self.func is None):
            raise ValueError("give exactly one of step or func")
        if self.step is not None and self.step < 0:
            raise ValueError("affine control step must be >= 0")

    @classmethod
    def affine(cls, step: int, n0: int) -> "Control":
        return cls(n0=n0, step=step)

    @property
    def is_affine(self) -> bool:
        return self.step is not None

    def g(self, x: int) -> int:
        return x + self.step if self.is_affine else self.func(x)

    def iterate(self, k: int) -> int:
        """``g^k(n0)``."""
        if k < 0:
            raise ValueError("iteration count must be >= 0")
        if self.is_affine:
            return self.n0 + k * self.step
        if k > MAX_GENERAL_ITERATIONS:
            raise OverflowError(f"refusing to iterate a general control {k} times")
        memo = self._memo
        if not memo:
            memo.append(self.n0)
        while len(memo) <= k:
            memo.append(self.func(memo[-1]))
        return memo[k]

    def spot_check(self, points: Sequence[int] = tuple(range(64))) -> bool:
        """Monotone and expansive on ``points`` (exact for affine controls)."""
        if self.is_affine:
            return True
        pts = sorted(points)
        vals = [self.func(x) for x in pts]
        return all(x <= v for x, v in zip(pts, vals)) and all(
            a <= b for a, b in zip(vals, vals[1:])
        )


def control_iterate(c: Control, k: int) -> int:
    return c.iterate(k)


@dataclass(frozen=True)
class BoundTable:
    d: int
    N: Tuple[int, ...]
    L: Tuple[int, ...]

    def __post_init__(self):
        if len(self.N) != self.d + 1 or len(self.L) != self.d + 1:
            raise ValueError("tables must have d + 1 entries")

    def to_json(self) -> dict:
        return {"d": self.d, "N": [str(x) for x in self.N], "L": [str(x) for x in self.L]}

    @classmethod
    def from_json(cls, obj: dict) -> "BoundTable":
        return cls(int(obj["d"]), tuple(int(x) for x in obj["N"]), tuple(int(x) for x in obj["L"]))


def _next_length(d: int, N: Sequence[int], L_prev: int, i: int) -> int:
    # L_{i+1} from N_1..N_{i+1}
    prod = 1
    for j in range(1, i + 2):
        prod *= (d - j + 1) * (N[j] + 1)
    return L_prev + prod


def build_bound_table(c: Control, d: int) -> BoundTable:
    if d < 0:
        raise ValueError("dimension must be >= 0")
    N = [c.n0]
    L = [0]
    for i in range(d):
        N.append(c.iterate(L[i] + 1))
        L.append(_next_length(d, N, L[i], i))
    if c.is_affine and c.step == c.n0:
        n = c.n0
        for i in range(d):
            assert N[i + 1] == n * (L[i] + 2), (i, N, L)
    return BoundTable(d, tuple(N), tuple(L))


def table_from_sizes(sizes: Sequence[int], n0: int = 0) -> BoundTable:
    """Table with prescribed ``N_1..N_d`` (no control behind it).

    The lengths still follow the ``L`` recurrence over the given sizes.
    """
    d = len(sizes)
    N = [n0, *[int(x) for x in sizes]]
    L = [0]
    for i in range(d):
        L.append(_next_length(d, N, L[i], i))
    return BoundTable(d, tuple(N), tuple(L))


def is_thin(I: OmegaVec, t: BoundTable) -> bool:
    """Some bijection from the finite components of ``I`` onto ``1..fdim I``
    puts every component below its ``N``.

    Since ``N`` is non-decreasing, matching sorted components to
    ``N_1 <= N_2 <= ...`` is optimal.
    """
    if len(I) != t.d:
        raise DimensionError(f"ideal of length {len(I)} against a table for d={t.d}")
    fin = sorted(c for c in I if c is not OMEGA)
    return all(v <= t.N[j] for j, v in enumerate(fin, start=1))


def is_nearly_thin(v: Sequence[int], t: BoundTable) -> bool:
    if len(v) != t.d:
        raise DimensionError(f"vector of length {len(v)} against a table for d={t.d}")
    return all(x <= t.N[j] + 1 for j, x in enumerate(sorted(v), start=1))


def thin_ideal_count_bound(t: BoundTable) -> int:
    return 1 + t.L[t.d]


def filter_count_bound(t: BoundTable) -> int:
    out = math.factorial(t.d)
    for i in range(1, t.d + 1):
        out *= t.N[i] + 2
    return out


def length_bound(t: BoundTable) -> int:
    """Upper bound ``L_d + 1`` on the length of a controlled strongly
    monotone descending chain."""
    return t.L[t.d] + 1


def lg_exponent_bound(n: int, d: int, i: int, rounding: str = "ceil") -> int:
    """``n ** (3**i * (lg d + 1))`` with ``lg d`` rounded to an integer.

    ``rounding="floor"`` gives a value below the real-exponent bound, so a
    check against it is the stronger one.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    lg = (d - 1).bit_length() if rounding == "ceil" else d.bit_length() - 1
    return n ** (3**i * (lg + 1))


def thin_ideals(t: BoundTable):
    """Enumerate every thin ideal of N^d for the table ``t``."""
    d = t.d
    for omegas in itertools.product((False, True), repeat=d):
        fin = [i for i in range(d) if not omegas[i]]
        f = len(fin)
        for vals in itertools.product(range(t.N[f] + 1) if f else [()], repeat=f):
            if f and not all(v <= t.N[j] for j, v in enumerate(sorted(vals), start=1)):
                continue
            I = [OMEGA] * d
            for i, v in zip(fin, vals):
                I[i] = v
            yield tuple(I)
