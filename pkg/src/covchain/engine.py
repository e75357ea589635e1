"""Backward coverability, in the classical (upward) and dual (downward) views.

The classical view grows ``U_0 = up(t)``, ``U_{k+1} = U_k | Pre(U_k)`` until
it stabilizes.  The dual view shrinks ``D_0 = N^d - up(t)``,
``D_{k+1} = D_k & PreForall(D_k)`` with ``PreForall(S) = N^d - Pre(N^d - S)``.
Both record the whole chain so that the structural monitors (control,
monotonicity, thinness, length) can be run on it afterwards.
"""

from __future__ import annotations

import functools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

from .bounds import (
    BoundTable,
    Control,
    build_bound_table,
    is_nearly_thin,
    is_thin,
    length_bound,
    thin_ideals,
)
from .ideals import (
    DimensionError,
    DownSet,
    NatVec,
    UpSet,
    downset_canonicalize,
    downset_complement,
    downset_contains,
    downset_intersect,
    ideal_dim,
    ideal_fdim,
    omega_set,
    upset_complement,
    upset_contains,
    upset_minimize,
    vec_leq,
    vec_norm,
)
from .models import AffineNet, Model, apply_transition, as_affine, post_ideals, pre_min

DEFAULT_MAX_ITERATIONS = 10**5
DEFAULT_MAX_SIZE = 10**6


class ResourceLimitExceeded(RuntimeError):
    """A run gave up before stabilizing; this is not a verdict."""

    def __init__(self, kind: str, limit: int, step: int):
        super().__init__(f"{kind} limit {limit} exceeded at step {step}")
        self.kind = kind
        self.limit = limit
        self.step = step


class WitnessLiftingError(RuntimeError):
    pass


@dataclass(frozen=True)
class ChainStep:
    index: int
    upset: UpSet
    downset: DownSet
    seconds: float = 0.0


@dataclass(frozen=True)
class ChainRecord:
    """Snapshots ``(U_k, D_k)`` for ``k = 0..length``, the last one stable."""

    view: str
    steps: tuple
    model: Optional[Model] = None
    target: Optional[NatVec] = None

    @property
    def length(self) -> int:
        """Number of strict steps of the chain."""
        return len(self.steps) - 1

    @property
    def confirming_iterations(self) -> int:
        # the stabilization check is one more iteration than the strict steps
        return len(self.steps)

    @functools.cached_property
    def proper(self) -> tuple:
        return tuple(
            proper_ideals(self.steps[k].downset, self.steps[k + 1].downset)
            for k in range(self.length)
        )

    @property
    def downsets(self) -> list:
        return [s.downset for s in self.steps]

    @property
    def upsets(self) -> list:
        return [s.upset for s in self.steps]

    @property
    def norms(self) -> list:
        return [s.downset.norm for s in self.steps]

    @property
    def final(self) -> ChainStep:
        return self.steps[-1]

    @property
    def net(self) -> AffineNet:
        if self.model is None:
            raise ValueError("synthetic chain has no model")
        return as_affine(self.model)


def chain_from_downsets(downsets: Sequence[DownSet], view: str = "synthetic") -> ChainRecord:
    """Wrap a hand-made descending chain so the monitors can inspect it."""
    return ChainRecord(
        view,
        tuple(ChainStep(k, downset_complement(D), D) for k, D in enumerate(downsets)),
    )


@dataclass(frozen=True)
class Verdict:
    """``coverable`` is None when no source configuration was given."""

    coverable: Optional[bool]
    iterations: int
    pseudo_witness: Optional[tuple] = None
    concrete_execution: Optional[tuple] = None


@dataclass(frozen=True)
class MonitorReport:
    length: int
    length_bound: int
    controlled: bool
    control_violation_step: Optional[int]
    omega_monotone: bool
    strongly_monotone: bool
    monotonicity_violation_step: Optional[int]
    all_ideals_thin: bool
    basis_nearly_thin: bool
    length_bound_ok: bool
    proper_steps_ok: bool
    thinness_violation: Optional[tuple] = None

    @property
    def all_ok(self) -> bool:
        return (
            self.controlled
            and self.strongly_monotone
            and self.all_ideals_thin
            and self.basis_nearly_thin
            and self.length_bound_ok
            and self.proper_steps_ok
        )

    def to_dict(self) -> dict:
        out = {k: getattr(self, k) for k in self.__dataclass_fields__}
        out["length_bound"] = str(self.length_bound)
        if self.thinness_violation is not None:
            kind, step, vec = self.thinness_violation
            out["thinness_violation"] = {"kind": kind, "step": step, "vector": repr(vec)}
        return out


@dataclass(frozen=True)
class ThinnessReport:
    all_ideals_thin: bool
    basis_nearly_thin: bool
    length_bound_ok: bool
    proper_steps_ok: bool
    first_violation: Optional[tuple] = None  # (kind, step, vector)


# -- Pre computations ---------------------------------------------------------


def _pre_of_vectors(net: AffineNet, vectors) -> set:
    out = set()
    for v in vectors:
        out |= pre_min(net, v)
    return out


def _pre_basis(net: AffineNet, vectors, jobs: int = 1, pool=None) -> set:
    vectors = sorted(vectors)
    if jobs <= 1 or pool is None or len(vectors) < 2 * jobs:
        return _pre_of_vectors(net, vectors)
    chunks = [vectors[i::jobs] for i in range(jobs)]
    out = set()
    for part in pool.map(_pre_of_vectors, [net] * jobs, chunks):
        out |= part
    return out


def _check_inputs(net: AffineNet, t: NatVec, s: Optional[NatVec]) -> None:
    if len(t) != net.dim:
        raise DimensionError(f"target of length {len(t)} for a {net.dim}-dimensional model")
    if s is not None and len(s) != net.dim:
        raise DimensionError(f"source of length {len(s)} for a {net.dim}-dimensional model")
    if any(c < 0 for c in t) or (s is not None and any(c < 0 for c in s)):
        raise ValueError("configurations must be non-negative")


class _Pool:
    def __init__(self, jobs: int):
        self.jobs = jobs
        self.pool = ProcessPoolExecutor(max_workers=jobs) if jobs > 1 else None

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        if self.pool is not None:
            self.pool.shutdown()


def _check_size(n: int, max_size: int, step: int) -> None:
    if n > max_size:
        raise ResourceLimitExceeded("antichain size", max_size, step)


def backward_classical(
    model: Model,
    t: NatVec,
    s: Optional[NatVec] = None,
    *,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
    max_size: int = DEFAULT_MAX_SIZE,
    jobs: int = 1,
) -> tuple:
    """Upward fixpoint on minimal bases.  Returns ``(ChainRecord, Verdict)``."""
    net = as_affine(model)
    t = tuple(t)
    _check_inputs(net, t, s)
    d = net.dim
    t0 = time.perf_counter()
    U = UpSet(d, frozenset([t]))
    steps = [ChainStep(0, U, upset_complement(U), time.perf_counter() - t0)]
    frontier = set(U.basis)
    with _Pool(jobs) as p:
        k = 0
        while True:
            if k >= max_iterations:
                raise ResourceLimitExceeded("iteration", max_iterations, k)
            t0 = time.perf_counter()
            # Pre of older basis elements is already inside U
            new = _pre_basis(net, frontier, p.jobs, p.pool)
            U_next = upset_minimize(U.basis | new, d)
            _check_size(len(U_next), max_size, k + 1)
            if U_next == U:
                break
            frontier = U_next.basis - U.basis
            U = U_next
            k += 1
            steps.append(ChainStep(k, U, upset_complement(U), time.perf_counter() - t0))
    chain = ChainRecord("classical", tuple(steps), model, t)
    return chain, _verdict(chain, s)


def pre_forall(net: AffineNet, D: DownSet, jobs: int = 1, pool=None) -> DownSet:
    """``N^d - Pre(N^d - D)`` by double complementation."""
    U = downset_complement(D)
    P = _pre_basis(net, U.basis, jobs, pool)
    return upset_complement(upset_minimize(P, D.dim))


def backward_dual(
    model: Model,
    t: NatVec,
    s: Optional[NatVec] = None,
    *,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
    max_size: int = DEFAULT_MAX_SIZE,
    jobs: int = 1,
) -> tuple:
    """Downward fixpoint on canonical decompositions."""
    net = as_affine(model)
    t = tuple(t)
    _check_inputs(net, t, s)
    d = net.dim
    t0 = time.perf_counter()
    D = upset_complement(UpSet(d, frozenset([t])))
    steps = [ChainStep(0, downset_complement(D), D, time.perf_counter() - t0)]
    with _Pool(jobs) as p:
        k = 0
        while True:
            if k >= max_iterations:
                raise ResourceLimitExceeded("iteration", max_iterations, k)
            t0 = time.perf_counter()
            D_next = downset_intersect(D, pre_forall(net, D, p.jobs, p.pool))
            _check_size(len(D_next), max_size, k + 1)
            if D_next == D:
                break
            D = D_next
            k += 1
            U = downset_complement(D)
            _check_size(len(U), max_size, k)
            steps.append(ChainStep(k, U, D, time.perf_counter() - t0))
    chain = ChainRecord("dual", tuple(steps), model, t)
    return chain, _verdict(chain, s)


def dual_step_by_thin_enumeration(model: Model, D: DownSet, table: BoundTable) -> DownSet:
    """One dual step computed by enumerating thin ideals.

    Keeps the maximal thin ``I`` with ``I`` inside ``D`` and every image
    ``M (I - a) + b`` inside ``D``.  Agrees with the complement-based step
    whenever all ideals of the result are thin, which holds along chains
    controlled by the control the table comes from.
    """
    net = as_affine(model)
    keep = [
        I
        for I in thin_ideals(table)
        if downset_contains(D, I) and all(downset_contains(D, J) for J in post_ideals(net, I))
    ]
    return downset_canonicalize(keep, D.dim)


def _verdict(chain: ChainRecord, s: Optional[NatVec]) -> Verdict:
    if s is None:
        return Verdict(None, chain.length)
    s = tuple(s)
    if chain.view == "dual":
        coverable = not downset_contains(chain.final.downset, s)
    else:
        coverable = upset_contains(chain.final.upset, s)
    if not coverable:
        return Verdict(False, chain.length)
    witness = extract_pseudo_witness(chain, s)
    execution = replay_pseudo_witness(chain.model, witness, s)
    return Verdict(True, chain.length, tuple(witness), tuple(execution))


def default_control(model: Model, t: NatVec) -> Control:
    """``g(x) = x + ||model||`` and ``n0 = ||t||``."""
    return Control.affine(model.norm, vec_norm(t))


# -- monitors ------------------------------------------------------------------


def proper_ideals(Dk: DownSet, Dk1: DownSet) -> frozenset:
    """Ideals of ``Dk``'s decomposition missing from ``Dk1``'s."""
    if not Dk1.issubset(Dk):
        raise ValueError(f"{Dk1!r} is not included in {Dk!r}")
    return Dk.ideals - Dk1.ideals


def _monotonicity_violations(chain: ChainRecord) -> tuple:
    first_omega = first_strong = None
    proper = chain.proper
    for k in range(len(proper) - 1):
        for I in proper[k + 1]:
            if first_omega is None and not any(omega_set(I) <= omega_set(J) for J in proper[k]):
                first_omega = k + 1
            if first_strong is None and not any(ideal_dim(I) <= ideal_dim(J) for J in proper[k]):
                first_strong = k + 1
    return first_omega, first_strong


def check_monotonicity(chain: ChainRecord) -> tuple:
    """``(omega_monotone, strongly_monotone)``."""
    if not chain.steps:
        raise ValueError("empty chain")
    omega, strong = _monotonicity_violations(chain)
    return omega is None, strong is None


def control_violation(chain: ChainRecord, c: Control) -> Optional[int]:
    for k, D in enumerate(chain.downsets):
        if D.norm > c.iterate(k):
            return k
    return None


def check_control(chain: ChainRecord, c: Control) -> bool:
    return control_violation(chain, c) is None


def check_thinness(chain: ChainRecord, table: BoundTable) -> ThinnessReport:
    first = None
    thin = nearly = proper_ok = True
    for k, st in enumerate(chain.steps):
        for I in st.downset.sorted():
            if not is_thin(I, table):
                thin = False
                first = first or ("ideal", k, I)
        for v in st.upset.sorted():
            if not is_nearly_thin(v, table):
                nearly = False
                first = first or ("basis", k, v)
    for k, props in enumerate(chain.proper):
        for I in sorted(props, key=repr):
            if k > table.L[ideal_fdim(I)]:
                proper_ok = False
                first = first or ("proper", k, I)
    return ThinnessReport(thin, nearly, chain.length <= length_bound(table), proper_ok, first)


def run_monitors(
    chain: ChainRecord,
    control: Optional[Control] = None,
    table: Optional[BoundTable] = None,
) -> MonitorReport:
    if control is None:
        control = default_control(chain.model, chain.target)
    d = chain.steps[0].downset.dim
    if table is None:
        table = build_bound_table(control, d)
    omega, strong = _monotonicity_violations(chain)
    ctrl = control_violation(chain, control)
    thin = check_thinness(chain, table)
    mono_step = strong if strong is not None else omega
    return MonitorReport(
        length=chain.length,
        length_bound=length_bound(table),
        controlled=ctrl is None,
        control_violation_step=ctrl,
        omega_monotone=omega is None,
        strongly_monotone=strong is None,
        monotonicity_violation_step=mono_step,
        all_ideals_thin=thin.all_ideals_thin,
        basis_nearly_thin=thin.basis_nearly_thin,
        length_bound_ok=thin.length_bound_ok,
        proper_steps_ok=thin.proper_steps_ok,
        thinness_violation=thin.first_violation,
    )


def step_monotone_ok(chain: ChainRecord, k: int) -> bool:
    """Every ideal proper at ``k`` has a proper ideal at ``k-1`` of at
    least its dimension."""
    if k == 0 or k >= chain.length:
        return True
    return all(
        any(ideal_dim(I) <= ideal_dim(J) for J in chain.proper[k - 1]) for I in chain.proper[k]
    )


# -- pseudo-witnesses ----------------------------------------------------------


def extract_pseudo_witness(chain: ChainRecord, s: NatVec) -> Optional[list]:
    """Backward chain ``t_0 = t, ..., t_m <= s`` with each ``t_{k+1}`` minimal
    in Pre of ``up(t_k)``, or None when ``s`` does not cover the target.

    Ties are broken towards the lexicographically least vector.
    """
    s = tuple(s)
    net = chain.net
    ups = chain.upsets
    first = next((k for k, U in enumerate(ups) if upset_contains(U, s)), None)
    if first is None:
        return None

    def fresh(k, v):
        return k == 0 or not upset_contains(ups[k - 1], v)

    cur = min(b for b in ups[first].basis if vec_leq(b, s) and fresh(first, b))
    witness = [cur]
    for k in range(first, 0, -1):
        cur = min(
            p for p in ups[k - 1].basis if fresh(k - 1, p) and cur in pre_min(net, p)
        )
        witness.append(cur)
    witness.reverse()
    return witness


def replay_pseudo_witness(model: Model, witness: Sequence[NatVec], s: NatVec) -> list:
    """Lift a pseudo-witness to an execution from ``s`` covering ``witness[0]``."""
    net = as_affine(model)
    s = tuple(s)
    if not witness or not vec_leq(witness[-1], s):
        raise WitnessLiftingError("witness does not end below the source")
    execution = [s]
    cur = s
    for k in range(len(witness) - 2, -1, -1):
        goal = witness[k]
        for tr in net.transitions:
            nxt = apply_transition(tr, cur)
            if nxt is not None and vec_leq(goal, nxt):
                break
        else:
            raise WitnessLiftingError(f"no transition from {cur} covers {goal}")
        cur = nxt
        execution.append(cur)
    return execution


def is_valid_execution(model: Model, execution: Sequence[NatVec], s: NatVec, t: NatVec) -> bool:
    net = as_affine(model)
    if not execution or tuple(execution[0]) != tuple(s) or not vec_leq(t, execution[-1]):
        return False
    for u, w in zip(execution, execution[1:]):
        if not any(apply_transition(tr, u) == tuple(w) for tr in net.transitions):
            return False
    return True


def views_agree(classical: ChainRecord, dual: ChainRecord) -> bool:
    if classical.length != dual.length:
        return False
    return all(
        a.upset == b.upset and a.downset == b.downset
        for a, b in zip(classical.steps, dual.steps)
    )
