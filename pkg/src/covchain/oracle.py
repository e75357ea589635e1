"""Forward ground truth for small instances.

Karp-Miller trees decide VAS coverability outright; bounded breadth-first
search is a semi-decision for affine nets whose "yes" is always sound.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .ideals import OMEGA, NatVec, OmegaVec, vec_leq, vec_norm
from .models import AffineNet, Model, Vas, affine_to_vas, as_affine, successors

DEFAULT_MAX_NODES = 2_000_000


@dataclass
class KmNode:
    label: OmegaVec
    children: dict = field(default_factory=dict)  # action -> KmNode


class OracleLimitExceeded(RuntimeError):
    pass


def _as_vas(model: Model) -> Vas:
    if isinstance(model, Vas):
        return model
    if isinstance(model, AffineNet):
        try:
            return affine_to_vas(model)
        except ValueError:
            pass
    raise TypeError("Karp-Miller construction is only available for VAS")


def _fire(label: OmegaVec, action) -> Optional[OmegaVec]:
    out = []
    for x, a in zip(label, action):
        if x is OMEGA:
            out.append(OMEGA)
        elif x + a < 0:
            return None
        else:
            out.append(x + a)
    return tuple(out)


def _accelerate(label: OmegaVec, ancestors) -> OmegaVec:
    w = list(label)
    for x in ancestors:
        if x != label and vec_leq(x, label):
            for i, (xi, wi) in enumerate(zip(x, label)):
                if xi < wi:
                    w[i] = OMEGA
    return tuple(w)


def karp_miller_tree(vas: Model, s: NatVec, *, max_nodes: int = DEFAULT_MAX_NODES, stop=None) -> KmNode:
    """Build the Karp-Miller tree rooted at ``s``.

    ``stop`` is an optional predicate on labels; construction ends as soon as
    a node satisfies it.
    """
    vas = _as_vas(vas)
    if len(s) != vas.dim:
        raise ValueError("source dimension does not match the VAS")
    root = KmNode(tuple(s))
    if stop is not None and stop(root.label):
        return root
    stack = [(root, (root.label,))]
    count = 1
    while stack:
        node, path = stack.pop()
        for a in vas.actions:
            nxt = _fire(node.label, a)
            if nxt is None:
                continue
            nxt = _accelerate(nxt, path)
            child = KmNode(nxt)
            node.children[a] = child
            count += 1
            if count > max_nodes:
                raise OracleLimitExceeded(f"Karp-Miller tree exceeded {max_nodes} nodes")
            if stop is not None and stop(nxt):
                return root
            if nxt not in path:
                stack.append((child, path + (nxt,)))
    return root


def karp_miller_covers(vas: Model, s: NatVec, t: NatVec, *, max_nodes: int = DEFAULT_MAX_NODES) -> bool:
    t = tuple(t)
    found = []

    def covers(label):
        if vec_leq(t, label):
            found.append(label)
            return True
        return False

    karp_miller_tree(vas, s, max_nodes=max_nodes, stop=covers)
    return bool(found)


class CoverResult(str, enum.Enum):
    YES = "yes"
    NO_WITHIN_BOUNDS = "no-within-bounds"
    UNKNOWN = "unknown"


def bounded_forward_covers(
    net: Model, s: NatVec, t: NatVec, depth: int, norm_cap: int
) -> CoverResult:
    """Breadth-first search from ``s`` up to ``depth`` steps.

    Configurations above ``norm_cap`` are not expanded.  The answer is
    NO_WITHIN_BOUNDS only when the whole forward closure was exhausted
    without truncation.
    """
    if depth < 0 or norm_cap < 0:
        raise ValueError("bounds must be non-negative")
    net = as_affine(net)
    s, t = tuple(s), tuple(t)
    if vec_leq(t, s):
        return CoverResult.YES
    seen = {s}
    frontier = deque([s])
    truncated = False
    for _ in range(depth):
        nxt = deque()
        for u in frontier:
            for w in successors(net, u):
                if vec_leq(t, w):
                    return CoverResult.YES
                if w in seen:
                    continue
                seen.add(w)
                if vec_norm(w) > norm_cap:
                    truncated = True
                    continue
                nxt.append(w)
        frontier = nxt
        if not frontier:
            break
    if frontier or truncated:
        return CoverResult.UNKNOWN
    return CoverResult.NO_WITHIN_BOUNDS


def forward_cover_steps(net: Model, v: NatVec, t: NatVec, k: int) -> bool:
    """Whether some execution of at most ``k`` steps from ``v`` covers ``t``."""
    net = as_affine(net)
    t = tuple(t)
    layer = {tuple(v)}
    seen = set(layer)
    for step in range(k + 1):
        if any(vec_leq(t, u) for u in layer):
            return True
        if step == k:
            break
        layer = {w for u in layer for w in successors(net, u)} - seen
        seen |= layer
    return False
