"""Random small instances for sweeps and property tests."""

from __future__ import annotations

import random

from .models import AffineNet, AffineTransition, Vas, determinant, identity


def random_config(rng: random.Random, d: int, max_norm: int) -> tuple:
    return tuple(rng.randint(0, max_norm) for _ in range(d))


def random_vas(rng: random.Random, max_dim: int = 3, max_actions: int = 3, max_norm: int = 2) -> Vas:
    d = rng.randint(1, max_dim)
    k = rng.randint(1, max_actions)
    return Vas(d, tuple(tuple(rng.randint(-max_norm, max_norm) for _ in range(d)) for _ in range(k)))


def _random_matrix(rng, d, max_entry):
    return tuple(tuple(rng.randint(0, max_entry) for _ in range(d)) for _ in range(d))


def random_invertible_net(
    rng: random.Random, max_dim: int = 3, max_entry: int = 2, max_transitions: int = 2
) -> AffineNet:
    d = rng.randint(1, max_dim)
    trans = []
    for _ in range(rng.randint(1, max_transitions)):
        M = _random_matrix(rng, d, max_entry)
        while determinant(M) == 0:
            M = _random_matrix(rng, d, max_entry)
        trans.append(
            AffineTransition(random_config(rng, d, max_entry), M, random_config(rng, d, max_entry))
        )
    return AffineNet(d, tuple(trans))


def random_strictly_increasing_net(
    rng: random.Random, max_dim: int = 3, max_extra: int = 1, max_norm: int = 2, max_transitions: int = 2
) -> AffineNet:
    """Nets whose matrices are the identity plus a non-negative matrix."""
    d = rng.randint(1, max_dim)
    eye = identity(d)
    trans = []
    for _ in range(rng.randint(1, max_transitions)):
        extra = _random_matrix(rng, d, max_extra)
        M = tuple(tuple(e + x for e, x in zip(er, xr)) for er, xr in zip(eye, extra))
        trans.append(
            AffineTransition(random_config(rng, d, max_norm), M, random_config(rng, d, max_norm))
        )
    return AffineNet(d, tuple(trans))


def random_affine_net(
    rng: random.Random, max_dim: int = 3, max_entry: int = 2, max_transitions: int = 2
) -> AffineNet:
    """Unrestricted matrices; monotonicity is not guaranteed for these."""
    d = rng.randint(1, max_dim)
    trans = [
        AffineTransition(
            random_config(rng, d, max_entry), _random_matrix(rng, d, max_entry), random_config(rng, d, max_entry)
        )
        for _ in range(rng.randint(1, max_transitions))
    ]
    return AffineNet(d, tuple(trans))
