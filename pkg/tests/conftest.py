import numpy as np
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def random_nonnegative_measures(rng, count=1):
    """Random nonnegative normalized weight vectors, shape (count, 16)."""
    w = rng.uniform(0.0, 1.0, size=(count, 16))
    return w / w.sum(axis=1, keepdims=True)


def random_signed_measures(rng, count=1, span=2.0):
    """Random normalized weight vectors with entries in [-span, span].

    Entries are sampled uniformly and shifted to sum 1; rows pushed outside
    the span by the shift are resampled.
    """
    rows = []
    while len(rows) < count:
        need = count - len(rows)
        w = rng.uniform(-span, span, size=(max(need, 8), 16))
        w += (1.0 - w.sum(axis=1, keepdims=True)) / 16.0
        ok = np.all(np.abs(w) <= span, axis=1)
        rows.extend(w[ok][:need])
    return np.asarray(rows)


def random_consistent_box(rng):
    """A consistent probability set: the image of a random nonnegative model."""
    from quasilocal import forward_map

    return forward_map(random_nonnegative_measures(rng)[0])


def random_mixture_box(rng):
    """Random convex mixture of the PR box and a random local box."""
    from quasilocal import forward_map, pr_box

    lam = rng.uniform(0.0, 1.0)
    return lam * pr_box() + (1.0 - lam) * forward_map(random_nonnegative_measures(rng)[0])
