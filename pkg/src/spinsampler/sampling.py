"""Exact output distributions for linear-network sampling, with and without
a per-site occupancy cap, plus seeded samplers and collision statistics.

Distributions materialize their full support in lexicographic config order,
which keeps every downstream operation (sampling, comparison, serialization)
deterministic.  Practical scale is m <= 12, n <= 5: the support grows as
C(m+n-1, n) and every entry costs one permanent.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .combinatorics import classical_collision_probability
from .exceptions import DimensionError, NormalizationError
from .linalg import require_unitary, rng_from_seed
from .matrix_functions import check_occupations, transition_probability

NORMALIZATION_TOL = 1e-9


def enumerate_configs(m: int, n: int, cap: int | None = None) -> Iterator[tuple[int, ...]]:
    """Stream all occupation configurations of n excitations on m sites in
    lexicographic order, optionally with a per-site occupancy cap.

    The stream is duplicate-free and its length equals the corresponding
    exact count (capped or total).
    """
    if m < 1:
        raise DimensionError("at least one site is required")
    if n < 0:
        raise ValueError("particle number must be nonnegative")
    limit = n if cap is None else min(cap, n)

    def rec(prefix: tuple[int, ...], sites_left: int, remaining: int):
        if sites_left == 1:
            if remaining <= limit:
                yield prefix + (remaining,)
            return
        lo = max(0, remaining - limit * (sites_left - 1))
        for first in range(lo, min(limit, remaining) + 1):
            yield from rec(prefix + (first,), sites_left - 1, remaining - first)

    yield from rec((), m, n)


@dataclass(frozen=True, eq=False)
class Distribution:
    """Probability weights over occupation configurations.

    ``total_mass`` is the sum of the stored probabilities; capped
    (pre-post-selection) distributions carry mass below 1 and record the
    complement in ``discarded_mass`` instead of silently dropping it.
    """

    configs: tuple[tuple[int, ...], ...]
    probabilities: np.ndarray
    total_mass: float
    discarded_mass: float = 0.0

    def __post_init__(self):
        probs = np.asarray(self.probabilities, dtype=float)
        object.__setattr__(self, "probabilities", probs)
        if probs.shape != (len(self.configs),):
            raise DimensionError("one probability per configuration is required")
        if probs.size and float(probs.min()) < 0.0:
            raise ValueError("probabilities must be nonnegative")

    @property
    def support_size(self) -> int:
        return len(self.configs)

    def is_normalized(self, tol: float = NORMALIZATION_TOL) -> bool:
        return abs(self.total_mass - 1.0) <= tol

    def as_mapping(self) -> dict[tuple[int, ...], float]:
        return {c: float(p) for c, p in zip(self.configs, self.probabilities)}


def make_distribution(pairs: Sequence[tuple[tuple[int, ...], float]],
                      discarded_mass: float = 0.0) -> Distribution:
    configs = tuple(tuple(c) for c, _ in pairs)
    probs = np.array([p for _, p in pairs], dtype=float)
    mass = float(math.fsum(probs.tolist()))
    return Distribution(configs, probs, mass, float(discarded_mass))


def _probability_chunk(args) -> list[float]:
    u, input_config, chunk = args
    return [transition_probability(u, input_config, k) for k in chunk]


def exact_distribution(u, input_occ: Sequence[int], cap: int | None = None,
                       workers: int = 1) -> Distribution:
    """Exact output distribution of ``input_occ`` through the unitary ``u``.

    With ``cap`` set, the support is restricted to configurations within the
    occupancy cap; the missing (bunched) mass is recorded as
    ``discarded_mass``.  ``workers`` > 1 evaluates the permanents in parallel
    chunks; the merge order is fixed, so results do not depend on the worker
    count.
    """
    u = require_unitary(u)
    m = u.shape[0]
    input_config = check_occupations(input_occ, m)
    n = sum(input_config)
    if cap is not None and any(c > cap for c in input_config):
        raise ValueError(f"input configuration {input_config} violates the occupancy cap {cap}")
    configs = list(enumerate_configs(m, n, cap))
    if workers > 1 and len(configs) >= 4 * workers:
        chunks = [configs[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_probability_chunk, [(u, input_config, c) for c in chunks]))
        probs = [0.0] * len(configs)
        for w, part in enumerate(parts):
            for local, p in enumerate(part):  # chunk w holds indices w, w+workers, ...
                probs[w + local * workers] = p
    else:
        probs = [transition_probability(u, input_config, k) for k in configs]
    mass = float(math.fsum(probs))
    discarded = max(0.0, 1.0 - mass) if cap is not None else 0.0
    return Distribution(tuple(configs), np.array(probs), mass, discarded)


def distribution_from_payload(obj: dict) -> Distribution:
    """Rebuild a Distribution from its JSON payload (the inverse of the CLI's
    distribution output)."""
    entries = obj["entries"]
    configs = tuple(tuple(int(x) for x in e["config"]) for e in entries)
    probs = np.array([float(e["p"]) for e in entries])
    return Distribution(configs, probs, float(obj["total_mass"]), float(obj["discarded_mass"]))


def post_select(d: Distribution) -> Distribution:
    """Rescale to unit mass, recording how much probability was discarded."""
    if d.total_mass <= 0.0:
        raise NormalizationError("cannot post-select a distribution with zero mass")
    newly_discarded = max(0.0, 1.0 - d.total_mass - d.discarded_mass)
    probs = d.probabilities / d.total_mass
    return Distribution(d.configs, probs, 1.0, d.discarded_mass + newly_discarded)


@dataclass(frozen=True, eq=False)
class SampleBatch:
    """Seeded batch of sampled configurations, stored row-wise."""

    configs: np.ndarray
    seed: int
    draw_count: int

    def as_tuples(self) -> list[tuple[int, ...]]:
        return [tuple(int(x) for x in row) for row in self.configs]


def draw_samples(d: Distribution, seed: int, count: int) -> SampleBatch:
    """Draw i.i.d. configurations by inverse CDF over the lexicographic
    support; identical seeds give identical batches."""
    if not d.is_normalized():
        raise NormalizationError(
            f"distribution mass is {d.total_mass!r}; post-select before sampling"
        )
    if count < 1:
        raise ValueError("draw count must be positive")
    rng = rng_from_seed(seed)
    cdf = np.cumsum(d.probabilities)
    cdf[-1] = max(cdf[-1], 1.0)
    idx = np.searchsorted(cdf, rng.random(count), side="right")
    configs = np.array(d.configs, dtype=np.int32)[idx]
    return SampleBatch(configs, int(seed), count)


def sample_distinguishable(u, input_occ: Sequence[int], seed: int, count: int) -> SampleBatch:
    """Transport each particle independently: a particle starting at site i
    lands at site j with probability |u[i, j]|^2 (row i of the network,
    matching the orientation of the exact distribution).

    This is the classical (distinguishable-particle) baseline; interference
    plays no role.
    """
    u = require_unitary(u)
    m = u.shape[0]
    input_config = check_occupations(input_occ, m)
    if count < 1:
        raise ValueError("draw count must be positive")
    rng = rng_from_seed(seed)
    start_sites = [i for i, c in enumerate(input_config) for _ in range(c)]
    weights = np.abs(u) ** 2
    occ = np.zeros((count, m), dtype=np.int32)
    draw_rows = np.arange(count)
    for site in start_sites:
        landings = rng.choice(m, size=count, p=weights[site] / weights[site].sum())
        np.add.at(occ, (draw_rows, landings), 1)
    return SampleBatch(occ, int(seed), count)


def total_variation_distance(p: Distribution, q: Distribution) -> float:
    """Half the L1 distance between two normalized distributions over the
    union of their supports."""
    for d in (p, q):
        if not d.is_normalized():
            raise NormalizationError("total variation distance requires normalized inputs")
    pm = p.as_mapping()
    qm = q.as_mapping()
    support = set(pm) | set(qm)
    return 0.5 * math.fsum(abs(pm.get(k, 0.0) - qm.get(k, 0.0)) for k in support)


def collision_statistics(batch: SampleBatch) -> tuple[float, dict[int, int]]:
    """Fraction of draws containing any site with occupancy >= 2, plus a
    histogram of the per-draw maximum occupancy."""
    if batch.configs.shape[0] == 0:
        raise ValueError("collision statistics require a nonempty batch")
    max_occ = batch.configs.max(axis=1)
    frequency = float(np.mean(max_occ >= 2))
    values, counts = np.unique(max_occ, return_counts=True)
    histogram = {int(v): int(c) for v, c in zip(values, counts)}
    return frequency, histogram


def birthday_experiment(m: int, n: int, trials: int, seed: int) -> dict:
    """Monte Carlo collision frequency of n distinguishable particles dropped
    uniformly at random onto m modes, next to the closed-form values.

    The transport network is the identity; each particle's start site is
    drawn uniformly per trial, so landing sites are the start sites and
    collisions follow the classical birthday law.
    """
    if trials < 1:
        raise ValueError("at least one trial is required")
    exact, approx = classical_collision_probability(m, n)
    rng = rng_from_seed(seed)
    landings = rng.integers(0, m, size=(trials, n))
    landings.sort(axis=1)
    collided = np.any(landings[:, 1:] == landings[:, :-1], axis=1) if n > 1 else np.zeros(trials, bool)
    empirical = float(np.mean(collided))
    return {
        "modes": m,
        "particles": n,
        "trials": trials,
        "exact": exact,
        "approx": approx,
        "empirical": empirical,
    }
