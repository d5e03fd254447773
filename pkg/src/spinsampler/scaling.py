"""Resource-scaling analysis: how many sites a capped-occupancy sampling
protocol needs, as a function of the excitation number and the spin value.

Inverting the evolution error bound  t * C * n^(S + 3/2) / m^S <= eps  for m
gives  m = (t * C * n^(S + 3/2) / eps)^(1/S),  a power law in n with exponent
1 + 3/(2S): quartic for S = 1/2, quadratic for S = 3/2, n^1.25 for S = 6.
The prefactor constants are free parameters here and are echoed into every
output row.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .combinatorics import SpinSpec

DEFAULT_TIME = math.pi / 2
DEFAULT_CONSTANT = 1.0
DEFAULT_EPS_TARGET = 0.1


def required_sites(n: int, spin: SpinSpec, eps_target: float = DEFAULT_EPS_TARGET,
                   t: float = DEFAULT_TIME, c: float = DEFAULT_CONSTANT) -> float:
    """Smallest (real) site count keeping the evolution error below
    ``eps_target`` at time ``t`` with bound constant ``c``.

    The protocol also needs at least one site per excitation, so the result
    is floored at n when a loose target would allow fewer.
    """
    if eps_target <= 0.0:
        raise ValueError("the error target must be positive")
    if c <= 0.0:
        raise ValueError("the bound constant must be positive")
    if n < 1:
        raise ValueError("at least one excitation is required")
    spin = spin if isinstance(spin, SpinSpec) else SpinSpec(spin)
    s = spin.twice_spin / 2.0
    raw = (t * c * float(n) ** (s + 1.5) / eps_target) ** (1.0 / s)
    return max(raw, float(n))


def growth_exponent(spin: SpinSpec) -> float:
    """Exponent of the m(n) power law, 1 + 3/(2S)."""
    spin = spin if isinstance(spin, SpinSpec) else SpinSpec(spin)
    return 1.0 + 3.0 / spin.twice_spin


@dataclass(frozen=True)
class ScalingRow:
    n: int
    twice_spin: int
    epsilon: float
    required_m: float
    bound_constant: float

    def __post_init__(self):
        if self.required_m < self.n:
            raise ValueError("required site count cannot fall below the excitation count")


def scaling_table(n_values: Sequence[int], spins: Sequence[SpinSpec],
                  eps_target: float = DEFAULT_EPS_TARGET, t: float = DEFAULT_TIME,
                  c: float = DEFAULT_CONSTANT) -> list[ScalingRow]:
    """Required-site curves over a grid of excitation numbers and spins.

    Within each spin, log(required_m) is affine in log(n) with slope exactly
    1 + 3/(2S).
    """
    if not n_values or not spins:
        raise ValueError("both grids must be nonempty")
    rows = []
    for spin in spins:
        spin = spin if isinstance(spin, SpinSpec) else SpinSpec(spin)
        eps = 3.0 / spin.twice_spin
        for n in n_values:
            rows.append(ScalingRow(
                n=int(n),
                twice_spin=spin.twice_spin,
                epsilon=eps,
                required_m=required_sites(n, spin, eps_target, t, c),
                bound_constant=c,
            ))
    return rows
