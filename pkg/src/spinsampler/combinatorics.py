"""Configuration-space counting for bounded and unbounded occupations,
collision probabilities and the bunching bounds built from them.

All counts are exact arbitrary-precision integers; ratios are converted to
floating point only at the API boundary (via ``fractions.Fraction``, whose
float conversion is correctly rounded).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class SpinSpec:
    """Spin quantum number stored exactly as the integer 2S.

    The per-site occupancy cap equals 2S, so ``SpinSpec(1)`` is the hardcore
    (spin-1/2) case and larger values interpolate towards plain bosons.
    """

    twice_spin: int

    def __post_init__(self):
        if int(self.twice_spin) != self.twice_spin or self.twice_spin < 1:
            raise ValueError(f"twice_spin must be a positive integer, got {self.twice_spin}")
        object.__setattr__(self, "twice_spin", int(self.twice_spin))

    @property
    def cap(self) -> int:
        """Maximum occupancy of a single site."""
        return self.twice_spin

    @property
    def spin(self) -> Fraction:
        """The spin value S as an exact rational."""
        return Fraction(self.twice_spin, 2)

    def label(self) -> str:
        return str(self.twice_spin // 2) if self.twice_spin % 2 == 0 else f"{self.twice_spin}/2"

    @classmethod
    def parse(cls, text) -> "SpinSpec":
        """Accept a twice-spin integer ('3') or a spin literal ('3/2', '1')."""
        if isinstance(text, SpinSpec):
            return text
        if isinstance(text, int):
            return cls(text)
        s = str(text).strip()
        if "/" in s:
            num, den = s.split("/", 1)
            frac = Fraction(int(num), int(den))
            twice = frac * 2
            if twice.denominator != 1:
                raise ValueError(f"spin must be a half-integer, got {s}")
            return cls(int(twice))
        return cls(int(s))


def binomial(a: int, b: int) -> int:
    """C(a, b) with the inclusion-exclusion boundary convention: 0 whenever
    b < 0, a < 0 or a < b, instead of an error."""
    if b < 0 or a < 0 or a < b:
        return 0
    return math.comb(a, b)


def count_total(m: int, n: int) -> int:
    """Number of ways to place n unbounded excitations on m sites,
    C(m+n-1, n)."""
    if n < 0:
        raise ValueError("particle number must be nonnegative")
    if m < 1:
        if n == 0:
            return 1
        raise ValueError("at least one site is required for a nonzero particle number")
    return math.comb(m + n - 1, n)


def count_collision_free(m: int, n: int) -> int:
    """Number of configurations with every occupancy 0 or 1: C(m, n).

    Returns 0 (rather than raising) when n > m, since no collision-free
    configuration exists.
    """
    if n < 0:
        raise ValueError("particle number must be nonnegative")
    return binomial(m, n)


def count_capped(m: int, n: int, spin: SpinSpec) -> int:
    """Number of configurations of n excitations on m sites with every
    occupancy at most 2S, by inclusion-exclusion over cap violations:

        sum_l (-1)^l C(m, l) C(m + n - (2S+1) l - 1, m - 1)

    The summation runs to floor(n / (2S+1)) inclusive: when (2S+1) divides n
    the top term is C(m-1, m-1) C(m, n/(2S+1)) and must not be dropped.
    Cross-checked against :func:`count_capped_oracle`.
    """
    if n < 0:
        raise ValueError("particle number must be nonnegative")
    if m < 1:
        if n == 0:
            return 1
        raise ValueError("at least one site is required for a nonzero particle number")
    period = spin.cap + 1
    total = 0
    for l in range(0, n // period + 1):
        term = binomial(m, l) * binomial(m + n - period * l - 1, m - 1)
        total += -term if l % 2 else term
    return total


def count_capped_oracle(m: int, n: int, spin: SpinSpec) -> int:
    """Independent dynamic-programming count of capped configurations,
    site by site; exists solely as the cross-check for :func:`count_capped`."""
    if n < 0:
        raise ValueError("particle number must be nonnegative")
    if m < 1:
        if n == 0:
            return 1
        raise ValueError("at least one site is required for a nonzero particle number")
    cap = spin.cap
    table = [1] + [0] * n
    for _ in range(m):
        table = [sum(table[j - c] for c in range(0, min(cap, j) + 1)) for j in range(n + 1)]
    return table[n]


def capped_fraction(m: int, n: int, spin: SpinSpec) -> float:
    """Exact ratio (capped count) / (total count), asymptotically
    1 - n^(2S+1)/m^(2S) in the dilute regime."""
    total = count_total(m, n)
    return float(Fraction(count_capped(m, n, spin), total))


def collision_free_fraction_bound(m: int, n: int) -> tuple[float, float]:
    """Exact collision-free fraction C(m,n)/C(m+n-1,m-1) together with its
    lower bound 1 - n^2/m; the exact value exceeds the bound whenever the
    bound is positive."""
    if n < 0 or m < n:
        raise ValueError(f"requires m >= n >= 0, got m={m}, n={n}")
    exact = float(Fraction(count_collision_free(m, n), count_total(m, n)))
    lower = 1.0 - n * n / m
    return exact, lower


def classical_collision_probability(m: int, n: int) -> tuple[float, float]:
    """Probability that n independent uniform particles on m modes collide.

    Returns (exact, approx) where exact = 1 - prod_{k<n} (1 - k/m) and
    approx = 1 - exp(-n(n-1)/(2m)); for n > m the exact value is 1 by
    pigeonhole.
    """
    if m < 1 or n < 0:
        raise ValueError("requires m >= 1 and n >= 0")
    if n > m:
        exact = 1.0
    else:
        no_collision = 1.0
        for k in range(n):
            no_collision *= 1.0 - k / m
        exact = 1.0 - no_collision
    approx = 1.0 - math.exp(-n * (n - 1) / (2.0 * m))
    return exact, approx


def bunching_bound(m: int, n: int, spin: SpinSpec) -> float:
    """Upper bound sqrt(1 - capped_fraction) on the norm of the bunched
    component of a dilute sampling state; zero whenever n <= 2S."""
    return math.sqrt(max(0.0, 1.0 - capped_fraction(m, n, spin)))
