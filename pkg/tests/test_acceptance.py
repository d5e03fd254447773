"""Acceptance suite: one test per release criterion, each at its stated
tolerance and runtime budget.  Run with ``pytest tests/test_acceptance.py -v -s``
to see one PASS line per criterion.
"""

import math
import time

import numpy as np
import pytest

import spinsampler as ss
from spinsampler.combinatorics import SpinSpec
from spinsampler import cli
from spinsampler.matrix_io import write_matrix

from test_matrix_functions import matching_oracle, torontonian_subset_oracle

PI_HALF = math.pi / 2


def _report(number, label):
    print(f"criterion {number:02d} ({label}): PASS")


@pytest.fixture
def budget():
    start = time.perf_counter()
    yield lambda: time.perf_counter() - start


def test_c01_worked_four_mode_example(worked_unitary, budget):
    sub = ss.build_submatrix(worked_unitary, (2, 1, 0, 0), (1, 1, 1, 0))
    value = ss.permanent(sub)
    prob = ss.transition_probability(worked_unitary, (2, 1, 0, 0), (1, 1, 1, 0))
    assert abs(value - 0.25j) <= 1e-12
    assert abs(prob - 1.0 / 32.0) <= 1e-12

    best = math.inf
    for _ in range(5):
        t0 = time.perf_counter()
        ss.permanent(ss.build_submatrix(worked_unitary, (2, 1, 0, 0), (1, 1, 1, 0)))
        best = min(best, time.perf_counter() - t0)
    assert best < 1e-3
    _report(1, "worked four-mode example, exact values and < 1 ms")


def test_c02_permanent_oracle_equivalence(budget):
    rng = np.random.default_rng(20)
    for n in range(1, 9):
        for _ in range(100):
            a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            fast, slow = ss.permanent(a), ss.permanent_naive(a)
            assert abs(fast - slow) <= 1e-9 * max(abs(slow), 1e-30)
    assert budget() < 10.0
    _report(2, "permanent matches the permutation-sum oracle, sizes 1..8 x 100")


def test_c03_hafnian_formula_and_oracle(budget):
    assert ss.hafnian(np.ones((4, 4)) - np.eye(4)) == pytest.approx(3.0, abs=1e-12)
    rng = np.random.default_rng(30)
    for n in (2, 4, 6, 8):
        for _ in range(25):
            z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            a = z + z.T
            fast, slow = ss.hafnian(a), matching_oracle(a)
            assert abs(fast - slow) <= 1e-9 * max(abs(slow), 1e-30)
    assert budget() < 5.0
    _report(3, "hafnian: three-matching value and matching-enumeration oracle to 8x8")


def test_c04_torontonian_subset_oracle(budget):
    rng = np.random.default_rng(40)
    for m in range(1, 11):
        assert ss.torontonian(np.zeros((m, m))) == 1.0 + 0.0j
        for _ in range(3):
            a = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
            assert ss.torontonian(a) == torontonian_subset_oracle(a)
    assert budget() < 5.0
    _report(4, "torontonian equals the independent subset-sum oracle exactly, m <= 10")


def test_c05_capped_counts(budget):
    for twice_spin in (1, 2, 3, 4, 12):
        spin = SpinSpec(twice_spin)
        for m in range(1, 13):
            for n in range(0, 13):
                assert ss.count_capped(m, n, spin) == ss.count_capped_oracle(m, n, spin)
    for m in range(1, 13):
        for n in range(0, 13):
            assert ss.count_total(m, n) == math.comb(m + n - 1, n)
            assert ss.count_capped(m, n, SpinSpec(1)) == math.comb(m, n)
    assert budget() < 10.0
    _report(5, "capped counts: alternating sum equals DP oracle, m,n <= 12, 2S in {1,2,3,4,12}")


def test_c06_collision_free_bound(budget):
    checked = 0
    for m in range(1, 201):
        for n in range(1, 15):  # n = 0 degenerates to equality on both sides
            if n > m:
                continue
            exact, lower = ss.collision_free_fraction_bound(m, n)
            if lower > 0.0:
                assert exact > lower
                checked += 1
    assert checked > 1000
    assert budget() < 5.0
    _report(6, "collision-free fraction strictly beats 1 - n^2/m wherever positive")


def test_c07_birthday(budget):
    smallest = next(
        n for n in range(1, 100)
        if ss.classical_collision_probability(365, n)[0] >= 0.5
    )
    assert smallest == 23
    result = ss.birthday_experiment(365, 23, trials=100_000, seed=7)
    sigma = math.sqrt(result["exact"] * (1.0 - result["exact"]) / result["trials"])
    assert abs(result["empirical"] - result["exact"]) <= 3.0 * sigma
    assert budget() < 30.0
    _report(7, "classical birthday: threshold at n = 23 and Monte Carlo within 3 sigma")


def test_c08_distribution_normalization(budget):
    for m, n in ((4, 2), (6, 3), (8, 3)):
        input_config = tuple(1 if i < n else 0 for i in range(m))
        for k in range(20):
            u = ss.haar_unitary(m, ss.derive_seed(808, m, k))
            full = ss.exact_distribution(u, input_config)
            assert abs(full.total_mass - 1.0) <= 1e-9
            capped = ss.exact_distribution(u, input_config, cap=1)
            bunched = math.fsum(
                p for c, p in full.as_mapping().items() if max(c) > 1
            )
            assert abs(capped.total_mass + bunched - 1.0) <= 1e-9
    assert budget() < 120.0
    _report(8, "distribution mass: uncapped sums to 1, capped plus bunched sums to 1")


def test_c09_exact_cap_dynamics():
    for m, n, twice_spin, seed in ((4, 2, 2, 1), (4, 2, 5, 2), (5, 3, 3, 3)):
        r = ss.haar_unitary(m, seed)
        report = ss.error_norm_vs_reference(r, m, n, SpinSpec(twice_spin), PI_HALF)
        assert report.error_norm <= 1e-9

    basis = ss.sector_basis(1, 1, 1)
    h = ss.build_hopping_hamiltonian(np.eye(1, dtype=complex),
                                     ss.truncated_boson_algebra(1), basis)
    psi = ss.evolve_sector(h, ss.initial_state(basis, 1), PI_HALF)
    assert abs(psi[basis.index_of((0, 1))] - (-1.0j)) <= 1e-10
    _report(9, "cap beyond n gives zero error; single-pair transfer phase is -i")


def test_c10_error_scaling(budget):
    rows_half, _ = ss.error_sweep([4, 8, 16], 2, SpinSpec(1), 50, 12345, PI_HALF)
    slope_half = rows_half[0].slope_fit
    assert -0.8 <= slope_half <= -0.2

    rows_one, _ = ss.error_sweep([4, 8, 16], 3, SpinSpec(2), 50, 777, PI_HALF)
    slope_one = rows_one[0].slope_fit
    assert -1.3 <= slope_one <= -0.7

    # single fitted constant for the integrated bound t * C * n^(S+3/2) / m^S
    constants = []
    for rows, n, s in ((rows_half, 2, 0.5), (rows_one, 3, 1.0)):
        for row in rows:
            constants.append(row.mean_delta / (PI_HALF * n ** (s + 1.5) / row.m ** s))
    fitted = max(constants)
    print(f"error-bound constant fitted across both sweeps: C = {fitted:.4f}")
    assert fitted < 1.0

    assert budget() < 1200.0
    _report(10, f"error scaling: slopes {slope_half:.3f} (target -0.5) and "
                f"{slope_one:.3f} (target -1.0) inside their windows")


def test_c11_target_state_law(budget):
    for k in range(10):
        r = ss.haar_unitary(4, ss.derive_seed(1111, k))
        basis = ss.sector_basis(4, 2, 1)
        target = ss.target_state(r, basis, 2, ss.truncated_boson_algebra(1))
        law = ss.measured_output_law(target, basis)
        reference = ss.post_select(ss.exact_distribution(r, (1, 1, 0, 0), cap=1))
        assert ss.total_variation_distance(law, reference) <= 1e-9
    assert budget() < 60.0
    _report(11, "target-state law equals the normalized collision-free permanent law")


def test_c12_scaling_exponents(budget):
    def exponent(spin):
        m1 = ss.required_sites(50, spin)
        m2 = ss.required_sites(200, spin)
        return (math.log(m2) - math.log(m1)) / math.log(4.0)

    assert exponent(SpinSpec(1)) == pytest.approx(4.0, rel=1e-12)
    assert exponent(SpinSpec(12)) == pytest.approx(1.25, rel=1e-12)

    rows = ss.scaling_table([10, 20, 40, 80], [SpinSpec(1), SpinSpec(3), SpinSpec(12)])
    by_spin = {}
    for row in rows:
        by_spin.setdefault(row.twice_spin, []).append(row)
    for ts, group in by_spin.items():
        slope = np.polyfit(np.log([r.n for r in group]),
                           np.log([r.required_m for r in group]), 1)[0]
        assert slope == pytest.approx(1.0 + 3.0 / ts, rel=1e-12)
    assert budget() < 1.0
    _report(12, "site-count exponents: 4 at spin 1/2, 1.25 at spin 6, slopes exact")


def test_c13_reproducibility(tmp_path, capsys):
    sweep = ("error-sweep", "--sites", "4,6", "--particles", "2", "--twice-spin", "1",
             "--seeds", "3", "--seed", "99")
    paths = []
    for workers in (1, 2, 3):
        out = tmp_path / f"sweep_w{workers}.csv"
        assert cli.main(list(sweep) + ["--workers", str(workers), "--out", str(out)]) == 0
        paths.append(out.read_bytes())
    assert paths[0] == paths[1] == paths[2]

    sample = ("sample", "--sites", "4", "--particles", "2", "--cap", "1",
              "--seed", "12", "--draws", "25")
    outs = []
    for run in range(2):
        out = tmp_path / f"sample_{run}.txt"
        assert cli.main(list(sample) + ["--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]

    u = ss.haar_unitary(4, 5)
    path = tmp_path / "u.json"
    write_matrix(path, u)
    fixed = ("distribution", "--sites", "4", "--particles", "2", "--unitary", str(path))
    payloads = []
    for run in range(2):
        out = tmp_path / f"dist_{run}.json"
        assert cli.main(list(fixed) + ["--out", str(out)]) == 0
        payloads.append(out.read_bytes())
    assert payloads[0] == payloads[1]
    capsys.readouterr()
    _report(13, "identical seeds give byte-identical payloads across worker counts")
