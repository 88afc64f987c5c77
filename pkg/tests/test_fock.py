import math

import numpy as np
import pytest

import plunge_lab as pl
from plunge_lab.fock import (
    ConventionError,
    _cross_validate_gram,
    bargmann_hermite_check,
    default_oracle_rule,
    fourier_rotation_check,
    gram_csv_lines,
)


# ---------------------------------------------------------------------------
# system construction
# ---------------------------------------------------------------------------

def test_build_system_single_disk_c10(packing_cache):
    # k runs to floor(10 pi 0.49^2) = floor(7.543) = 7: eight members
    system = pl.build_system(packing_cache(1), 10.0)
    assert system.size == 8
    assert [m.degree for m in system.members] == list(range(8))


def test_build_system_lexicographic_order(two_disk_packing):
    system = pl.build_system(two_disk_packing, 20.0)
    assert [(m.disk_index, m.degree) for m in system.members] == [
        (0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2),
    ]
    # centers scale by sqrt(c)
    assert system.members[0].center == pytest.approx(math.sqrt(20.0) * (-0.25), abs=1e-12)


def test_build_system_tiny_c(two_disk_packing):
    system = pl.build_system(two_disk_packing, 1e-6)
    assert [m.degree for m in system.members] == [0, 0]


def test_member_count_dominates_coverage(packing_cache):
    p = packing_cache(2)
    c = 20.0
    system = pl.build_system(p, c)
    eps = 1.0 - p.coverage
    assert system.size >= math.floor((1.0 - eps) * c)


# ---------------------------------------------------------------------------
# member evaluation
# ---------------------------------------------------------------------------

def test_eval_member_centered_is_hermite():
    m = pl.SystemMember(0, 0, 0j, 10.0)
    x = np.linspace(-3, 3, 11)
    assert np.abs(pl.eval_member(m, x) - pl.hermite_block(0, x)[0]).max() <= 1e-14


def test_eval_member_peak_modulus():
    m = pl.SystemMember(0, 2, 1.5 + 0.7j, 10.0)
    h20 = abs(pl.hermite_block(2, np.array(0.0))[2])
    assert abs(pl.eval_member(m, 1.5)) == pytest.approx(h20, abs=1e-13)


def test_eval_member_unit_norm(oracle_rule_cache):
    rule = oracle_rule_cache(10.0)
    for member in (
        pl.SystemMember(0, 0, 0.5 - 1.2j, 10.0),
        pl.SystemMember(0, 5, -1.0 + 0.3j, 10.0),
    ):
        norm = pl.gram_entry_oracle(member, member, rule)
        assert abs(norm - 1.0) <= 1e-10


def test_fourier_centered_gaussian():
    m = pl.SystemMember(0, 0, 0j, 10.0)
    xi = np.linspace(-2, 2, 9)
    assert np.abs(np.abs(pl.eval_member_fourier(m, xi)) - pl.hermite_block(0, xi)[0]).max() <= 1e-14


def test_fourier_center_relocation():
    m = pl.SystemMember(0, 4, 0.8 + 1.1j, 10.0)
    h40 = abs(pl.hermite_block(4, np.array(0.0))[4])
    assert abs(pl.eval_member_fourier(m, 1.1)) == pytest.approx(h40, abs=1e-13)


def test_fourier_matches_quadrature_transform(oracle_rule_cache):
    # oracle: direct quadrature of the 2 pi convention transform at 10 points
    rule = oracle_rule_cache(10.0)
    member = pl.SystemMember(0, 3, 0.9 - 0.4j, 10.0)
    fvals = pl.eval_member(member, rule.nodes)
    for xi in np.linspace(-2.2, 2.2, 10):
        numeric = np.sum(rule.weights * fvals * np.exp(-2j * math.pi * rule.nodes * xi))
        closed = pl.eval_member_fourier(member, xi)
        assert abs(numeric - closed) <= 1e-8


# ---------------------------------------------------------------------------
# Gram: closed form against the quadrature oracle
# ---------------------------------------------------------------------------

def test_gram_oracle_agreement_random_pairs(packing_cache, oracle_rule_cache, rng):
    system = pl.build_system(packing_cache(2), 10.0)
    rule = oracle_rule_cache(10.0)
    gram = pl.gram_block(system.members)
    idx = rng.integers(0, system.size, size=(50, 2))
    worst = 0.0
    for i, j in idx:
        oracle = pl.gram_entry_oracle(system.members[i], system.members[j], rule)
        worst = max(worst, abs(gram[i, j] - oracle))
    assert worst <= 1e-8


def test_gram_same_disk_orthogonality(packing_cache, oracle_rule_cache):
    system = pl.build_system(packing_cache(1), 10.0)
    rule = oracle_rule_cache(10.0)
    gram = pl.gram_block(system.members)
    for i in range(system.size):
        for j in range(system.size):
            if i != j:
                assert gram[i, j] == 0.0  # exactly
                assert abs(pl.gram_entry_oracle(system.members[i], system.members[j], rule)) <= 1e-10


def test_gram_two_gaussians_closed_form(two_disk_packing, oracle_rule_cache):
    system = pl.build_system(two_disk_packing, 10.0)
    g0 = [m for m in system.members if m.degree == 0]
    gram = pl.gram_block(g0)
    dv = abs(g0[0].center - g0[1].center)
    expected = math.exp(-math.pi * dv**2 / 2)
    assert abs(gram[0, 1]) == pytest.approx(expected, rel=1e-12)
    oracle = pl.gram_entry_oracle(g0[0], g0[1], oracle_rule_cache(10.0))
    assert abs(abs(oracle) - expected) <= 1e-10


def test_gram_magnitude_literal_formula(two_disk_packing):
    # independent route: the magnitude law sqrt(k!/l!) (sqrt(pi) |dv|)^(l-k)
    # exp(-pi |dv|^2 / 2) |L_k^(l-k)(pi |dv|^2)| with scipy's Laguerre
    from scipy.special import eval_genlaguerre

    system = pl.build_system(two_disk_packing, 20.0)
    gram = pl.gram_block(system.members)
    for i, mi in enumerate(system.members):
        for j, mj in enumerate(system.members):
            k, l = sorted((mi.degree, mj.degree))
            dv = abs(mi.center - mj.center)
            t = math.pi * dv**2
            expected = (
                math.sqrt(math.factorial(k) / math.factorial(l))
                * (math.sqrt(math.pi) * dv) ** (l - k)
                * math.exp(-t / 2)
                * abs(eval_genlaguerre(k, l - k, t))
            )
            assert abs(gram[i, j]) == pytest.approx(expected, abs=1e-13)


def test_gram_matrix_shape_and_cache(two_disk_packing):
    system = pl.build_system(two_disk_packing, 20.0)
    gram = pl.gram_matrix(system)
    assert gram.shape == (6, 6)
    assert pl.gram_matrix(system) is gram  # cached
    assert np.array_equal(gram, gram.conj().T)
    assert np.all(np.diag(gram) == 1.0)


def test_gram_cross_validation_trips_on_corruption(two_disk_packing):
    system = pl.build_system(two_disk_packing, 10.0)
    bad = pl.gram_block(system.members)
    bad[0, 2] += 1e-4
    with pytest.raises(ConventionError):
        _cross_validate_gram(system.members, bad)


def test_gram_size_guard(packing_cache):
    system = pl.build_system(packing_cache(3), 1.0)
    with pytest.raises(ValueError, match="too large"):
        pl.gram_matrix(system)


def test_gram_csv_lines(two_disk_packing):
    system = pl.build_system(two_disk_packing, 10.0)
    lines = list(gram_csv_lines(pl.gram_block(system.members)))
    assert lines[0] == "row,col,log10_abs"
    assert len(lines) == 1 + system.size**2
    assert lines[1].startswith("0,0,")
    # same-disk off-diagonal entries are exact zeros -> floor sentinel
    assert any(line.endswith(",floor") for line in lines[1:])


# ---------------------------------------------------------------------------
# Bargmann transform conventions
# ---------------------------------------------------------------------------

def test_bargmann_gaussian_is_one():
    rule = pl.gauss_legendre_rule(800, -14.0, 14.0)
    h0 = pl.hermite_block(0, rule.nodes)[0]
    for z in (0.0, 1.0, 1j):
        assert abs(pl.bargmann_numeric(h0, complex(z), rule) - 1.0) <= 1e-10


def test_bargmann_monomial_convention():
    assert bargmann_hermite_check(k_max=10) <= 1e-6


def test_fourier_rotation_orientation():
    # with the forward transform exp(-2 pi i x xi), the rotation identity is
    # B(Ff)(z) = Bf(-iz); the +i orientation (the inverse transform's) must
    # fail for odd degrees
    err_minus, err_plus = fourier_rotation_check(degree=3, points=(1.0, 1 + 1j))
    assert err_minus <= 1e-6
    assert err_plus > 1.0


def test_bargmann_pointwise_bound(oracle_rule_cache):
    # |B f(z)| exp(-pi |z|^2 / 2) <= 1 for unit-norm members
    rule = oracle_rule_cache(10.0)
    member = pl.SystemMember(0, 2, 1.0 + 0.5j, 10.0)
    for z in (0.0, 0.7 + 0.2j, -1.5j, 2.0 + 2.0j, 1.0 - 3.0j):
        val = abs(pl.bargmann_numeric(member, complex(z), rule)) * math.exp(-math.pi * abs(complex(z)) ** 2 / 2)
        assert val <= 1.0 + 1e-6


def test_bargmann_isometry(oracle_rule_cache):
    # Fock norm over a disk of radius 8 recovers the unit L2 norm to 1e-4
    rule = oracle_rule_cache(10.0)
    member = pl.SystemMember(0, 1, 0.4 - 0.3j, 10.0)
    fvals = pl.eval_member(member, rule.nodes)
    radial = pl.gauss_legendre_rule(120, 0.0, 8.0)
    n_theta = 256
    theta = 2 * math.pi * np.arange(n_theta) / n_theta
    zs = radial.nodes[:, None] * np.exp(1j * theta)[None, :]
    kernel = np.exp(
        2 * math.pi * rule.nodes[None, :] * zs.reshape(-1, 1)
        - math.pi * rule.nodes[None, :] ** 2
        - 0.5 * math.pi * zs.reshape(-1, 1) ** 2
    )
    bvals = (2**0.25) * (kernel * (rule.weights * fvals)[None, :]).sum(axis=1)
    bvals = bvals.reshape(zs.shape)
    integrand = np.abs(bvals) ** 2 * np.exp(-math.pi * radial.nodes[:, None] ** 2) * radial.nodes[:, None]
    total = (integrand.sum(axis=1) * (2 * math.pi / n_theta)) @ radial.weights
    assert total == pytest.approx(1.0, abs=1e-4)


def test_cross_disk_entries_below_pair_bound(two_disk_packing):
    # almost-orthogonality domination, in log scale (floor entries auto-pass)
    c = 20.0
    system = pl.build_system(two_disk_packing, c)
    gram = pl.gram_block(system.members)
    constants = pl.certificate_constants(two_disk_packing)
    bound = pl.proposition_pair_bound(constants, c)
    for i, mi in enumerate(system.members):
        for j, mj in enumerate(system.members):
            if mi.disk_index != mj.disk_index:
                mag = abs(gram[i, j])
                log_mag = -math.inf if mag == 0.0 else math.log(mag)
                assert log_mag <= bound.log_abs
