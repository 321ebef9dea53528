"""Acceptance suite: ten end-to-end checks, each with an explicit tolerance.

Each test prints a single [PASS] line with the measured numbers (visible
under `pytest -s`); a failed assertion marks that criterion red. The heavy
ground projections come from session fixtures that record their build time,
so the runtime bounds below cover model assembly plus diagonalization plus
the index evaluation itself.
"""
import time

import numpy as np

from artifact import (build_disk_lattice, build_trivial, chern_number,
                      cocycle_exponent, core_regions, exchange_phase_bch,
                      exchange_phase_closed, ground_projection, hall_sigma,
                      make_good_partition, parity_charge, parity_indices,
                      pfaffian_expectation, predicted_free_fermion,
                      random_covariance, stack_copies, tknn_chern,
                      twist_statistics, wick_expectation)


def _arg_dist(z, w) -> float:
    """Geodesic distance between the phases of two unit complex numbers."""
    return abs(float(np.angle(z * np.conjugate(w))))


def test_criterion_01_chern_quantization(qwz_r16, pip_r16):
    P_q, part_q, secs_q = qwz_r16
    start = time.perf_counter()
    nu_q = chern_number(P_q, part_q)
    secs_q += time.perf_counter() - start
    oracle = tknn_chern("qwz", {"u": 1.0}, 200)
    assert abs(nu_q - 2.0) <= 0.05
    assert int(round(nu_q)) == 2 * oracle
    assert secs_q <= 300.0

    P_p, part_p, secs_p = pip_r16
    start = time.perf_counter()
    nu_p = chern_number(P_p, part_p)
    secs_p += time.perf_counter() - start
    assert min(abs(nu_p - 1.0), abs(nu_p + 1.0)) <= 0.05
    assert secs_p <= 300.0
    print(f"\n[PASS] criterion 1: qwz R=16 nu={nu_q:.6f} (err {abs(nu_q - 2):.2e}, "
          f"{secs_q:.0f}s); pip R=16 nu={nu_p:.6f} (err {abs(abs(nu_p) - 1):.2e}, "
          f"{secs_p:.0f}s)")


def test_criterion_02_trivial_exactness(triv_r6):
    P, part = triv_r6
    nu = chern_number(P, part)
    ids, geom = core_regions(P, part, 0.7)
    g0 = parity_charge(P, ids[0], geom)
    g1 = parity_charge(P, ids[1], geom)
    sigma = hall_sigma(P, g0, g1, part)
    z2, z8 = parity_indices(P, part)
    h3 = stack_copies(build_trivial(build_disk_lattice("square", 4.0,
                                                       majorana_count=2)), 3)
    sig3, th3, om3 = twist_statistics(ground_projection(h3), 3,
                                      make_good_partition((0.31, 0.17)))
    worst = max(abs(nu), abs(sigma), abs(z8 - 1.0), abs(sig3),
                abs(th3 - 1.0), abs(om3 - 1.0))
    assert z2 == 1
    assert worst <= 1e-10
    print(f"\n[PASS] criterion 2: trivial model worst deviation {worst:.2e}")


def test_criterion_03_parity_flux_relation(qwz_r16):
    P, part, _ = qwz_r16
    nu = chern_number(P, part)
    ids, geom = core_regions(P, part, 0.7)
    g0 = parity_charge(P, ids[0], geom)
    g1 = parity_charge(P, ids[1], geom)
    sigma = hall_sigma(P, g0, g1, part)
    assert abs(2 * sigma - nu) <= 0.05
    print(f"\n[PASS] criterion 3: qwz R=16 parity-flux trace {2 * sigma:.9f} "
          f"vs nu {nu:.9f} (|diff| {abs(2 * sigma - nu):.2e})")


def test_criterion_04_order8_phase(qwz_r16, pip_r16):
    P, part, _ = qwz_r16
    z2, z8 = parity_indices(P, part)
    err = _arg_dist(z8, np.exp(1j * np.pi / 4))
    assert z2 == 1
    assert err <= 0.05

    P_p, part_p, _ = pip_r16
    z2_p, z8_p = parity_indices(P_p, part_p)
    assert z2_p == -1
    assert z8_p is None
    print(f"\n[PASS] criterion 4: qwz z8 within {err:.2e} rad of exp(i pi/4); "
          f"pip z2 = {z2_p}")


def test_criterion_05_twist_statistics(qwz_stack3_r10):
    P, part, secs = qwz_stack3_r10
    radius = P.geometry.radius
    start = time.perf_counter()
    sigma, theta3, omega3 = twist_statistics(P, 3, part)
    secs += time.perf_counter() - start
    pred = predicted_free_fermion(2, 3)
    th_err = _arg_dist(theta3, pred.theta_N)
    om_err = _arg_dist(omega3, pred.omega_N)
    assert abs(sigma - 2.0) <= 0.1
    assert th_err <= 0.05
    assert om_err <= 0.1
    assert secs <= 1800.0
    print(f"\n[PASS] criterion 5: qwz 3-stack R={radius:g} sigma={sigma:.6f}, "
          f"theta3 err {th_err:.2e} rad, omega3 err {om_err:.2e} rad ({secs:.0f}s)")


def test_criterion_06_bch_cross_check(qwz_stack3_r6_generators):
    P, part, g0, g1 = qwz_stack3_r6_generators
    sigma = hall_sigma(P, g0, g1, part)
    errs = []
    for alpha in (0.1, 0.05, 0.025):
        bch = exchange_phase_bch(P, g0, g1, alpha, alpha, part)
        errs.append(abs(bch - exchange_phase_closed(sigma, alpha, alpha)))
    assert errs[0] <= 1e-4
    assert errs[1] <= errs[0] / 4
    assert errs[2] <= errs[1] / 4
    print(f"\n[PASS] criterion 6: bch errors {errs[0]:.2e} -> {errs[1]:.2e} -> "
          f"{errs[2]:.2e} (ratios {errs[0] / errs[1]:.1f}x, {errs[1] / errs[2]:.1f}x)")


def test_criterion_07_wick_pfaffian_oracle():
    rng = np.random.default_rng(42)
    worst = 0.0
    for _ in range(100):
        dim = int(rng.choice([4, 6, 8, 10, 12]))
        S = random_covariance(dim, rng)
        n_vec = int(rng.choice([2, 4, 6, 8]))
        vs = [rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
              for _ in range(n_vec)]
        worst = max(worst, abs(wick_expectation(S, vs) - pfaffian_expectation(S, vs)))
        assert wick_expectation(S, vs[:n_vec - 1]) == 0
    assert worst <= 1e-10
    print(f"\n[PASS] criterion 7: 100 trials, max |pfaffian - sum| = {worst:.2e}, "
          f"odd moments exactly 0")


def test_criterion_08_cocycle_suite():
    for N in (3, 5, 7):
        for a1 in range(N):
            for a2 in range(N):
                for a3 in range(N):
                    for a4 in range(N):
                        delta = (cocycle_exponent(N, a2, a3, a4)
                                 - cocycle_exponent(N, (a1 + a2) % N, a3, a4)
                                 + cocycle_exponent(N, a1, (a2 + a3) % N, a4)
                                 - cocycle_exponent(N, a1, a2, (a3 + a4) % N)
                                 + cocycle_exponent(N, a1, a2, a3))
                        assert delta % N == 0
    for nu in range(-8, 9):
        for N in (3, 5, 7):
            pred = predicted_free_fermion(nu, N)
            assert (12 * pred.omega_N_exponent).denominator == 1
            if nu % 2 == 0:
                assert (8 * pred.z8_exponent).denominator == 1
    print("\n[PASS] criterion 8: cocycle condition exhaustive for N in {3,5,7}; "
          "omega_N^12 = 1 and z8^8 = 1 exactly for nu in [-8,8]")


def test_criterion_09_mod3_detection(pip_stack3_r12):
    P, part, _ = pip_stack3_r12
    sigma, _, omega3 = twist_statistics(P, 3, part)
    dist_from_one = _arg_dist(omega3, 1.0)
    err = _arg_dist(omega3, np.exp(2j * np.pi / 3))
    assert dist_from_one >= 1.0
    assert err <= 0.1
    print(f"\n[PASS] criterion 9: pip 3-stack R=12 omega3 is {dist_from_one:.3f} rad "
          f"from 1, within {err:.2e} rad of exp(2 pi i/3) (sigma={sigma:.4f})")


def test_criterion_10_stability(qwz_r16):
    P, part, _ = qwz_r16
    base_nu = int(round(chern_number(P, part)))
    base_z2, base_z8 = parity_indices(P, part)
    base_octant = int(round(float(np.angle(base_z8)) / (np.pi / 4))) % 8

    apex = (part.apex[0] + 0.5, part.apex[1] + 0.25)
    shifted = [make_good_partition(apex),
               make_good_partition(part.apex,
                                   tuple(a + 0.3 for a in part.boundary_angles))]
    for alt in shifted:
        nu = int(round(chern_number(P, alt)))
        z2, z8 = parity_indices(P, alt)
        octant = int(round(float(np.angle(z8)) / (np.pi / 4))) % 8
        assert nu == base_nu
        assert z2 == base_z2
        assert octant == base_octant
    print(f"\n[PASS] criterion 10: round(nu)={base_nu}, z2={base_z2}, z8 octant "
          f"{base_octant}/8 unchanged under apex shift (0.5, 0.25) and angle "
          f"shift +0.3 rad")
