import numpy as np
import pytest

from artifact import (ComputationError, ConfigError, build_disk_lattice, build_pip,
                      build_qwz, build_trivial, site_projector, spectral_diagnostics,
                      stack, stack_copies, tknn_chern)


@pytest.fixture(scope="module")
def disk4():
    return build_disk_lattice("square", 4.0, majorana_count=4)


@pytest.fixture(scope="module")
def disk2():
    return build_disk_lattice("square", 4.0, majorana_count=2)


def test_qwz_selfdual_structure(disk4):
    h = build_qwz(1.0, disk4)
    H = h.matrix
    assert float(np.max(np.abs(H - H.conj().T))) <= 1e-12
    # JHJ = -H means the matrix is purely imaginary entrywise
    assert float(np.max(np.abs(H.real))) <= 1e-12


@pytest.mark.parametrize("build", [
    lambda g4, g2: build_qwz(1.0, g4),
    lambda g4, g2: build_pip(-1.0, 0.5, g2),
    lambda g4, g2: build_trivial(g2),
])
def test_spectra_come_in_plus_minus_pairs(disk4, disk2, build):
    diag = spectral_diagnostics(build(disk4, disk2))
    assert diag.eigenvalue_symmetry_residual <= 1e-9


def test_trivial_model_is_onsite(disk2):
    h = build_trivial(disk2)
    diag = spectral_diagnostics(h)
    assert diag.min_abs_eigenvalue == pytest.approx(1.0, abs=1e-12)
    assert diag.max_abs_eigenvalue == pytest.approx(1.0, abs=1e-12)
    region = site_projector([0, 3, 7], disk2)
    comm = h.matrix @ region - region @ h.matrix
    assert float(np.max(np.abs(comm))) == 0.0


@pytest.mark.parametrize("u", [0.0, 2.0, -2.0])
def test_qwz_gap_closings_rejected(disk4, u):
    with pytest.raises(ComputationError, match="gapless parameters"):
        build_qwz(u, disk4)


def test_pip_gapless_without_pairing(disk2):
    with pytest.raises(ComputationError, match="gapless parameters"):
        build_pip(-1.0, 0.0, disk2)


def test_pip_strong_pairing_builds(disk2):
    h = build_pip(-5.0, 0.5, disk2)
    assert h.family_tag == "pip"


def test_majorana_count_requirements(disk4, disk2):
    with pytest.raises(ComputationError):
        build_qwz(1.0, disk2)
    with pytest.raises(ComputationError):
        build_pip(-1.0, 0.5, disk4)


def test_tknn_integers():
    assert tknn_chern("qwz", {"u": 1.0}, kgrid=60) == 1
    assert tknn_chern("qwz", {"u": 3.0}, kgrid=60) == 0
    assert tknn_chern("pip", {"mu": -1.0, "delta": 0.5}, kgrid=60) == 1
    assert isinstance(tknn_chern("qwz", {"u": -1.0}, kgrid=60), int)


@pytest.mark.parametrize("u", [0.5, 1.0, 1.5])
def test_tknn_sign_flips_with_mass(u):
    assert tknn_chern("qwz", {"u": -u}, kgrid=60) == -tknn_chern("qwz", {"u": u}, kgrid=60)


def test_tknn_small_grid_rejected():
    with pytest.raises(ConfigError):
        tknn_chern("qwz", {"u": 1.0}, kgrid=10)


def test_tknn_gapless_rejected():
    with pytest.raises(ComputationError, match="gapless parameters"):
        tknn_chern("qwz", {"u": 2.0}, kgrid=60)


def test_stack_requires_matching_sites(disk2):
    other = build_disk_lattice("square", 5.0, majorana_count=2)
    with pytest.raises(ComputationError):
        stack(build_trivial(disk2), build_trivial(other))


def test_stack_interleaves_per_site(disk4, disk2):
    hq = build_qwz(1.0, disk4)
    ht = build_trivial(disk2)
    hs = stack(hq, ht)
    assert hs.geometry.majorana_count == 6
    assert hs.matrix.shape[0] == 6 * len(disk4.sites)
    # per-site block: first 4 rows model one, last 2 rows model two
    blk = hs.matrix[:6, :6]
    assert np.allclose(blk[:4, :4], hq.matrix[:4, :4])
    assert np.allclose(blk[4:, 4:], ht.matrix[:2, :2])
    assert np.allclose(blk[:4, 4:], 0.0)


def test_stack_associative_spectra(disk4, disk2):
    a = build_qwz(1.0, disk4)
    b = build_trivial(disk2)
    c = build_pip(-1.0, 0.5, disk2)
    ev1 = np.linalg.eigvalsh(stack(stack(a, b), c).matrix)
    ev2 = np.linalg.eigvalsh(stack(a, stack(b, c)).matrix)
    assert float(np.max(np.abs(ev1 - ev2))) <= 1e-12


def test_stack_copies_is_kron(disk2):
    h = build_pip(-1.0, 0.5, disk2)
    h3 = stack_copies(h, 3)
    assert h3.geometry.majorana_count == 6
    assert np.allclose(h3.matrix, np.kron(h.matrix, np.eye(3)))
    assert stack_copies(h, 1) is h


def test_stack_copies_validates_count(disk2):
    with pytest.raises(ComputationError):
        stack_copies(build_trivial(disk2), 0)
