import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import constants as sc

from nvpulse.errors import InsufficientSites, UnknownNucleus, ZeroFrequency
from nvpulse.spin_model import (
    CONSTANTS,
    DIAMOND_LATTICE_CONSTANT,
    NuclearSpin,
    SpinBath,
    diamond_sites,
    five_proton_bath,
    format_bath,
    generate_c13_bath,
    hyperfine_components,
    parse_bath,
    point_dipole_hyperfine,
    read_bath,
    write_bath,
)

KHZ = 2 * math.pi * 1e3


def test_gyro_lookup():
    assert CONSTANTS.gyro("H") == CONSTANTS.gyro("1H") == CONSTANTS.gamma_h
    assert CONSTANTS.gyro("13C") == CONSTANTS.gyro("c13") == CONSTANTS.gamma_c13
    with pytest.raises(KeyError):
        CONSTANTS.gyro("N15")


def test_nuclear_spin_validation():
    with pytest.raises(ValueError):
        NuclearSpin((1.0, 2.0), CONSTANTS.gamma_h, "x")
    with pytest.raises(ValueError):
        NuclearSpin((1.0, math.nan, 0.0), CONSTANTS.gamma_h, "x")
    with pytest.raises(ValueError):
        NuclearSpin((1.0, 0.0, 0.0), -1.0, "x")


def test_bath_labels_unique_and_lookup():
    n = NuclearSpin((0.0, 0.0, 1.0), CONSTANTS.gamma_h, "a")
    with pytest.raises(ValueError):
        SpinBath(1.0, (n, n))
    with pytest.raises(ValueError):
        SpinBath(0.0, (n,))
    bath = SpinBath(1.0, (n,))
    assert bath.nucleus("a") is n
    with pytest.raises(UnknownNucleus):
        bath.nucleus("b")
    with pytest.raises(KeyError):
        bath.nucleus("b")


def test_frame_components_closed_form():
    # A in the x-z plane: omega_j = |(-A_x/2, 0, w_L - A_z/2)|, A^y = |w_hat x A|
    ax, az = 8.0 * KHZ, -3.0 * KHZ
    n = NuclearSpin((ax, 0.0, az), CONSTANTS.gamma_h, "n")
    bath = SpinBath(1.0, (n,))
    wl = CONSTANTS.gamma_h
    fc = hyperfine_components(bath, n)
    w_vec = np.array([-ax / 2, 0.0, wl - az / 2])
    assert fc.omega_j == pytest.approx(np.linalg.norm(w_vec), rel=1e-15)
    w_hat = w_vec / np.linalg.norm(w_vec)
    A = np.array([ax, 0.0, az])
    assert fc.az == pytest.approx(A @ w_hat, rel=1e-12)
    assert fc.ax == pytest.approx(np.linalg.norm(A - (A @ w_hat) * w_hat), rel=1e-12)
    assert fc.ay == pytest.approx(np.linalg.norm(np.cross(w_hat, A)), rel=1e-12)
    x_hat, y_hat, z_hat = fc.axes
    frame = np.vstack(fc.axes)
    np.testing.assert_allclose(frame @ frame.T, np.eye(3), atol=1e-14)
    np.testing.assert_allclose(np.cross(x_hat, y_hat), z_hat, atol=1e-14)


def test_parallel_hyperfine_has_no_transverse_part():
    n = NuclearSpin((0.0, 0.0, 5.0 * KHZ), CONSTANTS.gamma_h, "n")
    fc = hyperfine_components(SpinBath(1.0, (n,)), n)
    assert fc.ax == fc.ay == 0.0
    assert fc.omega_j == pytest.approx(CONSTANTS.gamma_h - 2.5 * KHZ)


def test_zero_precession_raises():
    wl = CONSTANTS.gamma_h * 1e-4
    n = NuclearSpin((0.0, 0.0, 2 * wl), CONSTANTS.gamma_h, "n")
    with pytest.raises(ZeroFrequency):
        hyperfine_components(SpinBath(1e-4, (n,)), n)


@given(st.floats(-50, 50), st.floats(-50, 50), st.floats(-50, 50), st.floats(0.01, 2.0))
@settings(max_examples=200, deadline=None)
def test_frame_decomposition_reconstructs_hyperfine(ax, ay, az, b):
    A = np.array([ax, ay, az]) * KHZ
    n = NuclearSpin(tuple(A), CONSTANTS.gamma_c13, "n")
    fc = hyperfine_components(SpinBath(b, (n,)), n)
    x_hat, _, w_hat = fc.axes
    np.testing.assert_allclose(fc.ax * x_hat + fc.az * w_hat, A, atol=1e-9 * KHZ)
    # |A x w_hat| equals the perpendicular norm
    assert fc.ay == pytest.approx(fc.ax, abs=1e-9 * KHZ)


def test_point_dipole_on_axis():
    r = 1e-9
    A = point_dipole_hyperfine((0.0, 0.0, r), CONSTANTS.gamma_c13)
    pref = sc.mu_0 / (4 * math.pi) * CONSTANTS.gamma_e * CONSTANTS.gamma_c13 * sc.hbar / r**3
    np.testing.assert_allclose(A, [0.0, 0.0, 2 * pref], atol=1e-12 * abs(pref))
    A_eq = point_dipole_hyperfine((r, 0.0, 0.0), CONSTANTS.gamma_c13)
    np.testing.assert_allclose(A_eq, [0.0, 0.0, -pref], atol=1e-12 * abs(pref))


def test_diamond_sites_shells():
    a = DIAMOND_LATTICE_CONSTANT
    sites = diamond_sites(0.3e-9)
    d = np.linalg.norm(sites, axis=1)
    # the vacancy has four nearest neighbours at sqrt(3)/4 a; one is the nitrogen
    assert np.isclose(d, math.sqrt(3) / 4 * a, rtol=1e-9, atol=0).sum() == 3
    # 12 second neighbours at a/sqrt(2)
    assert np.isclose(d, a / math.sqrt(2), rtol=1e-9, atol=0).sum() == 12
    # 12 third neighbours at sqrt(11)/4 a = 0.296 nm
    assert np.isclose(d, math.sqrt(11) / 4 * a, rtol=1e-9, atol=0).sum() == 12
    assert len(sites) == 27


def test_generate_bath_is_seeded_and_respects_shell():
    b1 = generate_c13_bath(3, 40)
    b2 = generate_c13_bath(3, 40)
    assert b1 == b2
    assert [n.position for n in b1] == [n.position for n in b2]
    assert b1 != generate_c13_bath(4, 40)
    d = np.array([np.linalg.norm(n.position) for n in b1])
    assert np.all((d >= 0.8e-9) & (d <= 2.5e-9))
    assert all(n.gyro == pytest.approx(CONSTANTS.gamma_c13) for n in b1)


def test_generate_bath_errors():
    with pytest.raises(InsufficientSites):
        generate_c13_bath(0, 10_000, max_distance=1e-9)
    with pytest.raises(ValueError):
        generate_c13_bath(0, 5, min_distance=2e-9, max_distance=1e-9)
    with pytest.raises(ValueError):
        generate_c13_bath(0, 0)


def test_bath_file_round_trip_is_exact(tmp_path):
    bath = generate_c13_bath(11, 30, b_field=0.05)
    path = tmp_path / "b.bath"
    write_bath(bath, path)
    back = read_bath(path)
    assert back.b_field == bath.b_field
    for a, b in zip(bath, back):
        assert a.label == b.label
        assert a.hyperfine == b.hyperfine
        assert a.gyro == b.gyro
    assert format_bath(back) == format_bath(bath)


def test_parse_bath_errors():
    with pytest.raises(ValueError, match="B_z_T"):
        parse_bath("H1 42.577 1 2 3\n")
    with pytest.raises(ValueError, match="line 2"):
        parse_bath("# B_z_T = 1\nH1 42.577 1 2\n")


def test_five_proton_bath_contents():
    bath = five_proton_bath()
    assert bath.labels == ["H1", "H2", "H3", "H4", "H5"]
    assert bath.nucleus("H3").hyperfine == pytest.approx((8.09 * KHZ, 2.66 * KHZ, -1.02 * KHZ))
    assert five_proton_bath(0.5).b_field == 0.5
    assert bath.subset(["H2", "H1"]).labels == ["H2", "H1"]
