import math

import numpy as np
import pytest

import nlstrap


@pytest.fixture(scope="module")
def grid():
    return nlstrap.desk_grid()


def gaussian(grid, r):
    x, y, z = (np.asarray(grid.coords(a)) for a in range(3))
    X, Y, Z = np.meshgrid(x, y, z, indexing="ij")
    return (r * math.pi ** -0.75 * np.exp(-0.5 * (X**2 + Y**2 + Z**2))).astype(complex)


def test_grid_shape(grid):
    assert list(grid.counts) == [32, 32, 64]
    assert grid.cell_volume == pytest.approx(0.125)
    with pytest.raises(ValueError):
        nlstrap.Grid((4, 8, 8), (1.0, 1.0, 1.0))


def test_gaussian_report(grid):
    rep = nlstrap.report(grid, gaussian(grid, 1.0), 3.0)
    assert rep["l2_sq"] == pytest.approx(1.0, rel=1e-8)
    assert rep["doth_sq"] == pytest.approx(2.5, rel=1e-8)
    assert rep["lp1"] == pytest.approx((2 * math.pi) ** -1.5, rel=5e-8)
    assert nlstrap.report(grid, np.zeros((32, 32, 64), complex))["lambda"] is None


def test_spectrum(grid):
    rows = nlstrap.spectrum(grid, 3)
    assert [r[3] for r in rows] == [2.0, 4.0, 4.0]


def test_solve_and_orbit(grid):
    res = nlstrap.solve(grid, r=0.1)
    assert res["status"] == "interior"
    assert res["lambda"] < 2.0
    assert res["J"] < 0.01
    u = res["u"]
    moved = np.exp(1j * 0.4) * nlstrap.shift_x3(grid, u, 2.0)
    assert nlstrap.orbital_distance(grid, moved, u) < 1e-8


def test_rearrangements():
    out = nlstrap.schwarz2d(np.array([[9, 1, 0], [1, 5, 1], [0, 1, 0]], float))
    assert out.tolist() == [[1, 5, 0], [1, 9, 1], [0, 1, 0]]
    assert nlstrap.symm_decr_1d([0, 3, 1, 2, 0]) == [0, 2, 3, 1, 0]


def test_evolve_conserves_mass(grid):
    u = gaussian(grid, 0.5)
    tr = nlstrap.evolve(grid, u, t_final=0.5, cadence=25)
    assert not tr["collapse"]
    assert tr["mass_drift"] < 1e-12


def test_field_round_trip(grid, tmp_path):
    u = gaussian(grid, 0.3) * (1 + 0.5j)
    path = tmp_path / "g.nls3"
    nlstrap.write_field(path, grid, u)
    g2, v = nlstrap.read_field(path)
    assert list(g2.counts) == list(grid.counts)
    assert np.array_equal(u, v)
    path.write_bytes(b"XXXX" + bytes(40))
    with pytest.raises(nlstrap.FieldIoError, match="bad magic"):
        nlstrap.read_field(path)
