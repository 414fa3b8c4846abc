"""Immersed mesh of the three-sheeted disk and its export."""
import math

import numpy as np
import pytest

from trigsurf.curve import SurfacePoint
from trigsurf.errors import BranchCollision, DomainError
from trigsurf.mesh import (BASE_POINT, BRANCH_POINTS, MIN_BRANCH_DISTANCE, ImmersedMesh,
                           attribute_path, build_mesh, continue_along_segment,
                           discrete_conformality, edge_consistency, export_obj, lattice_matrix,
                           parse_projection, path_independence, phi1_spot_check, planar_disk,
                           reduce_mod_lattice, segment_integral, spanning_tree)


def test_planar_disk_counts():
    zs, tris, notes = planar_disk(1.5, 0)
    rings = 5
    assert len(zs) == 1 + sum(12 * k for k in range(1, rings + 1))
    assert len(tris) == sum(12 * (2 * k - 1) for k in range(1, rings + 1))
    assert notes == []


def test_planar_disk_domain():
    with pytest.raises(DomainError):
        planar_disk(0.0, 0)
    with pytest.raises(DomainError):
        planar_disk(1.0, -1)


def test_branch_collision_warns_and_moves_vertices():
    # ring 4 of 5 at radius 1.25 * 4 / 5 = 1 has vertices at 12th roots of unity
    with pytest.warns(BranchCollision):
        zs, _, notes = planar_disk(1.25, 0)
    assert notes
    assert np.min(np.abs(zs[:, None] - BRANCH_POINTS)) >= MIN_BRANCH_DISTANCE


def test_mesh_counts(base_mesh):
    assert base_mesh.planar_vertex_count == 181
    assert base_mesh.vertex_count == 3 * base_mesh.planar_vertex_count
    assert base_mesh.triangle_count == 3 * (300 - base_mesh.dropped_triangles)
    assert base_mesh.dropped_triangles == 12


def test_base_point_maps_to_origin(base_mesh):
    i = base_mesh.base_index
    assert base_mesh.source(i) == SurfacePoint(BASE_POINT.z, BASE_POINT.w) or \
        abs(base_mesh.w[i] - BASE_POINT.w) < 1e-15
    assert np.all(base_mesh.positions[i] == 0)


def test_vertices_on_curve(base_mesh):
    for _, p in base_mesh.vertices[::7]:
        assert p.on_curve()


def test_positions_are_real_parts(base_mesh, conjugate_mesh):
    assert np.allclose(base_mesh.positions, base_mesh.integrals.real, atol=1e-15)
    assert np.allclose(conjugate_mesh.positions, -base_mesh.integrals.imag, atol=1e-12)


def test_lattices():
    assert lattice_matrix(0.3) is None
    lam, lam2 = lattice_matrix(0.0), lattice_matrix(math.pi / 2)
    assert abs(np.linalg.det(lam)) > 0.1 and abs(np.linalg.det(lam2)) > 0.1


def test_conjugate_mesh_uses_conjugate_lattice(conjugate_mesh):
    assert np.allclose(conjugate_mesh.lattice, lattice_matrix(math.pi / 2))


def test_edge_consistency(base_mesh, conjugate_mesh):
    assert edge_consistency(base_mesh) < 1e-8
    assert edge_consistency(conjugate_mesh, count=200) < 1e-8


def test_path_independence(base_mesh):
    checks = path_independence(base_mesh, count=50)
    assert len(checks) == 50
    assert all(c.passes() for c in checks)
    # at least one route goes around a branch point and differs by a lattice vector
    assert any(c.difference > 1e-8 for c in checks)


def test_path_independence_generic_angle():
    mesh = build_mesh(radius=1.5, refinement=0, theta=0.4)
    assert mesh.lattice is None
    assert all(c.passes() for c in path_independence(mesh, count=20))


def test_small_disk_links_sheets():
    mesh = build_mesh(radius=1.0, refinement=0)
    assert len(mesh.root_offsets) == 3
    assert not np.any(np.isnan(mesh.integrals))
    assert edge_consistency(mesh, count=100) < 1e-8


def test_conformality(base_mesh):
    check = discrete_conformality(base_mesh)
    assert check.checked > 0
    assert check.fraction >= 0.95
    assert check.passed == check.checked


def test_phi1_spot_check(base_mesh):
    assert phi1_spot_check(base_mesh) < 1e-6


def test_segment_integral_against_closed_form():
    # along the real axis from 0 to 1/2 on the sheet w = -1: the first component
    # integrates (1 - z^6) / w^2; compare with a direct quadrature
    val, w_end = segment_integral(0j, -1 + 0j, 0.5 + 0j)
    t = np.linspace(0, 0.5, 20001)
    w = -np.cbrt(1 - t**12)
    f = (1 - t**6) / w**2
    assert abs(val[0] - np.trapezoid(f, t)) < 1e-8
    assert abs(w_end - w[-1]) < 1e-14
    assert abs(continue_along_segment(0j, -1 + 0j, np.array([0.5]))[0] - w[-1]) < 1e-14


def test_spanning_tree_forest():
    adjacency = {0: [1], 1: [0], 2: [3], 3: [2]}
    parent = spanning_tree(adjacency, [0, 2])
    assert list(parent) == [-1, 0, -1, 2]


def test_reduce_mod_lattice():
    lam = lattice_matrix(0.0)
    c, res = reduce_mod_lattice(lam @ np.array([1, -2, 0, 3]) + 1e-9, lam)
    assert tuple(c) == (1, -2, 0, 3) and res < 1e-8


def test_reduced_positions(base_mesh):
    red = base_mesh.reduced_positions()
    coeff = np.linalg.solve(base_mesh.lattice, red.T)
    assert np.all(coeff > -1e-9) and np.all(coeff < 1 + 1e-9)
    with pytest.raises(DomainError):
        ImmersedMesh(np.zeros((0, 4)), np.zeros((0, 3), dtype=int)).reduced_positions()


# --- export ----------------------------------------------------------------

def _records(path):
    lines = path.read_text().splitlines()
    return [l for l in lines if l.startswith("v ")], [l for l in lines if l.startswith("f ")]


def test_export_empty_mesh(tmp_path):
    mesh = ImmersedMesh(np.zeros((0, 4)), np.zeros((0, 3), dtype=int))
    obj, side = export_obj(mesh, tmp_path / "empty.obj")
    v, f = _records(obj)
    assert v == [] and f == []
    assert side.exists()


def test_export_unit_triangle(tmp_path):
    pos = np.array([[0, 0, 0, 5], [1, 0, 0, 6], [0, 1, 0, 7]], dtype=float)
    mesh = ImmersedMesh(pos, np.array([[0, 1, 2]]))
    obj, side = export_obj(mesh, tmp_path / "tri.obj")
    v, f = _records(obj)
    assert len(v) == 3 and f == ["f 1 2 3"]
    assert side == attribute_path(obj) == tmp_path / "tri.attr.txt"
    rows = [l.split() for l in side.read_text().splitlines() if not l.startswith("#")]
    assert rows == [["1", "5"], ["2", "6"], ["3", "7"]]


def test_export_projection(tmp_path):
    pos = np.array([[1, 2, 3, 4]], dtype=float)
    mesh = ImmersedMesh(pos, np.zeros((0, 3), dtype=int))
    obj, side = export_obj(mesh, tmp_path / "p.obj", projection="241")
    assert _records(obj)[0] == ["v 2 4 1"]
    assert side.read_text().splitlines()[1] == "1 3"


def test_export_surface(tmp_path, base_mesh):
    obj, _ = export_obj(base_mesh, tmp_path / "surface.obj", projection=(1, 2, 3))
    v, f = _records(obj)
    assert len(v) == 3 * base_mesh.planar_vertex_count
    assert len(f) == base_mesh.triangle_count
    idx = np.array([[int(x) for x in l.split()[1:]] for l in f])
    assert idx.min() == 1 and idx.max() <= len(v)


@pytest.mark.parametrize("bad", ["12", "125", "112", "1234", (0, 1, 2)])
def test_bad_projection(bad):
    with pytest.raises(DomainError):
        parse_projection(bad)


def test_projection_parsing():
    assert parse_projection(None) is None
    assert parse_projection("341") == (3, 4, 1)


def test_export_to_missing_directory(tmp_path, base_mesh):
    with pytest.raises(OSError):
        export_obj(base_mesh, tmp_path / "missing" / "x.obj")
