"""Triangulated three-sheeted patch of the surface and its image in R^4.

The z-disk is triangulated by concentric rings with 12k vertices on ring k,
so the mesh is invariant under z -> e^{i pi/6} z.  Every planar vertex carries
the three sheets of ``w^3 = z^12 - 1``.  Positions are

    f_theta(p) = Re(e^{i theta} int_{p0}^{p} Psi),   p0 = (0, -1),

integrated edge by edge along a breadth-first spanning tree.

Along a straight segment from ``z_a`` the sheet is continued exactly:

    w(z) = w_a exp( (1/3) sum_k Log((z - zeta_k) / (z_a - zeta_k)) ),

each principal logarithm being continuous on the segment unless it passes
through the branch point ``zeta_k``.
"""
from __future__ import annotations

import math
import warnings
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .constants import lattice_constants
from .curve import N, OMEGA, SurfacePoint, cube_roots, psi_array
from .errors import BranchCollision, DomainError
from .quadrature import QuadratureSpec, integrate_path
from . import reference

BRANCH_POINTS = np.exp(2j * np.pi * np.arange(N) / N)
MIN_BRANCH_DISTANCE = 1e-3
BASE_POINT = SurfacePoint(0j, -1 + 0j)
EDGE_SPEC = QuadratureSpec(abs_tol=1e-13, rel_tol=1e-13)


def continue_along_segment(z_a: complex, w_a: complex, z) -> np.ndarray:
    """Sheet value at the points ``z`` of the segment starting at ``(z_a, w_a)``."""
    z = np.asarray(z, dtype=complex)
    ratio = (z[..., None] - BRANCH_POINTS) / (z_a - BRANCH_POINTS)
    return w_a * np.exp(np.sum(np.log(ratio), axis=-1) / 3)


def segment_integral(z_a: complex, w_a: complex, z_b: complex,
                     spec: QuadratureSpec = EDGE_SPEC) -> tuple[np.ndarray, complex]:
    """``int Psi`` along the straight segment and the sheet value at its end."""
    dz = z_b - z_a

    def integrand(t):
        z = z_a + dz * t
        return psi_array(z, continue_along_segment(z_a, w_a, z)) * dz

    res = integrate_path(integrand, 0.0, 1.0, spec)
    return np.asarray(res.value, dtype=complex), complex(continue_along_segment(z_a, w_a, z_b))


# --- planar triangulation ---------------------------------------------------

def _ring_triangles(inner: list[int], inner_ang: np.ndarray, outer: list[int], outer_ang: np.ndarray):
    """Triangulate the annulus between two closed rings by merging angles."""
    tris = []
    i = j = 0
    ni, no = len(inner), len(outer)
    while i < ni or j < no:
        a_next = inner_ang[(i + 1) % ni] + (2 * math.pi if i + 1 >= ni else 0)
        b_next = outer_ang[(j + 1) % no] + (2 * math.pi if j + 1 >= no else 0)
        if j < no and (i >= ni or b_next <= a_next):
            tris.append((inner[i % ni], outer[j % no], outer[(j + 1) % no]))
            j += 1
        else:
            tris.append((inner[i % ni], outer[j % no], inner[(i + 1) % ni]))
            i += 1
    return tris


def planar_disk(radius: float, refinement: int) -> tuple[np.ndarray, np.ndarray, list[str]]:
    """Vertices and triangles of the ring triangulation of ``|z| <= radius``.

    Ring ``k`` (``k = 1..R`` with ``R = 4 (refinement + 1) + 1``) has radius
    ``radius k / R`` and ``12 k`` vertices, odd rings shifted by half a step.
    Vertices closer than ``MIN_BRANCH_DISTANCE`` to a branch point are pushed
    radially outward (a ``BranchCollision`` warning is issued).
    """
    if radius <= 0:
        raise DomainError(f"radius must be positive, got {radius}")
    if refinement < 0:
        raise DomainError(f"refinement must be >= 0, got {refinement}")
    rings = 4 * (refinement + 1) + 1
    zs = [0j]
    notes: list[str] = []
    ring_idx: list[list[int]] = [[0]]
    ring_ang: list[np.ndarray] = [np.array([0.0])]
    for k in range(1, rings + 1):
        n = 12 * k
        r = radius * k / rings
        ang = 2 * math.pi * (np.arange(n) + 0.5 * (k % 2)) / n
        z = r * np.exp(1j * ang)
        near = np.min(np.abs(z[:, None] - BRANCH_POINTS), axis=1) < MIN_BRANCH_DISTANCE
        if np.any(near):
            msg = f"{int(near.sum())} vertices of ring {k} within {MIN_BRANCH_DISTANCE} of a branch point; moved outward"
            warnings.warn(msg, BranchCollision, stacklevel=3)
            notes.append(msg)
            z[near] *= (r + 2 * MIN_BRANCH_DISTANCE) / r
        ring_idx.append(list(range(len(zs), len(zs) + n)))
        ring_ang.append(ang)
        zs.extend(z.tolist())
    tris = []
    for k in range(1, rings + 1):
        if k == 1:
            ring = ring_idx[1]
            tris += [(0, ring[i], ring[(i + 1) % len(ring)]) for i in range(len(ring))]
        else:
            tris += _ring_triangles(ring_idx[k - 1], ring_ang[k - 1], ring_idx[k], ring_ang[k])
    return np.array(zs, dtype=complex), np.array(tris, dtype=int).reshape(-1, 3), notes


def _contains_branch_point(za, zb, zc) -> np.ndarray:
    """Mask of triangles (arrays of corners) containing a branch point, inclusive."""
    def cross(p, q, r):
        return ((q - p).conjugate() * (r - p)).imag
    out = np.zeros(len(za), dtype=bool)
    for b in BRANCH_POINTS:
        d1, d2, d3 = cross(za, zb, b), cross(zb, zc, b), cross(zc, za, b)
        neg = (d1 < 0) | (d2 < 0) | (d3 < 0)
        pos = (d1 > 0) | (d2 > 0) | (d3 > 0)
        out |= ~(neg & pos)
    return out


# --- the immersed mesh --------------------------------------------------------

@dataclass
class ImmersedMesh:
    """Lifted mesh with 4-D positions.

    Vertex ``3 v + s`` lies over planar vertex ``v`` on the sheet
    ``w = c(z_v) * omega**s`` with ``c`` the principal cube root.
    """

    positions: np.ndarray                      # (V, 4) real
    triangles: np.ndarray                      # (T, 3) vertex indices
    theta: float = 0.0
    z: np.ndarray | None = None                # (V,) complex
    w: np.ndarray | None = None                # (V,) complex
    integrals: np.ndarray | None = None        # (V, 4) complex, int_{p0}^{p} Psi
    parent: np.ndarray | None = None           # spanning-tree parent, -1 at the root
    base_index: int = 0
    lattice: np.ndarray | None = None          # (4, 4) generators for torus reduction
    planar_vertex_count: int = 0
    dropped_triangles: int = 0
    notes: list[str] = field(default_factory=list)
    root_offsets: dict[int, np.ndarray] = field(default_factory=dict)

    @property
    def vertex_count(self) -> int:
        return len(self.positions)

    @property
    def triangle_count(self) -> int:
        return len(self.triangles)

    def source(self, i: int) -> SurfacePoint:
        return SurfacePoint(complex(self.z[i]), complex(self.w[i]))

    @property
    def vertices(self) -> list[tuple[np.ndarray, SurfacePoint]]:
        return [(self.positions[i], self.source(i)) for i in range(self.vertex_count)]

    def edges(self) -> set[tuple[int, int]]:
        out = set()
        for a, b, c in self.triangles:
            for u, v in ((a, b), (b, c), (c, a)):
                out.add((min(u, v), max(u, v)))
        return out

    def reduced_positions(self) -> np.ndarray:
        """Positions reduced into the fundamental parallelepiped of ``lattice``."""
        if self.lattice is None:
            raise DomainError("mesh carries no lattice")
        c = np.linalg.solve(self.lattice, self.positions.T)
        return (self.lattice @ (c - np.floor(c))).T


def lattice_matrix(theta: float) -> np.ndarray | None:
    """Numeric Lambda for theta = 0, Lambda_{pi/2} for theta = pi/2, else None."""
    k = lattice_constants()
    if math.isclose(math.remainder(theta, 2 * math.pi), 0.0, abs_tol=1e-6):
        m = reference.lattice_basis()
    elif math.isclose(math.remainder(theta - math.pi / 2, 2 * math.pi), 0.0, abs_tol=1e-6):
        m = reference.conjugate_lattice_basis()
    else:
        return None
    return np.array([[x.numeric(k.alpha, k.gamma).real for x in row] for row in m])


def _sheet_index(z: complex, w: complex) -> int:
    roots = cube_roots(z**N - 1)
    return int(np.argmin(np.abs(roots - w)))


def build_mesh(radius: float = 1.5, refinement: int = 0, theta: float = 0.0,
               spec: QuadratureSpec = EDGE_SPEC) -> ImmersedMesh:
    """Triangulate, lift to the three sheets and integrate from the base point."""
    zs, planar_tris, notes = planar_disk(radius, refinement)
    corners = zs[planar_tris]
    bad = _contains_branch_point(corners[:, 0], corners[:, 1], corners[:, 2])
    planar_tris = planar_tris[~bad]

    nv = len(zs)
    roots = cube_roots(zs**N - 1)                       # (nv, 3)
    z_all = np.repeat(zs, 3)
    w_all = roots.reshape(-1)

    def lift(u: int, s: int, v: int) -> int:
        w_end = continue_along_segment(zs[u], roots[u, s], zs[v])
        return 3 * v + int(np.argmin(np.abs(roots[v] - w_end)))

    tris = []
    for a, b, c in planar_tris:
        for s in range(3):
            tris.append((3 * a + s, lift(a, s, b), lift(a, s, c)))
    triangles = np.array(tris, dtype=int).reshape(-1, 3)

    adjacency: dict[int, list[int]] = {i: [] for i in range(3 * nv)}
    for a, b, c in triangles:
        for u, v in ((a, b), (b, c), (c, a)):
            adjacency[u].append(v)
            adjacency[v].append(u)

    base = _sheet_index(0j, BASE_POINT.w)
    # over a disk free of branch points the three sheets are disjoint; the
    # other sheets are then attached through the branch point z = 1
    roots_z0 = [base] + [s for s in range(3) if s != base]
    parent = spanning_tree(adjacency, roots_z0)
    tree_roots = [r for r in roots_z0 if parent[r] == -1]
    offsets = {r: branch_offset(w_all[base], w_all[r]) for r in tree_roots}
    integrals = np.full((3 * nv, 4), np.nan, dtype=complex)
    for r in tree_roots:
        integrals[r] = offsets[r]
    for v in _bfs_order(parent, tree_roots):
        p = parent[v]
        val, _ = segment_integral(z_all[p], w_all[p], z_all[v], spec)
        integrals[v] = integrals[p] + val
    positions = np.real(np.exp(1j * theta) * integrals)
    return ImmersedMesh(
        positions=positions, triangles=triangles, theta=theta, z=z_all, w=w_all,
        integrals=integrals, parent=parent, base_index=base, lattice=lattice_matrix(theta),
        planar_vertex_count=nv, dropped_triangles=int(bad.sum()), notes=notes,
        root_offsets=offsets,
    )


def ray_to_branch_point(w0: complex, spec: QuadratureSpec = EDGE_SPEC) -> np.ndarray:
    """``int Psi`` from ``(0, w0)`` to the branch point ``(1, 0)`` along the real axis.

    Parametrized by the distance ``s`` to the branch point, ``z = 1 - s``, so
    the ``s**(-2/3)`` endpoint is regularized without forming ``z - 1``.
    """
    others = BRANCH_POINTS[1:]

    def integrand(s):
        s = np.asarray(s, dtype=float)
        z = 1 - s
        logs = np.log(s) + np.sum(np.log((z[:, None] - others) / (-others)), axis=1)
        w = w0 * np.exp(logs / 3)
        return psi_array(z, w)

    return np.asarray(integrate_path(integrand, 0.0, 1.0, spec, (True, False)).value, dtype=complex)


def branch_offset(w_base: complex, w_root: complex, spec: QuadratureSpec = EDGE_SPEC) -> np.ndarray:
    """``int Psi`` from ``(0, w_base)`` to ``(0, w_root)`` through the branch point z = 1."""
    if w_base == w_root:
        return np.zeros(4, dtype=complex)
    return ray_to_branch_point(w_base, spec) - ray_to_branch_point(w_root, spec)


def spanning_tree(adjacency: dict[int, list[int]], roots: int | Sequence[int],
                  seed: int | None = None) -> np.ndarray:
    """Parent array of a BFS forest; ``seed`` shuffles the neighbour order.

    Roots are tried in order and only start a new tree when not yet reached;
    each tree root has parent -1.
    """
    rng = np.random.default_rng(seed) if seed is not None else None
    roots = [roots] if isinstance(roots, (int, np.integer)) else list(roots)
    parent = np.full(len(adjacency), -2, dtype=int)
    for root in roots:
        if parent[root] != -2:
            continue
        parent[root] = -1
        queue = deque([root])
        while queue:
            u = queue.popleft()
            nbrs = sorted(set(adjacency[u]))
            if rng is not None:
                rng.shuffle(nbrs)
            for v in nbrs:
                if parent[v] == -2:
                    parent[v] = u
                    queue.append(v)
    if np.any(parent == -2):
        raise DomainError("lifted mesh has a component without a vertex over z = 0")
    return parent


def _bfs_order(parent: np.ndarray, roots: Sequence[int]) -> list[int]:
    children: dict[int, list[int]] = {}
    for v, p in enumerate(parent):
        if p >= 0:
            children.setdefault(int(p), []).append(v)
    order, queue = [], deque(roots)
    while queue:
        u = queue.popleft()
        for v in children.get(u, []):
            order.append(v)
            queue.append(v)
    return order


def _path_to_root(parent: np.ndarray, v: int) -> list[int]:
    path = [v]
    while parent[path[-1]] >= 0:
        path.append(int(parent[path[-1]]))
    return path[::-1]


def reduce_mod_lattice(d: np.ndarray, lattice: np.ndarray) -> tuple[np.ndarray, float]:
    """Nearest lattice vector coefficients and the residual after subtracting it."""
    c = np.rint(np.linalg.solve(lattice, d))
    return c, float(np.max(np.abs(d - lattice @ c)))


def complex_period_residual(d: np.ndarray) -> float:
    """Distance of a complex period difference from the period lattice.

    The real part must lie in Lambda and the imaginary part in
    Lambda_{pi/2}; this reduction is valid for every associate angle.
    """
    _, r1 = reduce_mod_lattice(np.real(d), lattice_matrix(0.0))
    _, r2 = reduce_mod_lattice(-np.imag(d), lattice_matrix(math.pi / 2))
    return max(r1, r2)


@dataclass(frozen=True)
class RouteCheck:
    vertex: int
    difference: float          # max |f_1 - f_2| over the four coordinates
    lattice_residual: float    # after removing the nearest lattice vector (inf if none)
    lattice_vector: tuple[int, ...] | None

    def passes(self, direct_tol: float = 1e-8, lattice_tol: float = 1e-6) -> bool:
        return self.difference < direct_tol or self.lattice_residual < lattice_tol


def path_independence(mesh: ImmersedMesh, count: int = 50, seed: int = 0,
                      spec: QuadratureSpec = EDGE_SPEC) -> list[RouteCheck]:
    """Compare positions with a second, randomly ordered spanning tree."""
    adjacency: dict[int, list[int]] = {i: [] for i in range(mesh.vertex_count)}
    for a, b in mesh.edges():
        adjacency[a].append(b)
        adjacency[b].append(a)
    roots = list(mesh.root_offsets) or [mesh.base_index]
    other = spanning_tree(adjacency, roots, seed=seed + 1)
    rng = np.random.default_rng(seed)
    candidates = [v for v in range(mesh.vertex_count) if v not in roots]
    picks = rng.choice(candidates, size=min(count, len(candidates)), replace=False)
    cache: dict[int, np.ndarray] = {r: np.asarray(mesh.integrals[r]) for r in roots}
    out = []
    for v in picks:
        path = _path_to_root(other, int(v))
        for p, q in zip(path, path[1:]):
            if q not in cache:
                val, _ = segment_integral(mesh.z[p], mesh.w[p], mesh.z[q], spec)
                cache[q] = cache[p] + val
        f2 = np.real(np.exp(1j * mesh.theta) * cache[int(v)])
        d = mesh.positions[int(v)] - f2
        if mesh.lattice is not None:
            c, res = reduce_mod_lattice(d, mesh.lattice)
            vec = tuple(int(x) for x in c)
        else:
            res, vec = complex_period_residual(mesh.integrals[int(v)] - cache[int(v)]), None
        out.append(RouteCheck(int(v), float(np.max(np.abs(d))), res, vec))
    return out


def edge_consistency(mesh: ImmersedMesh, count: int | None = None, seed: int = 0,
                     spec: QuadratureSpec = EDGE_SPEC) -> float:
    """Worst gap between ``f_b - f_a`` and a one-step integral along the edge.

    Non-tree edges close loops of the integration tree, so the gap is taken
    modulo periods: the complex difference of the recorded integrals and the
    edge integral is reduced against (Lambda, Lambda_{pi/2}).
    """
    edges = sorted(mesh.edges())
    if count is not None and count < len(edges):
        rng = np.random.default_rng(seed)
        edges = [edges[i] for i in rng.choice(len(edges), size=count, replace=False)]
    worst = 0.0
    for a, b in edges:
        val, w_end = segment_integral(mesh.z[a], mesh.w[a], mesh.z[b], spec)
        if abs(w_end - mesh.w[b]) > 1e-8 * max(1.0, abs(w_end)):
            raise DomainError(f"edge ({a}, {b}) does not join the recorded sheets")
        d = mesh.integrals[b] - mesh.integrals[a] - val
        gap = min(float(np.max(np.abs(d))), complex_period_residual(d))
        worst = max(worst, gap)
    return worst


@dataclass(frozen=True)
class ConformalityCheck:
    checked: int
    passed: int
    worst_angle: float
    worst_stretch: float

    @property
    def fraction(self) -> float:
        return self.passed / self.checked if self.checked else 1.0


def discrete_conformality(mesh: ImmersedMesh, tol: float = 1e-3, branch_radius: float = 0.05,
                          step: float = 1e-4) -> ConformalityCheck:
    """Central-difference tangent vectors at every triangle centroid.

    ``f_u`` and ``f_v`` are ``(f(c + h) - f(c - h)) / 2h`` and the same with
    ``i h``, the increments being integrals of Psi over the short segments
    through the centroid ``c``.  Triangles whose centroid lies within
    ``branch_radius`` of a branch point are skipped.
    """
    nodes, weights = np.polynomial.legendre.leggauss(8)
    rot = np.exp(1j * mesh.theta)
    checked = passed = 0
    worst_angle = worst_stretch = 0.0
    for a, b, c in mesh.triangles:
        zc = (mesh.z[a] + mesh.z[b] + mesh.z[c]) / 3
        if np.min(np.abs(zc - BRANCH_POINTS)) < branch_radius:
            continue
        wc = continue_along_segment(mesh.z[a], mesh.w[a], zc)
        tangents = []
        for direction in (1.0, 1j):
            zq = zc + step * direction * nodes
            wq = continue_along_segment(zc, wc, zq)
            integral = (weights @ psi_array(zq, wq)) * step * direction
            tangents.append(np.real(rot * integral) / (2 * step))
        fu, fv = tangents
        nu, nv = np.linalg.norm(fu), np.linalg.norm(fv)
        angle = abs(fu @ fv) / (nu * nv)
        stretch = abs(nu - nv) / nu
        checked += 1
        worst_angle, worst_stretch = max(worst_angle, angle), max(worst_stretch, stretch)
        if angle < tol and stretch < tol:
            passed += 1
    return ConformalityCheck(checked, passed, worst_angle, worst_stretch)


def phi1_spot_check(mesh: ImmersedMesh, count: int = 20, seed: int = 0) -> float:
    """Worst lattice-reduced gap in ``f(phi1 p) - f(phi1 p0) = B f(p)``.

    ``phi1(z, w) = (e^{i pi/6} z, omega^2 w)`` pulls Psi back to ``B Psi`` with
    ``B = diag(R(pi/2), R(-pi/3))``; the ring triangulation is invariant
    under the rotation, so the image of a mesh vertex is a mesh vertex.
    """
    if mesh.lattice is None:
        raise DomainError("spot check needs a lattice (theta = 0 or pi/2)")
    from .symmetry import PHI1_PULLBACK
    B = np.array([[float(x) for x in row] for row in PHI1_PULLBACK.block])
    def image(i: int) -> int:
        z = np.exp(1j * math.pi / 6) * mesh.z[i]
        w = OMEGA**2 * mesh.w[i]
        j = int(np.argmin(np.abs(mesh.z - z) + np.abs(mesh.w - w)))
        if abs(mesh.z[j] - z) + abs(mesh.w[j] - w) > 1e-9:
            raise DomainError("mesh is not invariant under phi1")
        return j

    rng = np.random.default_rng(seed)
    f0 = mesh.positions[image(mesh.base_index)]
    worst = 0.0
    for i in rng.choice(mesh.vertex_count, size=min(count, mesh.vertex_count), replace=False):
        d = mesh.positions[image(int(i))] - f0 - B @ mesh.positions[int(i)]
        worst = max(worst, reduce_mod_lattice(d, mesh.lattice)[1])
    return worst


# --- export -------------------------------------------------------------------

def parse_projection(spec: str | Sequence[int] | None) -> tuple[int, int, int] | None:
    """``"123"`` or ``(1, 2, 3)`` -> 1-based coordinate triple; None passes through."""
    if spec is None:
        return None
    digits = tuple(int(c) for c in spec) if isinstance(spec, str) else tuple(int(c) for c in spec)
    if len(digits) != 3 or len(set(digits)) != 3 or not all(1 <= d <= 4 for d in digits):
        raise DomainError(f"projection must name three distinct coordinates out of 1..4, got {spec!r}")
    return digits


def attribute_path(obj_path: str | Path) -> Path:
    p = Path(obj_path)
    return p.with_name(p.stem + ".attr.txt")


def export_obj(mesh: ImmersedMesh, path: str | Path,
               projection: str | Sequence[int] | None = None) -> tuple[Path, Path]:
    """Write an ASCII OBJ file and its side-car attribute file.

    The OBJ holds the three chosen coordinates (1, 2, 3 when ``projection`` is
    None); the side-car lists ``index value`` pairs (1-based, as the OBJ face
    records) for the remaining coordinate.
    """
    proj = parse_projection(projection) or (1, 2, 3)
    rest = ({1, 2, 3, 4} - set(proj)).pop()
    path = Path(path)
    side = attribute_path(path)
    pos = np.asarray(mesh.positions, dtype=float).reshape(-1, 4)
    with open(path, "w") as fh:
        fh.write(f"# vertices {len(pos)} faces {len(mesh.triangles)}\n")
        fh.write(f"# coordinates x{proj[0]} x{proj[1]} x{proj[2]}; x{rest} in {side.name}\n")
        for row in pos:
            fh.write("v {:.17g} {:.17g} {:.17g}\n".format(*(row[d - 1] for d in proj)))
        for a, b, c in np.asarray(mesh.triangles, dtype=int).reshape(-1, 3):
            fh.write(f"f {a + 1} {b + 1} {c + 1}\n")
    with open(side, "w") as fh:
        fh.write(f"# vertex x{rest}\n")
        for i, row in enumerate(pos, start=1):
            fh.write(f"{i} {row[rest - 1]:.17g}\n")
    return path, side
