"""Polytopes realized as unions of group orbits on the sphere."""
from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import EdgeCountMismatch, NotBuildable, UnknownPolytope
from .orthogroup import PHI, dedup_indices, get_group, homogeneity, orbit, simplex_basis

EDGE_TOL = 1e-9


def _unit(v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


@dataclass(frozen=True)
class PolytopeSpec:
    """Registry entry.

    ``seeds`` holds one unit vector per vertex orbit. ``cross_orbit`` marks
    the two-orbit rhombic solids whose edges join different orbits.
    ``rectify`` names the base polytope whose edge midpoints form the
    vertices (seeds are then derived at build time). ``buildable`` is False
    for rows kept for their closed-form counts only.
    """

    name: str
    group: str
    dim: int
    t: int
    expected_vertices: int
    expected_edges: int
    seeds: tuple = ()
    dual_name: str | None = None
    cross_orbit: bool = False
    rectify: str | None = None
    buildable: bool = True
    length_formula: float | None = None
    note: str = ""

    def to_json(self):
        return {
            "name": self.name,
            "group": self.group,
            "dim": self.dim,
            "t": self.t,
            "vertices": self.expected_vertices,
            "edges": self.expected_edges,
            "dual": self.dual_name,
            "buildable": self.buildable,
            "length_formula": self.length_formula,
            "note": self.note,
        }


@dataclass(frozen=True, eq=False)
class Polytope:
    spec: PolytopeSpec
    vertices: np.ndarray
    edges: np.ndarray
    orbit_labels: np.ndarray = field(default=None)

    @property
    def name(self):
        return self.spec.name

    @property
    def dim(self):
        return self.vertices.shape[1]

    def edge_chords(self):
        v = self.vertices
        return np.linalg.norm(v[self.edges[:, 0]] - v[self.edges[:, 1]], axis=1)

    def edge_angles(self):
        v = self.vertices
        dots = np.einsum("ij,ij->i", v[self.edges[:, 0]], v[self.edges[:, 1]])
        return np.arccos(np.clip(dots, -1.0, 1.0))

    def to_json(self):
        return {
            "name": self.name,
            "vertices": self.vertices.tolist(),
            "edges": self.edges.tolist(),
        }

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True)

    def to_obj(self):
        """OBJ line set; every coordinate of a vertex is written on its ``v`` line."""
        lines = [f"# {self.name}"]
        lines += ["v " + " ".join(f"{c:.17g}" for c in row) for row in self.vertices]
        lines += [f"l {i + 1} {j + 1}" for i, j in self.edges]
        return "\n".join(lines) + "\n"


def parse_obj(text):
    """Vertices and 0-based line elements from an OBJ line set."""
    verts, lines = [], []
    for raw in text.splitlines():
        parts = raw.split()
        if not parts:
            continue
        if parts[0] == "v":
            verts.append([float(x) for x in parts[1:]])
        elif parts[0] == "l":
            idx = [int(x) - 1 for x in parts[1:]]
            lines.extend(zip(idx[:-1], idx[1:]))
    return np.array(verts), np.array(lines, dtype=np.int64).reshape(-1, 2)


# --- closed-form cycle lengths -----------------------------------------------


def _doubling(d):
    return (3 - (-1) ** d) / 2


def tetrahedron_length(d):
    return math.comb(d + 1, 2) * math.acos(-1.0 / d) * _doubling(d)


def octahedron_length(d):
    return (d - 1) * d * math.pi


def cube_length(d):
    return d * 2 ** (d - 1) * math.acos((d - 2) / d) * _doubling(d)


def demicube_length(d):
    """Closed form as tabulated; it always includes the factor 2 for doubling."""
    return 2 * d * (d - 1) * 2 ** (d - 3) * math.acos((d - 4) / d)


def demicube_length_by_parity(d):
    """Length with the factor 2 applied only when ``C(d, 2)`` is odd."""
    factor = 2 if math.comb(d, 2) % 2 else 1
    return factor * d * (d - 1) * 2 ** (d - 3) * math.acos((d - 4) / d)


SQ5 = math.sqrt(5.0)
FIXED_LENGTHS = {
    "icosahedron": 2 * 30 * math.acos(1 / SQ5),
    "dodecahedron": 2 * 30 * math.acos(SQ5 / 3),
    "24-cell": 32 * math.pi,
    "120-cell": 1200 * math.acos((5 + SQ5) / 8),
    "600-cell": 720 * math.acos((1 + SQ5) / 4),
    "cuboctahedron": 8 * math.pi,
    "rhombic dodecahedron": 2 * 24 * math.acos(1 / math.sqrt(3)),
    "icosidodecahedron": 12 * math.pi,
    "rhombic triacontahedron": 2 * 60 * math.acos(math.sqrt((5 + 2 * SQ5) / 15)),
    "2_21": 216 * math.acos(0.25),
    "3_21": 2 * 756 * math.acos(1 / 3),
    "4_21": 2240 * math.pi,
}

#: nearest-neighbour cosine of the unit 120-cell, (1 + 3 sqrt 5) / 8
CELL120_EDGE_COS = (1 + 3 * SQ5) / 8


# --- registry -----------------------------------------------------------------


def _s3(*v):
    return tuple(_unit(v).tolist())


def _tetra_seed(d):
    if d == 3:
        return _s3(1, 1, 1)
    if d == 4:
        return _s3(0, 0, 1, -1)
    q = simplex_basis(d)
    return tuple(_unit(q.T @ np.eye(d + 1)[0]).tolist())


def _family_specs(d):
    """d-tetrahedron, d-octahedron, d-cube, d-demicube and rectified variants."""
    t_name = "tetrahedron" if d == 3 else f"{d}-tetrahedron"
    o_name = "octahedron" if d == 3 else f"{d}-octahedron"
    c_name = "cube" if d == 3 else f"{d}-cube"
    out = [
        PolytopeSpec(
            t_name, f"A{d}", d, 2, d + 1, math.comb(d + 1, 2), (_tetra_seed(d),),
            dual_name=f"{t_name}-dual", length_formula=tetrahedron_length(d),
        ),
        PolytopeSpec(
            f"{t_name}-dual", f"A{d}", d, 2, d + 1, math.comb(d + 1, 2),
            (tuple((-np.array(_tetra_seed(d))).tolist()),), dual_name=t_name,
            length_formula=tetrahedron_length(d),
        ),
        PolytopeSpec(
            o_name, f"B{d}", d, 3, 2 * d, 2 * (d - 1) * d, (tuple(np.eye(d)[0]),),
            dual_name=c_name, length_formula=octahedron_length(d),
        ),
        PolytopeSpec(
            c_name, f"B{d}", d, 3, 2**d, d * 2 ** (d - 1), (tuple(_unit(np.ones(d)).tolist()),),
            dual_name=o_name, length_formula=cube_length(d),
        ),
        PolytopeSpec(
            f"rectified {t_name}", f"A{d}", d, 2, math.comb(d + 1, 2),
            math.comb(d + 1, 2) * (d - 1), rectify=t_name,
        ),
        PolytopeSpec(
            f"rectified {o_name}", f"B{d}", d, 3, 2 * (d - 1) * d,
            2 * (d - 1) * d * (2 * d - 4), rectify=o_name,
        ),
        PolytopeSpec(
            f"rectified {c_name}", f"B{d}", d, 3, d * 2 ** (d - 1),
            d * 2 ** (d - 1) * (d - 1), rectify=c_name,
        ),
    ]
    if d >= 4:
        out.append(
            PolytopeSpec(
                f"{d}-demicube", f"D{d}", d, 3, 2 ** (d - 1), d * (d - 1) * 2 ** (d - 3),
                (tuple(_unit(np.ones(d)).tolist()),), length_formula=demicube_length(d),
            )
        )
    return out


def _fixed_specs():
    ico = _s3(PHI, 1, 0)
    dode = _s3(1, 1, 1)
    h = 0.5
    return [
        PolytopeSpec("cuboctahedron", "B3", 3, 3, 12, 24, (_s3(1, 1, 0),),
                     length_formula=FIXED_LENGTHS["cuboctahedron"]),
        PolytopeSpec("rhombic dodecahedron", "B3", 3, 3, 14, 24, (_s3(1, 1, 1), _s3(1, 0, 0)),
                     dual_name="cuboctahedron", cross_orbit=True,
                     length_formula=FIXED_LENGTHS["rhombic dodecahedron"]),
        PolytopeSpec("icosahedron", "H3", 3, 5, 12, 30, (ico,), dual_name="dodecahedron",
                     length_formula=FIXED_LENGTHS["icosahedron"]),
        PolytopeSpec("dodecahedron", "H3", 3, 5, 20, 30, (dode,), dual_name="icosahedron",
                     length_formula=FIXED_LENGTHS["dodecahedron"]),
        PolytopeSpec("icosidodecahedron", "H3", 3, 5, 30, 60, (_s3(1, 0, 0),),
                     length_formula=FIXED_LENGTHS["icosidodecahedron"]),
        PolytopeSpec("rhombic triacontahedron", "H3", 3, 5, 32, 60, (ico, dode),
                     dual_name="icosidodecahedron", cross_orbit=True,
                     length_formula=FIXED_LENGTHS["rhombic triacontahedron"]),
        PolytopeSpec("rectified icosahedron", "H3", 3, 5, 30, 60, rectify="icosahedron"),
        PolytopeSpec("rectified dodecahedron", "H3", 3, 5, 30, 60, rectify="dodecahedron"),
        PolytopeSpec("24-cell", "F4", 4, 5, 24, 96, (_s3(1, 1, 0, 0),), dual_name="24-cell-dual",
                     length_formula=FIXED_LENGTHS["24-cell"]),
        PolytopeSpec("24-cell-dual", "F4", 4, 5, 24, 96, (_s3(1, 0, 0, 0),), dual_name="24-cell"),
        PolytopeSpec("rectified 24-cell", "F4", 4, 5, 96, 288, rectify="24-cell"),
        PolytopeSpec("600-cell", "H4", 4, 11, 120, 720, (_s3(1, 0, 0, 0),), dual_name="120-cell",
                     length_formula=FIXED_LENGTHS["600-cell"]),
        PolytopeSpec("120-cell", "H4", 4, 11, 600, 1200, (_s3(0, 0, 1, 1),), dual_name="600-cell",
                     length_formula=FIXED_LENGTHS["120-cell"]),
        PolytopeSpec("rectified 600-cell", "H4", 4, 11, 720, 3600, rectify="600-cell"),
        PolytopeSpec("rectified 120-cell", "H4", 4, 11, 1200, 3600, rectify="120-cell"),
        PolytopeSpec("2_21", "E6", 6, 4, 27, 216, buildable=False,
                     length_formula=FIXED_LENGTHS["2_21"],
                     note="not certifiable (E6 enumeration out of scope)"),
        PolytopeSpec("3_21", "E7", 7, 5, 56, 756, buildable=False,
                     length_formula=FIXED_LENGTHS["3_21"],
                     note="not certifiable (E7 enumeration out of scope)"),
        PolytopeSpec("4_21", "E8", 8, 7, 240, 6720, buildable=False,
                     length_formula=FIXED_LENGTHS["4_21"],
                     note="not certifiable (E8 enumeration out of scope)"),
    ]


#: the nine edge-transitive polytopes of R^3 with their homogeneity t
SOLIDS_R3 = (
    ("tetrahedron", "A3", 2, 4, 6),
    ("octahedron", "B3", 3, 6, 12),
    ("cube", "B3", 3, 8, 12),
    ("cuboctahedron", "B3", 3, 12, 24),
    ("rhombic dodecahedron", "B3", 3, 14, 24),
    ("icosahedron", "H3", 5, 12, 30),
    ("dodecahedron", "H3", 5, 20, 30),
    ("icosidodecahedron", "H3", 5, 30, 60),
    ("rhombic triacontahedron", "H3", 5, 32, 60),
)

FAMILY_DIMS = range(3, 7)


@lru_cache(maxsize=None)
def _registry():
    reg = {}
    for d in FAMILY_DIMS:
        for s in _family_specs(d):
            reg[s.name] = s
    for s in _fixed_specs():
        reg[s.name] = s
    return reg


def catalog(filter=None):
    """All registry entries, optionally restricted to names containing ``filter``."""
    specs = list(_registry().values())
    if filter:
        specs = [s for s in specs if filter.lower() in s.name.lower()]
    return specs


_ALIAS = re.compile(r"^(rectified )?(3|d)-(tetrahedron|octahedron|cube)(-dual)?$")


def lookup(name, d=None):
    """Registry entry by name; ``d-octahedron`` style names need ``d``."""
    key = name.strip()
    if key.startswith("d-") or key.startswith("rectified d-"):
        if d is None:
            raise UnknownPolytope(f"{name!r} needs a dimension d")
        key = key.replace("d-", f"{d}-", 1)
    m = _ALIAS.match(key)
    if m and m.group(2) == "3":
        key = f"{m.group(1) or ''}{m.group(3)}{m.group(4) or ''}"
    spec = _registry().get(key)
    if spec is None:
        m = re.match(r"^(rectified )?(\d+)-(tetrahedron|octahedron|cube|demicube)(-dual)?$", key)
        if m and int(m.group(2)) >= 3:
            dd = int(m.group(2))
            spec = {s.name: s for s in _family_specs(dd)}.get(key)
    if spec is None:
        raise UnknownPolytope(name)
    return spec


# --- building -------------------------------------------------------------------


def min_chord_edges(vertices, labels=None, tol=EDGE_TOL):
    """Pairs at minimal chord distance; with ``labels`` only cross-label pairs count."""
    v = np.asarray(vertices, dtype=float)
    n = len(v)
    chord = np.sqrt(np.maximum(2.0 - 2.0 * (v @ v.T), 0.0))
    iu, ju = np.triu_indices(n, k=1)
    c = chord[iu, ju]
    if labels is not None:
        labels = np.asarray(labels)
        mask = labels[iu] != labels[ju]
        iu, ju, c = iu[mask], ju[mask], c[mask]
    keep = c <= c.min() + tol
    return np.stack([iu[keep], ju[keep]], axis=1).astype(np.int64)


def _seeds_for(spec):
    if spec.rectify is None:
        return [np.array(s) for s in spec.seeds]
    base = build_polytope(lookup(spec.rectify))
    i, j = base.edges[0]
    return [_unit(base.vertices[i] + base.vertices[j])]


@lru_cache(maxsize=64)
def _build_cached(spec):
    if not spec.buildable:
        raise NotBuildable(f"{spec.name}: {spec.note}")
    group = get_group(spec.group)
    pts, labels = [], []
    for k, seed in enumerate(_seeds_for(spec)):
        o = orbit(group, seed)
        pts.append(o)
        labels.append(np.full(len(o), k))
    verts = np.concatenate(pts)
    labels = np.concatenate(labels)
    keep = dedup_indices(verts, 1e-9)
    verts, labels = verts[keep], labels[keep]
    if len(verts) != spec.expected_vertices:
        raise EdgeCountMismatch(
            f"{spec.name}: {len(verts)} vertices, expected {spec.expected_vertices}"
        )
    edges = min_chord_edges(verts, labels if spec.cross_orbit else None)
    if len(edges) != spec.expected_edges:
        raise EdgeCountMismatch(f"{spec.name}: {len(edges)} edges, expected {spec.expected_edges}")
    verts.setflags(write=False)
    edges.setflags(write=False)
    return Polytope(spec, verts, edges, labels)


def build_polytope(spec, d=None):
    """Vertices as the union of seed orbits, edges by minimal chord length."""
    if isinstance(spec, str):
        spec = lookup(spec, d)
    return _build_cached(spec)


def vertex_degrees(p):
    """``(degrees, all_even)`` for the edge graph of ``p``."""
    deg = np.bincount(p.edges.ravel(), minlength=len(p.vertices))
    return deg, bool(np.all(deg % 2 == 0))


def is_edge_transitive(p):
    """True when the group maps the first edge onto every edge."""
    group = get_group(p.spec.group)
    perms = group.vertex_permutations(p.vertices)
    i, j = p.edges[0]
    images = np.sort(np.stack([perms[:, i], perms[:, j]], axis=1), axis=1)
    got = {tuple(e) for e in images.tolist()}
    want = {tuple(e) for e in np.sort(p.edges, axis=1).tolist()}
    return got == want


def table_length(spec):
    """The tabulated closed-form cycle length, or None when no formula is listed."""
    if isinstance(spec, str):
        spec = lookup(spec)
    return spec.length_formula


def expected_t(spec):
    return homogeneity(spec.group) if spec.buildable else spec.t
