"""Bundled test polytopes and the brute-force reflexive polygon enumerator."""

from __future__ import annotations

import math
from functools import cmp_to_key
from importlib import resources

from ..lattice import (
    LatticePolytope,
    count_interior_points,
    dual,
    format_polytopes,
    is_reflexive,
    normal_form,
    normalized_volume,
    product,
    simplex_pn,
)
from .records import parse_text

DATASETS = ("simplices", "products", "dim2", "dim3")


def _cross(p, q):
    return p[0] * q[1] - p[1] * q[0]


def _angle_cmp(p, q):
    hp = 0 if (p[1] > 0 or (p[1] == 0 and p[0] > 0)) else 1
    hq = 0 if (q[1] > 0 or (q[1] == 0 and q[0] > 0)) else 1
    if hp != hq:
        return hp - hq
    return -_cross(p, q)


def _fan_triangle_clean(p, q):
    # conv(0, p, q) may contain no lattice point besides 0 and points of [p, q]
    xs = (0, p[0], q[0])
    ys = (0, p[1], q[1])
    area = _cross(p, q)
    for x in range(min(xs), max(xs) + 1):
        for y in range(min(ys), max(ys) + 1):
            w = (x, y)
            if w == (0, 0):
                continue
            c1 = _cross(p, w)
            c2 = _cross(w, q)
            c3 = area - c1 - c2  # twice the signed area opposite the origin
            if c1 < 0 or c2 < 0 or c3 < 0:
                continue
            if c3 > 0:
                return False
    return True


def enumerate_unique_interior_polygons(box=4):
    """Every lattice polygon in ``[-box, box]^2`` whose only interior point is 0.

    Vertices are walked counterclockwise around the origin; the polygon is the
    union of its fan triangles, so it is accepted exactly when no fan triangle
    holds a lattice point off its outer edge.
    """
    pts = [
        (x, y)
        for x in range(-box, box + 1)
        for y in range(-box, box + 1)
        if (x, y) != (0, 0) and math.gcd(x, y) == 1
    ]
    pts.sort(key=cmp_to_key(_angle_cmp))
    N = len(pts)
    succ = [[] for _ in range(N)]
    for i in range(N):
        for j in range(i + 1, N):
            if _cross(pts[i], pts[j]) > 0 and _fan_triangle_clean(pts[i], pts[j]):
                succ[i].append(j)
    closing = {
        (i, j)
        for i in range(N)
        for j in range(i)
        if _cross(pts[i], pts[j]) > 0 and _fan_triangle_clean(pts[i], pts[j])
    }

    def turn(a, b, c):
        return _cross((b[0] - a[0], b[1] - a[1]), (c[0] - b[0], c[1] - b[1]))

    found = []

    def extend(path):
        last = path[-1]
        if len(path) >= 3 and (last, path[0]) in closing:
            a, b, s = pts[path[-2]], pts[last], pts[path[0]]
            if turn(a, b, s) > 0 and turn(b, s, pts[path[1]]) > 0:
                found.append([pts[i] for i in path])
        for j in succ[last]:
            if len(path) >= 2 and turn(pts[path[-2]], pts[last], pts[j]) <= 0:
                continue
            extend(path + [j])

    for s in range(N):
        extend([s])
    return found


def reflexive_polygons(box=4):
    """The 16 reflexive polygons, one normal-form representative per class."""
    classes = {}
    for verts in enumerate_unique_interior_polygons(box):
        P = LatticePolytope(verts)
        nf = normal_form(P)
        if nf not in classes:
            if count_interior_points(P) != 1 or not is_reflexive(P):
                raise AssertionError(f"enumerator produced a bad polygon {verts}")
            classes[nf] = LatticePolytope(nf)
    return sorted(classes.values(), key=lambda P: (normalized_volume(P), P.vertices))


def _fan_dual(rays):
    return dual(LatticePolytope(rays))


def curated_dim3():
    e1, e2, e3 = (1, 0, 0), (0, 1, 0), (0, 0, 1)
    return [
        ("P3", simplex_pn(3)),
        ("P1xP1xP1", product(product(simplex_pn(1), simplex_pn(1)), simplex_pn(1))),
        ("P2xP1", product(simplex_pn(2), simplex_pn(1))),
        ("Bl_p P3", _fan_dual([e1, e2, (-1, -1, 1), e3, (0, 0, -1)])),
        ("P(O+O(2)) over P2", _fan_dual([e1, e2, (-1, -1, 2), e3, (0, 0, -1)])),
        ("octahedron", LatticePolytope([e1, e2, e3, (-1, 0, 0), (0, -1, 0), (0, 0, -1)])),
        ("P(1,1,1,3)", _fan_dual([e1, e2, e3, (-1, -1, -3)])),
    ]


def simplices():
    return [(f"P{n}", simplex_pn(n)) for n in range(1, 5)]


def products():
    p1, p2, p3 = simplex_pn(1), simplex_pn(2), simplex_pn(3)
    p1p1 = product(p1, p1)
    return [
        ("P1xP1", p1p1),
        ("P1xP2", product(p1, p2)),
        ("P1xP1xP1", product(p1p1, p1)),
        ("P1xP3", product(p1, p3)),
        ("P2xP2", product(p2, p2)),
        ("P1xP1xP2", product(p1p1, p2)),
        ("P1xP1xP1xP1", product(p1p1, p1p1)),
    ]


def dim2():
    return [(f"polygon vol {normalized_volume(P)}", P) for P in reflexive_polygons()]


GENERATORS = {"simplices": simplices, "products": products, "dim2": dim2, "dim3": curated_dim3}


def render_dataset(name):
    labelled = GENERATORS[name]()
    comments = [f"bundled dataset {name}; record i is labelled below"]
    comments += [f"{i}: {label}" for i, (label, _) in enumerate(labelled)]
    return format_polytopes([P for _, P in labelled], comments)


def dataset_text(name):
    return resources.files("quantvol.data").joinpath(f"{name}.txt").read_text(encoding="utf-8")


def load_dataset(name):
    if name not in DATASETS:
        raise KeyError(f"unknown dataset {name!r}; choose from {', '.join(DATASETS)}")
    return parse_text(dataset_text(name), name)
