"""Exact lattice-polytope core.

Convention used throughout the package: a polytope ``P`` is the
*anticanonical* polytope of the toric variety ``X`` given by its normal fan.
Lattice points of ``m*P`` index a torus-invariant basis of
``H^0(X, -m K_X)``, so counting them gives the section-space dimension.
The dual polytope ``P*`` is the convex hull of the primitive ray generators
of that fan.  Nothing in this module uses floating point.
"""

from __future__ import annotations

import math
from collections import namedtuple
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations, permutations

from .errors import NotFullDimensional, NotReflexive, ParseError, ResourceLimit

DEFAULT_POINT_BUDGET = 10**8

LatticePoints = namedtuple("LatticePoints", ["count", "points"])


# ---------------------------------------------------------------------------
# small exact linear algebra


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def det(rows):
    """Exact determinant of a square integer (or rational) matrix."""
    n = len(rows)
    if n == 0:
        return 1
    a = [[Fraction(x) for x in row] for row in rows]
    sign = 1
    result = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return 0
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            sign = -sign
        p = a[col][col]
        result *= p
        for r in range(col + 1, n):
            f = a[r][col] / p
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    result *= sign
    return int(result) if result.denominator == 1 else result


def rank(rows):
    a = [[Fraction(x) for x in row] for row in rows]
    if not a:
        return 0
    ncols = len(a[0])
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(len(a)):
            if i != r and a[i][col] != 0:
                f = a[i][col] / a[r][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == len(a):
            break
    return r


def solve(matrix, rhs):
    """Solve a square nonsingular system exactly; returns Fractions."""
    n = len(matrix)
    a = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        a[col], a[piv] = a[piv], a[col]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col] / a[col][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[i][n] / a[i][i] for i in range(n)]


def primitive(v):
    g = 0
    for x in v:
        g = math.gcd(g, x)
    if g == 0:
        return tuple(v)
    return tuple(x // g for x in v)


def _normal_vector(diffs, n):
    # generalized cross product of n-1 vectors in Z^n
    return tuple(
        (-1) ** i * det([row[:i] + row[i + 1:] for row in diffs]) for i in range(n)
    )


def hermite_normal_form(matrix, pivots):
    """Row-style Hermite form ``U @ matrix`` with ``U`` unimodular.

    The first ``pivots`` columns must be linearly independent; they become an
    upper-triangular block with positive diagonal and reduced entries above it.
    """
    a = [list(row) for row in matrix]
    n = len(a)
    for j in range(pivots):
        for i in range(j + 1, n):
            # Euclid on rows j and i in column j
            while a[i][j] != 0:
                q = a[j][j] // a[i][j]
                a[j] = [x - q * y for x, y in zip(a[j], a[i])]
                a[j], a[i] = a[i], a[j]
        if a[j][j] < 0:
            a[j] = [-x for x in a[j]]
        if a[j][j] == 0:
            raise ValueError("pivot columns are not independent")
        for i in range(j):
            q = a[i][j] // a[j][j]
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[j])]
    return a


# ---------------------------------------------------------------------------
# polytope types


@dataclass(frozen=True)
class FacetPresentation:
    """``P = {x : <normal, x> >= -offset}`` for every row."""

    rows: tuple

    @property
    def dim(self):
        return len(self.rows[0][0])

    def contains(self, x, m=1, strict=False):
        if strict:
            return all(_dot(a, x) > -m * b for a, b in self.rows)
        return all(_dot(a, x) >= -m * b for a, b in self.rows)

    def vertices(self):
        """Vertices of the solution polytope (exact, sorted)."""
        n = self.dim
        found = set()
        for combo in combinations(self.rows, n):
            normals = [a for a, _ in combo]
            if det(normals) == 0:
                continue
            x = solve(normals, [-b for _, b in combo])
            if all(_dot(a, x) >= -b for a, b in self.rows):
                found.add(tuple(int(c) if c.denominator == 1 else c for c in x))
        return sorted(found)


def _facets_of_points(points):
    n = len(points[0])
    base = points[0]
    if rank([_sub(p, base) for p in points[1:]]) < n:
        raise NotFullDimensional(f"affine hull of {len(points)} points is not {n}-dimensional")
    found = {}
    for combo in combinations(points, n):
        diffs = [_sub(p, combo[0]) for p in combo[1:]]
        normal = primitive(_normal_vector(diffs, n))
        if not any(normal):
            continue
        c = _dot(normal, combo[0])
        values = [_dot(normal, p) for p in points]
        if c == min(values):
            found[normal] = -c
        elif c == max(values):
            found[tuple(-x for x in normal)] = c
    return tuple(sorted(found.items()))


@dataclass(frozen=True)
class LatticePolytope:
    """Full-dimensional lattice polytope stored by its sorted vertex list.

    Any finite point set may be passed in; non-vertices are dropped on
    construction, so equal polytopes compare equal.
    """

    vertices: tuple
    _facet_rows: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        pts = sorted({tuple(int(c) for c in p) for p in self.vertices})
        if not pts or len(pts[0]) == 0:
            raise NotFullDimensional("empty point set")
        n = len(pts[0])
        if any(len(p) != n for p in pts):
            raise ValueError("points have mixed dimensions")
        rows = _facets_of_points(pts)
        verts = []
        for p in pts:
            tight = [a for a, b in rows if _dot(a, p) == -b]
            if len(tight) >= n and rank(tight) == n:
                verts.append(p)
        object.__setattr__(self, "vertices", tuple(verts))
        object.__setattr__(self, "_facet_rows", rows)

    @property
    def dim(self):
        return len(self.vertices[0])

    def __len__(self):
        return len(self.vertices)

    @cached_property
    def facet_vertex_sets(self):
        """For each facet row, the frozenset of vertex indices lying on it."""
        return tuple(
            frozenset(i for i, v in enumerate(self.vertices) if _dot(a, v) == -b)
            for a, b in self._facet_rows
        )

    @cached_property
    def edges(self):
        n = self.dim
        out = []
        for i, j in combinations(range(len(self.vertices)), 2):
            normals = [
                a
                for (a, _), fs in zip(self._facet_rows, self.facet_vertex_sets)
                if i in fs and j in fs
            ]
            if n == 1 or (normals and rank(normals) == n - 1):
                out.append((i, j))
        return tuple(out)

    @cached_property
    def _levels(self):
        # facet rows of the projections onto the first k coordinates, k = 1..n
        levels = []
        for k in range(1, self.dim):
            proj = LatticePolytope([v[:k] for v in self.vertices])
            levels.append(proj._facet_rows)
        levels.append(self._facet_rows)
        return tuple(levels)

    def transform(self, matrix):
        """Image under the linear map ``x -> matrix @ x``."""
        return LatticePolytope([tuple(_dot(row, v) for row in matrix) for v in self.vertices])

    def translate(self, shift):
        return LatticePolytope([tuple(x + s for x, s in zip(v, shift)) for v in self.vertices])


# ---------------------------------------------------------------------------
# operations


def facets(P):
    return FacetPresentation(P._facet_rows)


def is_reflexive(P):
    return all(b == 1 for _, b in P._facet_rows)


def dual(P):
    if not is_reflexive(P):
        raise NotReflexive("dual is only defined here for reflexive polytopes")
    return LatticePolytope([a for a, _ in P._facet_rows])


def _interval(rows, prefix, m):
    k = len(prefix)
    lo, hi = None, None
    for a, b in rows:
        rhs = -m * b
        for i in range(k):
            rhs -= a[i] * prefix[i]
        c = a[k]
        if c > 0:
            t = -((-rhs) // c)
            if lo is None or t > lo:
                lo = t
        elif c < 0:
            t = rhs // c
            if hi is None or t < hi:
                hi = t
        elif rhs > 0:
            return 1, 0
    return lo, hi


def _check_budget(P, m, budget):
    cand = 1
    for i in range(P.dim - 1):
        coords = [v[i] for v in P.vertices]
        cand *= m * (max(coords) - min(coords)) + 1
    if cand > budget:
        raise ResourceLimit(f"{cand} candidate prefixes exceed the point budget {budget}")


def iter_lattice_points(P, m=1, point_budget=DEFAULT_POINT_BUDGET):
    """Lattice points of ``m*P`` in lexicographic order."""
    if m < 0:
        raise ValueError("dilation factor must be nonnegative")
    _check_budget(P, m, point_budget)
    levels = P._levels
    last = P.dim - 1

    def walk(prefix):
        k = len(prefix)
        lo, hi = _interval(levels[k], prefix, m)
        if k == last:
            for x in range(lo, hi + 1):
                yield prefix + (x,)
        else:
            for x in range(lo, hi + 1):
                yield from walk(prefix + (x,))

    return walk(())


def lattice_points(P, m=1, point_budget=DEFAULT_POINT_BUDGET):
    pts = list(iter_lattice_points(P, m, point_budget))
    return LatticePoints(len(pts), pts)


def lattice_point_sum(P, m=1, point_budget=DEFAULT_POINT_BUDGET):
    """``(count, coordinate sums)`` of ``m*P``, without materializing points."""
    if m < 0:
        raise ValueError("dilation factor must be nonnegative")
    _check_budget(P, m, point_budget)
    levels = P._levels
    n = P.dim
    total = [0] * (n + 1)

    def walk(prefix):
        k = len(prefix)
        lo, hi = _interval(levels[k], prefix, m)
        if lo is None or hi is None or hi < lo:
            return
        if k == n - 1:
            c = hi - lo + 1
            total[0] += c
            for i, x in enumerate(prefix):
                total[i + 1] += c * x
            total[n] += (lo + hi) * c // 2
        else:
            for x in range(lo, hi + 1):
                walk(prefix + (x,))

    walk(())
    return total[0], tuple(total[1:])


def count_lattice_points(P, m=1, point_budget=DEFAULT_POINT_BUDGET):
    return lattice_point_sum(P, m, point_budget)[0]


def count_interior_points(P, m=1, point_budget=DEFAULT_POINT_BUDGET):
    rows = P._facet_rows
    return sum(
        1
        for x in iter_lattice_points(P, m, point_budget)
        if all(_dot(a, x) > -m * b for a, b in rows)
    )


def _affine_dim(P, face):
    pts = [P.vertices[i] for i in sorted(face)]
    return rank([_sub(p, pts[0]) for p in pts[1:]])


def triangulation(P):
    """Pulling triangulation as a list of vertex-index frozensets."""
    memo = {}

    def subfaces(face, d):
        cands = {face & fs for fs in P.facet_vertex_sets}
        return [g for g in cands if g != face and len(g) >= d and _affine_dim(P, g) == d - 1]

    def tri(face, d):
        key = face
        if key in memo:
            return memo[key]
        if len(face) == d + 1:
            out = [face]
        else:
            apex = min(face)
            out = []
            for g in subfaces(face, d):
                if apex in g:
                    continue
                out.extend(s | {apex} for s in tri(g, d - 1))
        memo[key] = out
        return out

    return tri(frozenset(range(len(P.vertices))), P.dim)


def normalized_volume(P):
    """``n! * vol(P)``, the anticanonical degree ``(-K_X)^n``."""
    total = 0
    for simplex in triangulation(P):
        pts = [P.vertices[i] for i in sorted(simplex)]
        total += abs(det([_sub(p, pts[0]) for p in pts[1:]]))
    return total


def edge_directions(P, vertex):
    """Primitive directions of the edges leaving ``vertex``, sorted."""
    idx = P.vertices.index(tuple(vertex))
    out = []
    for i, j in P.edges:
        if idx in (i, j):
            other = P.vertices[j if i == idx else i]
            out.append(primitive(_sub(other, P.vertices[idx])))
    return sorted(out)


def is_smooth_vertex(P, vertex):
    dirs = edge_directions(P, vertex)
    return len(dirs) == P.dim and abs(det(dirs)) == 1


def smooth_vertices(P):
    return [v for v in P.vertices if is_smooth_vertex(P, v)]


def is_smooth(P):
    if not is_reflexive(P):
        raise NotReflexive("smoothness is checked for reflexive polytopes only")
    return all(is_smooth_vertex(P, v) for v in P.vertices)


# ---------------------------------------------------------------------------
# unimodular normal form


def _hnf_images(P):
    n = P.dim
    verts = list(P.vertices)
    for basis in permutations(range(len(verts)), n):
        cols = [verts[i] for i in basis]
        if det(cols) == 0:
            continue
        rest = [v for i, v in enumerate(verts) if i not in basis]
        matrix = [[c[r] for c in cols + rest] for r in range(n)]
        h = hermite_normal_form(matrix, n)
        yield tuple(sorted(tuple(h[r][c] for r in range(n)) for c in range(len(verts))))


def normal_form(P):
    """Canonical vertex tuple of the GL(n, Z)-orbit of ``P``.

    Exhaustive over ordered bases of vertices; fine for the small polytopes
    handled here (cost grows like ``v!/(v-n)!``).
    """
    return min(_hnf_images(P))


def unimodularly_equivalent(P, Q):
    if P.dim != Q.dim or len(P) != len(Q) or len(P._facet_rows) != len(Q._facet_rows):
        return False
    if normalized_volume(P) != normalized_volume(Q):
        return False
    target = next(_hnf_images(P))
    return any(img == target for img in _hnf_images(Q))


# ---------------------------------------------------------------------------
# standard examples


def simplex_pn(n):
    """Anticanonical polytope of projective n-space."""
    ones = (-1,) * n
    verts = [ones]
    for i in range(n):
        verts.append(tuple(n if j == i else -1 for j in range(n)))
    return LatticePolytope(verts)


def product(P, Q):
    return LatticePolytope([p + q for p in P.vertices for q in Q.vertices])


def unit_simplex(n):
    return LatticePolytope([(0,) * n] + [tuple(int(i == j) for j in range(n)) for i in range(n)])


# ---------------------------------------------------------------------------
# text format
#
#   # optional comment lines
#   n v
#   x_1 ... x_n      (v lines)
#   ...              (records concatenate)


def _int_tokens(line):
    return [int(tok) for tok in line.split()]


def read_polytope_records(text, source=None):
    """Yield ``(index, line_no, polytope_or_ParseError)`` in file order.

    A malformed record produces a ParseError item and parsing resumes at the
    line that broke the record.
    """
    lines = [
        (no, ln.strip())
        for no, ln in enumerate(text.splitlines(), start=1)
        if ln.strip() and not ln.lstrip().startswith("#")
    ]
    pos = 0
    index = 0
    while pos < len(lines):
        no, line = lines[pos]
        try:
            header = _int_tokens(line)
        except ValueError:
            yield index, no, ParseError(f"bad header {line!r}", no, source)
            index += 1
            pos += 1
            continue
        if len(header) != 2 or header[0] < 1 or header[1] < 1:
            yield index, no, ParseError(f"expected header 'n v', got {line!r}", no, source)
            index += 1
            pos += 1
            continue
        n, v = header
        pts = []
        pos += 1
        err = None
        while len(pts) < v:
            if pos >= len(lines):
                err = ParseError(f"record declares {v} vertices, found {len(pts)}", no, source)
                break
            vno, vline = lines[pos]
            try:
                coords = _int_tokens(vline)
            except ValueError:
                coords = None
            if coords is None or len(coords) != n:
                err = ParseError(f"expected {n} integers, got {vline!r}", vno, source)
                break
            pts.append(tuple(coords))
            pos += 1
        if err is None:
            try:
                yield index, no, LatticePolytope(pts)
            except (NotFullDimensional, ValueError) as exc:
                yield index, no, ParseError(str(exc), no, source)
        else:
            yield index, no, err
        index += 1


def format_polytopes(polytopes, comments=()):
    out = [f"# {c}" for c in comments]
    for P in polytopes:
        out.append(f"{P.dim} {len(P)}")
        out.extend(" ".join(str(x) for x in v) for v in P.vertices)
    return "\n".join(out) + "\n"
