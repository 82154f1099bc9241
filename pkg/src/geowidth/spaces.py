"""Concrete locally compact CAT(0) model spaces.

Four models share one interface (``dist``, ``geodesic_point``,
``random_point``):

* ``EuclideanSpace(n)`` -- points are length-n float vectors;
* ``HyperbolicPlane`` -- hyperboloid sheet x0^2 - x1^2 - x2^2 = 1, x0 > 0;
* ``MetricTree`` -- a finite simplicial tree with positive edge lengths;
* ``CayleyTree(rank)`` -- the (infinite) Cayley tree of the free group of
  the given rank with unit edge lengths; vertices are reduced words.

On top of the interface the module provides the comparison-inequality
defect functionals (triangle comparison, quadrilateral comparison,
distance convexity) and nearest-point projection onto a geodesic segment.
Defects are signed: nonnegative means the inequality holds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from . import words
from .errors import DomainError, InvalidPointError, ModelMismatchError

TOL = 1e-9

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0  # golden-section step ratio


def golden_section(f: Callable[[float], float], a: float, b: float, tol: float = 1e-10) -> float:
    """Argmin of a unimodal (convex) function on [a, b]."""
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


# ---------------------------------------------------------------------------
# point types for the tree models


@dataclass(frozen=True)
class TreePoint:
    """A point of a finite metric tree.

    Either a vertex (``edge is None``) or an interior point of edge number
    ``edge`` at arclength ``offset`` from the edge's first endpoint.
    Offsets 0 / full length canonicalize to the vertex form.
    """

    vertex: object = None
    edge: Optional[int] = None
    offset: float = 0.0


@dataclass(frozen=True)
class CayleyPoint:
    """A point of the Cayley tree of a free group.

    ``word`` is a vertex (reduced word).  If ``letter`` is nonzero the point
    lies at parameter ``t`` in (0, 1) along the unit edge from ``word``
    toward ``word + (letter,)``; canonical form anchors at the shorter
    endpoint, so ``word + (letter,)`` is always reduced and longer.
    """

    word: words.Word = ()
    letter: int = 0
    t: float = 0.0


class Space:
    """Common interface of the model spaces."""

    model = "abstract"

    def dist(self, p, q) -> float:
        raise NotImplementedError

    def geodesic_point(self, p, q, t: float):
        raise NotImplementedError

    def random_point(self, rng: np.random.Generator):
        raise NotImplementedError

    def validate_point(self, p) -> None:
        raise NotImplementedError

    def same_point(self, p, q, tol: float = TOL) -> bool:
        return self.dist(p, q) <= tol

    def _check_t(self, t: float) -> None:
        if not (0.0 <= t <= 1.0):
            raise DomainError(f"geodesic parameter t={t} outside [0, 1]")


class EuclideanSpace(Space):
    model = "euclidean"

    def __init__(self, dim: int):
        if dim < 1:
            raise DomainError("dimension must be >= 1")
        self.dim = dim

    def point(self, coords) -> np.ndarray:
        x = np.asarray(coords, dtype=float)
        self.validate_point(x)
        return x

    def validate_point(self, p) -> None:
        if not isinstance(p, np.ndarray) or p.shape != (self.dim,):
            raise ModelMismatchError(
                f"expected a length-{self.dim} Euclidean vector, got {p!r}"
            )

    def dist(self, p, q) -> float:
        self.validate_point(p)
        self.validate_point(q)
        return float(np.linalg.norm(p - q))

    def geodesic_point(self, p, q, t: float):
        self._check_t(t)
        self.validate_point(p)
        self.validate_point(q)
        if t == 0.0:
            return p
        if t == 1.0:
            return q
        return (1.0 - t) * p + t * q

    def random_point(self, rng: np.random.Generator):
        return rng.standard_normal(self.dim)


class HyperbolicPlane(Space):
    """Hyperboloid (Minkowski) model; pairing <x,y> = x0 y0 - x1 y1 - x2 y2."""

    model = "hyperbolic"

    #: random points: exponential radius is capped here
    RADIUS_CAP = 10.0

    def point(self, coords) -> np.ndarray:
        x = np.asarray(coords, dtype=float)
        if x.shape != (3,):
            raise ModelMismatchError("hyperbolic points have 3 coordinates")
        return self.normalize(x)

    @staticmethod
    def minkowski(p, q) -> float:
        return float(p[0] * q[0] - p[1] * q[1] - p[2] * q[2])

    def normalize(self, x: np.ndarray) -> np.ndarray:
        m = self.minkowski(x, x)
        if m <= 0.0 or x[0] <= 0.0:
            raise InvalidPointError("point is not on the upper hyperboloid sheet")
        return x / math.sqrt(m)

    def validate_point(self, p) -> None:
        if not isinstance(p, np.ndarray) or p.shape != (3,):
            raise ModelMismatchError(f"expected a hyperboloid point, got {p!r}")
        if abs(self.minkowski(p, p) - 1.0) > 1e-6 or p[0] <= 0.0:
            raise InvalidPointError("point violates x0^2 - x1^2 - x2^2 = 1, x0 > 0")

    def dist(self, p, q) -> float:
        if not (isinstance(p, np.ndarray) and isinstance(q, np.ndarray) and p.shape == (3,) and q.shape == (3,)):
            raise ModelMismatchError("hyperbolic distance expects hyperboloid points")
        # Difference form 2 asinh(|p - q|_M / 2) is stable near coincident
        # points, where acosh(<p, q>) loses half the significant digits.
        v = p - q
        s = v[1] * v[1] + v[2] * v[2] - v[0] * v[0]
        if s <= 0.0:
            return 0.0
        return 2.0 * math.asinh(0.5 * math.sqrt(s))

    def geodesic_point(self, p, q, t: float):
        self._check_t(t)
        if t == 0.0:
            return p
        if t == 1.0:
            return q
        d = self.dist(p, q)
        if d == 0.0:
            return p
        s = math.sinh(d)
        r = (math.sinh((1.0 - t) * d) / s) * p + (math.sinh(t * d) / s) * q
        return self.normalize(r)

    def from_polar(self, radius: float, angle: float) -> np.ndarray:
        return np.array(
            [math.cosh(radius), math.sinh(radius) * math.cos(angle), math.sinh(radius) * math.sin(angle)]
        )

    def random_point(self, rng: np.random.Generator):
        r = min(float(rng.exponential(1.0)), self.RADIUS_CAP)
        theta = float(rng.uniform(0.0, 2.0 * math.pi))
        return self.from_polar(r, theta)

    # tangent-space helpers used by the harmonic relaxation ----------------

    def log(self, p, q) -> np.ndarray:
        """Tangent vector at p pointing to q with Riemannian norm dist(p, q)."""
        d = self.dist(p, q)
        if d < 1e-15:
            return np.zeros(3)
        return d * (q - math.cosh(d) * p) / math.sinh(d)

    def exp(self, p, v: np.ndarray) -> np.ndarray:
        nrm2 = -(self.minkowski(v, v))
        if nrm2 <= 0.0:
            return p
        nrm = math.sqrt(nrm2)
        return self.normalize(math.cosh(nrm) * p + (math.sinh(nrm) / nrm) * v)

    def tangent_norm(self, v: np.ndarray) -> float:
        return math.sqrt(max(-(self.minkowski(v, v)), 0.0))


class MetricTree(Space):
    """A finite simplicial metric tree.

    ``vertices`` is a sequence of hashable ids; ``edges`` a sequence of
    (a, b, length) with length > 0.  Connectivity and acyclicity are
    checked at construction.  All-pairs vertex distances and next-hop
    tables are precomputed, so point distance is O(1) and interpolation
    walks the (short) vertex path.
    """

    model = "tree"

    def __init__(self, vertices: Sequence, edges: Sequence[tuple]):
        self.vertices = list(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise DomainError("duplicate vertex ids")
        self.edges = []
        for e in edges:
            a, b, length = e
            if length <= 0.0:
                raise DomainError(f"edge {a}-{b} has non-positive length {length}")
            if a not in set(self.vertices) or b not in set(self.vertices):
                raise DomainError(f"edge {a}-{b} references unknown vertices")
            self.edges.append((a, b, float(length)))
        n = len(self.vertices)
        if len(self.edges) != n - 1:
            raise DomainError("a tree on n vertices has exactly n-1 edges")
        self._index = {v: i for i, v in enumerate(self.vertices)}
        self._adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]  # (edge_idx, other)
        for k, (a, b, _) in enumerate(self.edges):
            ia, ib = self._index[a], self._index[b]
            self._adj[ia].append((k, ib))
            self._adj[ib].append((k, ia))
        self._edge_by_pair = {}
        for k, (a, b, _) in enumerate(self.edges):
            ia, ib = self._index[a], self._index[b]
            self._edge_by_pair[(ia, ib)] = k
            self._edge_by_pair[(ib, ia)] = k
        self._vdist, self._next_hop = self._all_pairs()
        if not np.all(np.isfinite(self._vdist)):
            raise DomainError("tree is not connected")

    def _all_pairs(self):
        n = len(self.vertices)
        dist = np.full((n, n), np.inf)
        nxt = np.full((n, n), -1, dtype=int)
        for root in range(n):
            dist[root, root] = 0.0
            nxt[root, root] = root
            stack = [root]
            seen = {root}
            parent = {root: root}
            while stack:
                u = stack.pop()
                for k, w in self._adj[u]:
                    if w in seen:
                        continue
                    seen.add(w)
                    parent[w] = u
                    dist[root, w] = dist[root, u] + self.edges[k][2]
                    # first step on the path root -> w
                    nxt[root, w] = w if u == root else nxt[root, u]
                    stack.append(w)
        return dist, nxt

    # point construction and canonicalization -------------------------------

    def vertex_point(self, v) -> TreePoint:
        if v not in self._index:
            raise InvalidPointError(f"unknown vertex {v!r}")
        return TreePoint(vertex=v)

    def edge_point(self, edge: int, offset: float) -> TreePoint:
        if not (0 <= edge < len(self.edges)):
            raise InvalidPointError(f"unknown edge index {edge}")
        a, b, length = self.edges[edge]
        if not (0.0 <= offset <= length):
            raise DomainError(f"offset {offset} outside [0, {length}]")
        if offset == 0.0:
            return TreePoint(vertex=a)
        if offset == length:
            return TreePoint(vertex=b)
        return TreePoint(edge=edge, offset=offset)

    def validate_point(self, p) -> None:
        if not isinstance(p, TreePoint):
            raise ModelMismatchError(f"expected a TreePoint, got {p!r}")
        if p.edge is None:
            if p.vertex not in self._index:
                raise InvalidPointError(f"unknown vertex {p.vertex!r}")
        else:
            if not (0 <= p.edge < len(self.edges)):
                raise InvalidPointError(f"unknown edge index {p.edge}")
            if not (0.0 <= p.offset <= self.edges[p.edge][2]):
                raise DomainError("offset outside the edge")

    def _anchors(self, p: TreePoint) -> list[tuple[int, float]]:
        """(vertex index, arclength from p) pairs for p's endpoint vertices."""
        if p.edge is None:
            return [(self._index[p.vertex], 0.0)]
        a, b, length = self.edges[p.edge]
        return [(self._index[a], p.offset), (self._index[b], length - p.offset)]

    def dist(self, p, q) -> float:
        self.validate_point(p)
        self.validate_point(q)
        if p.edge is not None and p.edge == q.edge:
            return abs(p.offset - q.offset)
        best = math.inf
        for (ip, cp) in self._anchors(p):
            for (iq, cq) in self._anchors(q):
                best = min(best, cp + self._vdist[ip, iq] + cq)
        return best

    def _vertex_path(self, iu: int, iv: int) -> list[int]:
        path = [iu]
        while path[-1] != iv:
            path.append(int(self._next_hop[path[-1], iv]))
        return path

    def _path_breakpoints(self, p: TreePoint, q: TreePoint):
        """The geodesic p -> q as [(point, cumulative arclength), ...]."""
        if p.edge is not None and p.edge == q.edge:
            return [(p, 0.0), (q, abs(p.offset - q.offset))]
        # pick the anchor combination realizing the distance
        best = None
        for (ip, cp) in self._anchors(p):
            for (iq, cq) in self._anchors(q):
                total = cp + self._vdist[ip, iq] + cq
                if best is None or total < best[0] - 1e-15:
                    best = (total, ip, iq, cp, cq)
        total, ip, iq, cp, cq = best
        pts = [(p, 0.0)]
        cum = cp
        vpath = self._vertex_path(ip, iq)
        pts.append((TreePoint(vertex=self.vertices[vpath[0]]), cum))
        for u, w in zip(vpath, vpath[1:]):
            k = self._edge_by_pair[(u, w)]
            cum += self.edges[k][2]
            pts.append((TreePoint(vertex=self.vertices[w]), cum))
        pts.append((q, cum + cq))
        return pts

    def _point_along(self, a: TreePoint, b: TreePoint, s: float) -> TreePoint:
        """Point at arclength s from a toward b, where a, b share an edge or a vertex."""
        if s <= 0.0:
            return a
        # locate the common edge
        if a.edge is not None:
            k = a.edge
            off_a = a.offset
        else:
            ia = self._index[a.vertex]
            if b.edge is not None:
                k = b.edge
            else:
                k = self._edge_by_pair[(ia, self._index[b.vertex])]
            ea, _, length = self.edges[k]
            off_a = 0.0 if a.vertex == ea else length
        if b.edge is not None:
            off_b = b.offset
        else:
            ea, _, length = self.edges[k]
            off_b = 0.0 if b.vertex == ea else length
        direction = 1.0 if off_b >= off_a else -1.0
        return self.edge_point(k, off_a + direction * s)

    def geodesic_point(self, p, q, t: float):
        self._check_t(t)
        if t == 0.0:
            return p
        if t == 1.0:
            return q
        pts = self._path_breakpoints(p, q)
        total = pts[-1][1]
        if total == 0.0:
            return p
        target = t * total
        for (a, ca), (b, cb) in zip(pts, pts[1:]):
            if target <= cb + 1e-15 and cb > ca:
                return self._point_along(a, b, target - ca)
        return q

    def total_length(self) -> float:
        return sum(length for _, _, length in self.edges)

    def random_point(self, rng: np.random.Generator):
        k = int(rng.integers(0, len(self.edges)))
        offset = float(rng.uniform(0.0, self.edges[k][2]))
        return self.edge_point(k, offset)

    @classmethod
    def from_json_dict(cls, data: dict) -> "MetricTree":
        vertices = data["vertices"]
        edges = [(e["a"], e["b"], float(e["len"])) for e in data["edges"]]
        return cls(vertices, edges)

    def to_json_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [{"a": a, "b": b, "len": length} for a, b, length in self.edges],
        }


class CayleyTree(Space):
    """Cayley tree of the free group of rank n, unit edge lengths.

    Vertices are reduced words; the free group acts on itself by left
    translation (see :mod:`geowidth.isometries`).
    """

    model = "cayley"

    #: random vertices use words up to this length
    RANDOM_WORD_CAP = 6

    def __init__(self, rank: int):
        if rank < 1:
            raise DomainError("rank must be >= 1")
        self.rank = rank

    def vertex_point(self, w: words.Word) -> CayleyPoint:
        words.check_alphabet(w, self.rank)
        if words.reduce_word(w) != w:
            raise InvalidPointError("vertex word must be freely reduced")
        return CayleyPoint(word=w)

    def edge_point(self, w: words.Word, letter: int, t: float) -> CayleyPoint:
        """Point at parameter t along the edge from vertex w toward w*letter."""
        if not (0.0 <= t <= 1.0):
            raise DomainError("edge parameter outside [0, 1]")
        words.check_alphabet(w, self.rank)
        if letter == 0 or abs(letter) > self.rank:
            raise InvalidPointError(f"invalid letter {letter}")
        if t == 0.0:
            return CayleyPoint(word=w)
        if t == 1.0:
            return CayleyPoint(word=words.multiply(w, (letter,)))
        if w and w[-1] == -letter:
            # anchor at the shorter endpoint
            return CayleyPoint(word=w[:-1], letter=-letter, t=1.0 - t)
        return CayleyPoint(word=w, letter=letter, t=t)

    def validate_point(self, p) -> None:
        if not isinstance(p, CayleyPoint):
            raise ModelMismatchError(f"expected a CayleyPoint, got {p!r}")
        words.check_alphabet(p.word, self.rank)
        if p.letter != 0:
            if abs(p.letter) > self.rank:
                raise InvalidPointError(f"invalid letter {p.letter}")
            if not (0.0 < p.t < 1.0):
                raise DomainError("interior edge parameter must be in (0, 1)")

    @staticmethod
    def _vdist(u: words.Word, v: words.Word) -> int:
        return len(words.multiply(words.inverse(u), v))

    def _anchors(self, p: CayleyPoint) -> list[tuple[words.Word, float]]:
        if p.letter == 0:
            return [(p.word, 0.0)]
        far = words.multiply(p.word, (p.letter,))
        return [(p.word, p.t), (far, 1.0 - p.t)]

    @staticmethod
    def _same_edge(p: CayleyPoint, q: CayleyPoint) -> bool:
        return p.letter != 0 and q.letter != 0 and p.word == q.word and p.letter == q.letter

    def dist(self, p, q) -> float:
        self.validate_point(p)
        self.validate_point(q)
        if self._same_edge(p, q):
            return abs(p.t - q.t)
        best = math.inf
        for (u, cu) in self._anchors(p):
            for (v, cv) in self._anchors(q):
                best = min(best, cu + self._vdist(u, v) + cv)
        return best

    def _path_breakpoints(self, p: CayleyPoint, q: CayleyPoint):
        if self._same_edge(p, q):
            return [(p, 0.0), (q, abs(p.t - q.t))]
        best = None
        for (u, cu) in self._anchors(p):
            for (v, cv) in self._anchors(q):
                total = cu + self._vdist(u, v) + cv
                if best is None or total < best[0] - 1e-15:
                    best = (total, u, v, cu, cv)
        _, u, v, cu, cv = best
        pts = [(p, 0.0), (CayleyPoint(word=u), cu)]
        cum = cu
        w = words.multiply(words.inverse(u), v)
        cur = u
        for x in w:
            cur = words.multiply(cur, (x,))
            cum += 1.0
            pts.append((CayleyPoint(word=cur), cum))
        pts.append((q, cum + cv))
        return pts

    def _point_along(self, a: CayleyPoint, b: CayleyPoint, s: float) -> CayleyPoint:
        if s <= 0.0:
            return a
        if a.letter != 0:
            w, letter, t0 = a.word, a.letter, a.t
        else:
            w = a.word
            if b.letter != 0:
                # b interior of an edge incident to vertex a
                if b.word == a.word:
                    letter, t0 = b.letter, 0.0
                else:
                    # a is the far endpoint of b's edge
                    letter, t0 = -b.letter, 0.0
                    w = words.multiply(b.word, (b.letter,))
            else:
                step = words.multiply(words.inverse(a.word), b.word)
                letter, t0 = step[0], 0.0
        # direction: toward b along the shared edge
        tb = b.t if (b.letter != 0 and b.word == w and b.letter == letter) else (
            0.0 if (b.letter == 0 and b.word == w) else 1.0
        )
        direction = 1.0 if tb >= t0 else -1.0
        return self.edge_point(w, letter, t0 + direction * s)

    def geodesic_point(self, p, q, t: float):
        self._check_t(t)
        if t == 0.0:
            return p
        if t == 1.0:
            return q
        pts = self._path_breakpoints(p, q)
        total = pts[-1][1]
        if total == 0.0:
            return p
        target = t * total
        for (a, ca), (b, cb) in zip(pts, pts[1:]):
            if target <= cb + 1e-15 and cb > ca:
                return self._point_along(a, b, target - ca)
        return q

    def random_point(self, rng: np.random.Generator):
        k = int(rng.integers(0, self.RANDOM_WORD_CAP + 1))
        letters = []
        for _ in range(k):
            while True:
                x = int(rng.integers(1, self.rank + 1)) * (1 if rng.random() < 0.5 else -1)
                if not letters or letters[-1] != -x:
                    break
            letters.append(x)
        w = tuple(letters)
        if rng.random() < 0.5:
            return CayleyPoint(word=w)
        while True:
            x = int(rng.integers(1, self.rank + 1)) * (1 if rng.random() < 0.5 else -1)
            if not w or w[-1] != -x:
                break
        return self.edge_point(w, x, float(rng.uniform(0.0, 1.0)))


# ---------------------------------------------------------------------------
# comparison-inequality defects (signed; >= 0 means the inequality holds)


def triangle_defect(space: Space, P, Q, R, lam: float) -> float:
    """RHS - LHS of the CAT(0) triangle comparison at fraction lam on [Q, R]."""
    if not (0.0 <= lam <= 1.0):
        raise DomainError("lambda outside [0, 1]")
    q_lam = space.geodesic_point(Q, R, lam)
    d_pq = space.dist(P, Q)
    d_pr = space.dist(P, R)
    d_qr = space.dist(Q, R)
    d_pql = space.dist(P, q_lam)
    rhs = (1.0 - lam) * d_pq**2 + lam * d_pr**2 - lam * (1.0 - lam) * d_qr**2
    return rhs - d_pql**2


def quadrilateral_defect(space: Space, P, Q, R, S, t: float, alpha: float) -> float:
    """RHS - LHS of the Reshetnyak quadrilateral comparison.

    P_t lies on the geodesic P -> S, Q_t on the geodesic Q -> R.
    """
    if not (0.0 <= t <= 1.0 and 0.0 <= alpha <= 1.0):
        raise DomainError("t and alpha must lie in [0, 1]")
    p_t = space.geodesic_point(P, S, t)
    q_t = space.geodesic_point(Q, R, t)
    d_pq = space.dist(P, Q)
    d_rs = space.dist(R, S)
    d_ps = space.dist(P, S)
    d_qr = space.dist(Q, R)
    lhs = space.dist(p_t, q_t) ** 2
    rhs = (
        (1.0 - t) * d_pq**2
        + t * d_rs**2
        - t * (1.0 - t) * (alpha * (d_ps - d_qr) ** 2 + (1.0 - alpha) * (d_rs - d_pq) ** 2)
    )
    return rhs - lhs


def convexity_defect(space: Space, P, Q, R, S, t: float) -> float:
    """Slack in d(P_t, Q_t) <= (1-t) d(P,Q) + t d(R,S) (distance convexity)."""
    p_t = space.geodesic_point(P, S, t)
    q_t = space.geodesic_point(Q, R, t)
    return (1.0 - t) * space.dist(P, Q) + t * space.dist(R, S) - space.dist(p_t, q_t)


def project_to_segment(space: Space, a, b, y, tol: float = 1e-10):
    """Nearest point on the geodesic segment [a, b] to y, with its parameter.

    The objective s -> dist(y, geodesic_point(a, b, s)) is convex on a
    CAT(0) space, so golden-section search finds the global minimum.
    """
    def objective(s: float) -> float:
        return space.dist(y, space.geodesic_point(a, b, s))

    s_star = golden_section(objective, 0.0, 1.0, tol)
    # snap to the endpoints when the optimum sits on the boundary
    if objective(0.0) <= objective(s_star):
        s_star = 0.0
    elif objective(1.0) <= objective(s_star):
        s_star = 1.0
    return space.geodesic_point(a, b, s_star), s_star
