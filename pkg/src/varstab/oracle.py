"""Brute-force ground truth for affine systems.

S(p) is enumerated pattern by pattern: for each set I of rows of D that
are active, the KKT system 0 = f(p,x) + b' (A_I' mu + E' nu) with mu >= 0
and gt(p,x) in D, active on I, is a polyhedron in (x, mu, nu) whose
projection to x is one piece of S(p).  Distances are squared Euclidean
distances, so everything stays rational.
"""

from dataclasses import dataclass
from itertools import combinations
from typing import Optional

from .exactmath import ONE, ZERO, dot, is_zero, project_onto_span, solve_affine, vec, zeros
from .polyhedra import (
    PolySet, VCone, conic_coefficients, normal_cone, polyset_from_vrep, polyset_vrep,
)
from .sysmodel import VarSystem, derive_b_at


@dataclass(frozen=True)
class Piece:
    pattern: frozenset
    poly: PolySet
    vertices: tuple
    rays: tuple
    lines: tuple

    @property
    def bounded(self) -> bool:
        return not self.rays and not self.lines


@dataclass(frozen=True)
class SolutionPieces:
    p: tuple
    pieces: tuple

    def is_empty(self) -> bool:
        return not self.pieces

    @property
    def finite(self) -> bool:
        return all(pc.bounded and len(pc.vertices) == 1 for pc in self.pieces)

    def points(self) -> set:
        """The solution set when it is finite."""
        if not self.finite:
            raise ValueError("solution set is not finite")
        return {pc.vertices[0] for pc in self.pieces}

    def contains(self, x) -> bool:
        x = vec(x)
        return any(pc.poly.contains(x) for pc in self.pieces)

    def to_json(self):
        from .status import jsonable
        return {"p": jsonable(self.p),
                "pieces": [{"pattern": sorted(pc.pattern), "vertices": jsonable(pc.vertices),
                            "rays": jsonable(pc.rays), "lines": jsonable(pc.lines)}
                           for pc in self.pieces]}


def _require_affine(sys: VarSystem):
    if not (sys.f.is_affine and sys.g.is_affine):
        raise ValueError("oracle supports affine systems only")


def _gt_affine(sys: VarSystem, p):
    """(M, c) with gt(p,x) = M x + c for the fixed p."""
    gt = sys.gtilde
    p = vec(p)
    c = gt(p + zeros(sys.n))
    M = [tuple(a[sys.l:]) for a in gt.lin]
    return M, c


def _subset(a: Piece, b: Piece) -> bool:
    P = b.poly
    for v in a.vertices:
        if not P.contains(v):
            return False
    for r in list(a.rays) + list(a.lines) + [tuple(-x for x in li) for li in a.lines]:
        if any(dot(row, r) > 0 for row, _ in P.ineq) or any(dot(e, r) != 0 for e, _ in P.eq):
            return False
    return True


def solve_solution_map(sys: VarSystem, p) -> SolutionPieces:
    _require_affine(sys)
    p = vec(p)
    if len(p) != sys.l:
        raise ValueError("parameter has wrong length")
    n, s = sys.n, sys.s
    D = sys.D
    M, c = _gt_affine(sys, p)
    b = sys.local.b                      # constant for affine g
    fx = [tuple(a[sys.l:]) for a in sys.f.lin]
    f0 = sys.f(p + zeros(n))
    rows = D.ineq
    eqs = D.eq
    pieces = []
    for k in range(len(rows) + 1):
        for I in combinations(range(len(rows)), k):
            nm, ne = len(I), len(eqs)
            dim = n + nm + ne
            # multiplier lam = sum mu_i a_i + sum nu_e e
            gens = [rows[i][0] for i in I] + [e for e, _ in eqs]
            bt = [b.T @ gvec for gvec in gens]
            eq, ineq = [], []
            for t in range(n):
                row = tuple(fx[t]) + tuple(v[t] for v in bt)
                eq.append((row, -f0[t]))
            for i, (a, d) in enumerate(rows):
                aM = tuple(dot(a, [M[r][j] for r in range(s)]) for j in range(n)) + zeros(nm + ne)
                rhs = d - dot(a, c)
                (eq if i in I else ineq).append((aM, rhs))
            for e, d in eqs:
                eM = tuple(dot(e, [M[r][j] for r in range(s)]) for j in range(n)) + zeros(nm + ne)
                eq.append((eM, d - dot(e, c)))
            for t in range(nm):
                r = [ZERO] * dim
                r[n + t] = -ONE
                ineq.append((tuple(r), ZERO))
            P = PolySet(dim, ineq, eq)
            verts, rays, lines = polyset_vrep(P)
            if not verts:
                continue
            pv = _dedup([v[:n] for v in verts])
            pr = _dedup([r[:n] for r in rays if not is_zero(r[:n])])
            pl = _dedup([li[:n] for li in lines if not is_zero(li[:n])])
            X = polyset_from_vrep(n, pv, pr, pl)
            piece = Piece(frozenset(I), X, tuple(pv), tuple(pr), tuple(pl))
            if any(_subset(piece, q) for q in pieces):
                continue
            pieces = [q for q in pieces if not _subset(q, piece)]
            pieces.append(piece)
    return SolutionPieces(p, tuple(pieces))


def _dedup(vs):
    out = []
    for v in vs:
        if v not in out:
            out.append(v)
    return out


# -------------------------------------------------------------- distances

def sqdist(x, y) -> object:
    return sum((a - b) ** 2 for a, b in zip(x, y))


def sqdist_to_polyset(x, P: PolySet):
    """Exact squared distance from x to a polyhedron.

    The projection lies in the relative interior of some face, so it is
    the projection onto the affine hull of that face; every feasible such
    candidate is a point of P, hence the minimum over them is exact.
    """
    x = vec(x)
    ineq = list(P.ineq)
    best = None
    for k in range(min(len(ineq), P.dim) + 1):
        for A in combinations(range(len(ineq)), k):
            rows = [ineq[i][0] for i in A] + [e for e, _ in P.eq]
            rhs = [ineq[i][1] for i in A] + [c for _, c in P.eq]
            if rows:
                y0 = solve_affine(rows, rhs, P.dim)
                if y0 is None:
                    continue
                diff = tuple(a - b for a, b in zip(x, y0))
                y = tuple(a - b for a, b in zip(x, project_onto_span(diff, rows, P.dim)))
            else:
                y = x
            if P.contains(y):
                d = sqdist(x, y)
                if best is None or d < best:
                    best = d
    return best


def sqdist_to_solutions(x, S: SolutionPieces):
    """Squared distance to S(p), or None when S(p) is empty."""
    ds = [sqdist_to_polyset(x, pc.poly) for pc in S.pieces]
    ds = [d for d in ds if d is not None]
    return min(ds) if ds else None


def _sample_points(S: SolutionPieces, center, radius_sq):
    pts = []
    for pc in S.pieces:
        for v in pc.vertices:
            if radius_sq is None or sqdist(v, center) <= radius_sq:
                if v not in pts:
                    pts.append(v)
    return pts


@dataclass
class RatioTable:
    rows: list
    max_ratio_sq: Optional[object]
    argmax: Optional[tuple]
    unbounded: bool

    def to_json(self):
        from .status import jsonable
        return {"rows": jsonable(self.rows), "max_ratio_sq": jsonable(self.max_ratio_sq),
                "argmax": jsonable(self.argmax), "unbounded": self.unbounded}


def _grid(grid):
    grid = [vec(p) for p in grid]
    if not grid:
        raise ValueError("empty parameter grid")
    return grid


def sample_calmness(sys: VarSystem, grid, radius_sq=None) -> RatioTable:
    """dist(x, S(pbar))^2 / |p - pbar|^2 over solutions x in S(p) near xbar."""
    _require_affine(sys)
    grid = _grid(grid)
    ref = solve_solution_map(sys, sys.pbar)
    rows, best, arg = [], None, None
    for p in grid:
        den = sqdist(p, sys.pbar)
        if den == 0:
            continue
        S = solve_solution_map(sys, p)
        for x in _sample_points(S, sys.xbar, radius_sq):
            r = sqdist_to_solutions(x, ref) / den
            rows.append({"p": p, "x": x, "ratio_sq": r})
            if best is None or r > best:
                best, arg = r, (p, x)
    return RatioTable(rows, best, arg, False)


def sample_aubin(sys: VarSystem, grid, TP=None, radius_sq=None) -> RatioTable:
    """dist(x, S(p'))^2 / |p - p'|^2 for x in S(p), over pairs of grid points
    whose offsets from pbar lie in TP.  An empty S(p') gives an unbounded ratio."""
    _require_affine(sys)
    grid = _grid(grid)
    if TP is not None:
        grid = [p for p in grid if TP.contains(tuple(a - b for a, b in zip(p, sys.pbar)))]
    sols = {p: solve_solution_map(sys, p) for p in grid}
    rows, best, arg, unbounded = [], None, None, False
    for p in grid:
        for p2 in grid:
            den = sqdist(p, p2)
            if den == 0:
                continue
            for x in _sample_points(sols[p], sys.xbar, radius_sq):
                d = sqdist_to_solutions(x, sols[p2])
                if d is None:
                    rows.append({"p": p, "p2": p2, "x": x, "ratio_sq": None})
                    if not unbounded:
                        arg = (p, p2, x)
                    unbounded = True
                    continue
                r = d / den
                rows.append({"p": p, "p2": p2, "x": x, "ratio_sq": r})
                if not unbounded and (best is None or r > best):
                    best, arg = r, (p, p2, x)
    return RatioTable(rows, best, arg, unbounded)


def verify_solution(sys: VarSystem, p, x) -> bool:
    """-f(p,x) in b' N_D(gt(p,x)) with gt(p,x) in D, by a conic LP."""
    p, x = vec(p), vec(x)
    z = sys.gtilde(p + x)
    if not sys.D.contains(z):
        return False
    N = normal_cone(sys.D, z)
    b = derive_b_at(sys, p, x)
    img = VCone(sys.n, [b.T @ r for r in N.rays], [b.T @ li for li in N.lines])
    return conic_coefficients(img, tuple(-v for v in sys.f(p + x))) is not None
