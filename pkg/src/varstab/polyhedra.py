"""Polyhedral cones and sets in exact arithmetic.

An :class:`HCone` is ``{z : a_i.z = 0 (i in eq), a_i.z <= 0 (otherwise)}``
and a :class:`VCone` is ``cone(rays) + span(lines)``.  Conversion between
the two goes through the double description method, which runs on
primitive integer vectors.  Faces are identified by their canonical set of
equality rows and are read off the ray/row incidence structure.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import gcd
from typing import Optional

from .exactmath import (
    ONE, ZERO, LinProgram, Q, dot, fmt, is_zero, kernel_basis, lp_solve,
    primitive, primitive_line, rank, strict_feasible_point, unit, vec, zeros,
)


# ---------------------------------------------------------------- types

@dataclass(frozen=True)
class HCone:
    dim: int
    rows: tuple
    eq: frozenset = frozenset()

    def __post_init__(self):
        rows = tuple(vec(r) for r in self.rows)
        for r in rows:
            if len(r) != self.dim:
                raise ValueError("row length does not match dim")
        object.__setattr__(self, "rows", rows)
        eq = frozenset(self.eq)
        if any(i < 0 or i >= len(rows) for i in eq):
            raise ValueError("equality index out of range")
        object.__setattr__(self, "eq", eq)

    @classmethod
    def whole(cls, dim: int) -> "HCone":
        return cls(dim, ())

    @classmethod
    def orthant(cls, dim: int, sign: int = -1) -> "HCone":
        return cls(dim, [vec(-sign * x for x in unit(dim, i)) for i in range(dim)])

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ineq(self) -> list:
        return [i for i in range(len(self.rows)) if i not in self.eq]

    def contains(self, w) -> bool:
        w = vec(w)
        for i, a in enumerate(self.rows):
            v = dot(a, w)
            if v > 0 or (v != 0 and i in self.eq):
                return False
        return True

    def with_rows(self, extra_le=(), extra_eq=()) -> "HCone":
        rows = list(self.rows)
        eq = set(self.eq)
        for a in extra_le:
            rows.append(vec(a))
        for a in extra_eq:
            eq.add(len(rows))
            rows.append(vec(a))
        return HCone(self.dim, rows, eq)

    def __repr__(self):
        rs = ", ".join(("=" if i in self.eq else "<=") + "[" + " ".join(fmt(x) for x in r) + "]"
                       for i, r in enumerate(self.rows))
        return f"HCone(dim={self.dim}: {rs})"


@dataclass(frozen=True)
class VCone:
    dim: int
    rays: tuple = ()
    lines: tuple = ()

    def __post_init__(self):
        rays = tuple(vec(r) for r in self.rays if not is_zero(r))
        lines = tuple(vec(r) for r in self.lines if not is_zero(r))
        for r in rays + lines:
            if len(r) != self.dim:
                raise ValueError("generator length does not match dim")
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "lines", lines)

    def __repr__(self):
        def show(v):
            return "(" + ",".join(fmt(x) for x in v) + ")"
        return (f"VCone(dim={self.dim}, rays=[{', '.join(map(show, self.rays))}], "
                f"lines=[{', '.join(map(show, self.lines))}])")


@dataclass(frozen=True)
class PolySet:
    """{z : A z <= d, E z = c}; rows are stored as (coefficients, rhs) pairs."""

    dim: int
    ineq: tuple = ()
    eq: tuple = ()

    def __post_init__(self):
        def norm(rows):
            out = []
            for a, b in rows:
                a = vec(a)
                if len(a) != self.dim:
                    raise ValueError("row length does not match dim")
                out.append((a, Q(b)))
            return tuple(out)
        object.__setattr__(self, "ineq", norm(self.ineq))
        object.__setattr__(self, "eq", norm(self.eq))

    @classmethod
    def orthant(cls, dim: int) -> "PolySet":
        return cls(dim, [(unit(dim, i), 0) for i in range(dim)])

    def contains(self, z) -> bool:
        z = vec(z)
        return all(dot(a, z) <= b for a, b in self.ineq) and \
            all(dot(e, z) == c for e, c in self.eq)

    def lp(self, objective=()) -> LinProgram:
        return LinProgram(self.dim, objective, self.eq, self.ineq)

    def is_empty(self) -> bool:
        return not lp_solve(self.lp()).optimal

    def with_rows(self, ineq=(), eq=()) -> "PolySet":
        return PolySet(self.dim, self.ineq + tuple(ineq), self.eq + tuple(eq))


FaceId = frozenset


# ------------------------------------------------- double description

def _iprim(v) -> tuple:
    g = 0
    for x in v:
        g = gcd(g, x)
    if g <= 1:
        return tuple(v)
    return tuple(x // g for x in v)


def _to_int(v) -> tuple:
    return tuple(int(x) for x in primitive(vec(v)))


def _idot(a, b) -> int:
    return sum(x * y for x, y in zip(a, b) if x and y)


def _irank(rows) -> int:
    rows = [list(r) for r in rows if any(r)]
    if not rows:
        return 0
    rk = 0
    n = len(rows[0])
    for j in range(n):
        piv = next((i for i in range(rk, len(rows)) if rows[i][j]), None)
        if piv is None:
            continue
        rows[rk], rows[piv] = rows[piv], rows[rk]
        p = rows[rk]
        pj = p[j]
        for i in range(rk + 1, len(rows)):
            c = rows[i][j]
            if c:
                rows[i] = list(_iprim([pj * x - c * y for x, y in zip(rows[i], p)]))
        rk += 1
        if rk == len(rows):
            break
    return rk


class _DD:
    """State of the double description method on integer vectors.

    ``rows`` lists every constraint processed so far (an equality is two
    opposite rows); the cone is span(lines) + cone(rays) and rays are kept
    extreme modulo the lineality space.
    """

    __slots__ = ("dim", "rays", "lines", "rows", "rk")

    def __init__(self, dim, rays, lines, rows, rk):
        self.dim = dim
        self.rays = rays
        self.lines = lines
        self.rows = rows
        self.rk = rk

    @classmethod
    def space(cls, dim: int) -> "_DD":
        lines = [tuple(1 if k == i else 0 for k in range(dim)) for i in range(dim)]
        return cls(dim, [], lines, [], 0)

    def _extreme(self, r, rows, rk) -> bool:
        act = [a for a in rows if _idot(a, r) == 0]
        return _irank(act) == rk - 1

    def add(self, a) -> "_DD":
        """Intersect with the halfspace a.z <= 0."""
        if not any(a):
            return self
        rows = self.rows + [a]
        rk = _irank(rows)
        lv = [_idot(a, l) for l in self.lines]
        k = next((i for i, v in enumerate(lv) if v), None)
        if k is not None:
            l0 = self.lines[k]
            v0 = lv[k]
            if v0 > 0:
                l0 = tuple(-x for x in l0)
                v0 = -v0
            lines = []
            for i, l in enumerate(self.lines):
                if i == k:
                    continue
                lines.append(_iprim([v0 * x - lv[i] * y for x, y in zip(l, l0)]))
            rays = []
            for r in self.rays:
                vr = _idot(a, r)
                rays.append(_iprim([-v0 * x + vr * y for x, y in zip(r, l0)]))
            rays.append(l0)
        else:
            lines = list(self.lines)
            vals = [_idot(a, r) for r in self.rays]
            pos = [r for r, v in zip(self.rays, vals) if v > 0]
            pv = [v for v in vals if v > 0]
            neg = [(r, v) for r, v in zip(self.rays, vals) if v < 0]
            rays = [r for r, v in zip(self.rays, vals) if v <= 0]
            if pos and neg:
                old = self.rows
                zs = {}
                for r in self.rays:
                    zs[r] = frozenset(i for i, b in enumerate(old) if _idot(b, r) == 0)
                for p, vp in zip(pos, pv):
                    for n, vn in neg:
                        common = zs[p] & zs[n]
                        if _irank([old[i] for i in common]) != self.rk - 2:
                            continue
                        rays.append(_iprim([vp * x - vn * y for x, y in zip(n, p)]))
        out = []
        seen = set()
        for r in rays:
            if not any(r):
                continue
            key = frozenset(i for i, b in enumerate(rows) if _idot(b, r) == 0)
            if key in seen or not self._extreme(r, rows, rk):
                continue
            seen.add(key)
            out.append(r)
        return _DD(self.dim, out, lines, rows, rk)

    def add_eq(self, a) -> "_DD":
        return self.add(a).add(tuple(-x for x in a))


def _dd_of(c: HCone) -> _DD:
    st = _DD.space(c.dim)
    ints = [_to_int(a) for a in c.rows]
    for i in sorted(c.eq):
        st = st.add_eq(ints[i])
    for i in c.ineq:
        st = st.add(ints[i])
    return st


def _gens_to_vcone(dim, rays, lines) -> VCone:
    return VCone(dim, [tuple(Fraction(x) for x in r) for r in rays],
                 [primitive_line(tuple(Fraction(x) for x in l)) for l in lines])


@lru_cache(maxsize=4096)
def generators(c: HCone) -> VCone:
    """V-representation of an H-cone: extreme rays modulo lineality plus a lineality basis."""
    st = _dd_of(c)
    return _gens_to_vcone(c.dim, st.rays, st.lines)


hcone_to_vcone = generators


def vcone_to_hcone(v: VCone) -> HCone:
    """Inequality description of cone(rays) + span(lines), via the polar."""
    p = generators(polar_v(v))
    rows = list(p.rays) + list(p.lines)
    return HCone(v.dim, rows, range(len(p.rays), len(rows)))


# ------------------------------------------------------ canonical form

def implicit_rows(c: HCone) -> frozenset:
    """Rows that vanish on the whole cone, decided by a single LP.

    Maximise the sum of slacks s_i in a_i.z + s_i <= 0, 0 <= s_i <= 1.  A
    sum of points, each strict on one row, is strict on all of them, so at
    the optimum s_i = 1 exactly on the rows that can be strict.
    """
    ineq = c.ineq
    k = len(ineq)
    n = c.dim + k
    le = []
    for t, i in enumerate(ineq):
        a = c.rows[i] + tuple(ONE if u == t else ZERO for u in range(k))
        le.append((a, ZERO))
        le.append((zeros(c.dim) + unit(k, t), ONE))
        le.append((zeros(c.dim) + tuple(-x for x in unit(k, t)), ZERO))
    eq = [(c.rows[i] + zeros(k), ZERO) for i in c.eq]
    res = lp_solve(LinProgram(n, zeros(c.dim) + (ONE,) * k, eq, le))
    s = res.point[c.dim:]
    return frozenset(c.eq) | frozenset(i for t, i in enumerate(ineq) if s[t] == 0)


def canonicalize(c: HCone) -> HCone:
    eq = implicit_rows(c)
    if eq == c.eq:
        return c
    return HCone(c.dim, c.rows, eq)


def is_canonical(c: HCone) -> bool:
    return implicit_rows(c) == c.eq


# ---------------------------------------------------------- face lattice

def _incidence(c: HCone):
    g = generators(c)
    inc = [frozenset(k for k, r in enumerate(g.rays) if dot(a, r) == 0) for a in c.rows]
    return g, inc


@lru_cache(maxsize=2048)
def _faces_cached(c: HCone) -> tuple:
    g, inc = _incidence(c)
    nr = len(g.rays)
    allrays = frozenset(range(nr))
    rows = range(c.nrows)

    def close(J):
        R = allrays
        for i in J:
            R = R & inc[i]
        return frozenset(i for i in rows if R <= inc[i])

    top = close(c.eq)
    found = {top}
    todo = [top]
    while todo:
        J = todo.pop()
        for i in rows:
            if i not in J:
                K = close(J | {i})
                if K not in found:
                    found.add(K)
                    todo.append(K)
    return tuple(sorted(found, key=lambda J: (len(J), sorted(J))))


def faces(c: HCone, method: str = "incidence") -> list:
    """All faces of the cone, each as its canonical set J_F of equality rows.

    The default reads faces off the ray/row incidence of the double
    description; ``method="subsets"`` tests every superset of the implicit
    rows for a nonempty relative interior instead.
    """
    c = canonicalize(c)
    if method == "subsets":
        return faces_by_subsets(c)
    return list(_faces_cached(c))


def faces_by_subsets(c: HCone) -> list:
    c = canonicalize(c)
    free = c.ineq
    out = []
    for k in range(len(free) + 1):
        for S in combinations(free, k):
            J = c.eq | frozenset(S)
            if relint_point(c, J) is not None:
                out.append(J)
    return sorted(out, key=lambda J: (len(J), sorted(J)))


def relint_point(c: HCone, J) -> Optional[tuple]:
    """A point with a_i.z = 0 on J and a_i.z < 0 elsewhere, or None."""
    eq = [(c.rows[i], ZERO) for i in J]
    lt = [(c.rows[i], ZERO) for i in range(c.nrows) if i not in J]
    return strict_feasible_point(LinProgram(c.dim, (), eq, (), lt))


def relint_rep(c: HCone, J=None) -> tuple:
    """Relative interior point built from generators (no LP): the sum of rays."""
    F = c if J is None else face_cone(c, J, check=False)
    g = generators(F)
    if g.rays:
        out = zeros(c.dim)
        for r in g.rays:
            out = tuple(x + y for x, y in zip(out, r))
        return out
    if g.lines:
        return g.lines[0]
    return zeros(c.dim)


def face_cone(c: HCone, J, check: bool = True) -> HCone:
    J = frozenset(J)
    if check and J not in faces(c):
        raise ValueError("index set is not a face of the cone")
    return HCone(c.dim, c.rows, J)


def face_diff(c: HCone, J, check: bool = True) -> list:
    """Basis of F - F = {z : a_i.z = 0, i in J}."""
    J = frozenset(J)
    if check and J not in faces(c):
        raise ValueError("index set is not a face of the cone")
    rows = [c.rows[i] for i in sorted(J)]
    if not rows:
        return [unit(c.dim, i) for i in range(c.dim)]
    return kernel_basis(rows, c.dim)


def face_diff_cone(c: HCone, J1, J2) -> HCone:
    """F1 - F2 for faces F2 of F1: zero on J1 and nonpositive on J2 minus J1."""
    J1 = frozenset(J1)
    J2 = frozenset(J2)
    if not J1 <= J2:
        raise ValueError("F2 must be a face of F1")
    idx = sorted(J2)
    rows = [c.rows[i] for i in idx]
    eq = [t for t, i in enumerate(idx) if i in J1]
    return HCone(c.dim, rows, eq)


def minimal_face(c: HCone, w) -> frozenset:
    w = vec(w)
    if not c.contains(w):
        raise ValueError("point is not in the cone")
    return frozenset(i for i, a in enumerate(c.rows) if dot(a, w) == 0)


def ri_contains(c: HCone, J, w) -> bool:
    w = vec(w)
    for i, a in enumerate(c.rows):
        v = dot(a, w)
        if (i in J and v != 0) or (i not in J and v >= 0):
            return False
    return True


# --------------------------------------------------------------- polars

def polar(c: HCone) -> VCone:
    rays = [c.rows[i] for i in c.ineq]
    lines = [c.rows[i] for i in sorted(c.eq)]
    return VCone(c.dim, rays, lines)


def polar_v(v: VCone) -> HCone:
    rows = list(v.rays) + list(v.lines)
    return HCone(v.dim, rows, range(len(v.rays), len(rows)))


def tangent_at(c: HCone, w) -> HCone:
    """T_K(w) = K + span{w}: keep only the rows active at w."""
    J = minimal_face(c, w)
    idx = [i for i in range(c.nrows) if i in J]
    return HCone(c.dim, [c.rows[i] for i in idx],
                 [t for t, i in enumerate(idx) if i in c.eq])


def normal_at(c: HCone, w) -> VCone:
    """N_K(w) = K° ∩ [w]⊥, generated by the rows active at w."""
    J = minimal_face(c, w)
    rays = [c.rows[i] for i in sorted(J) if i not in c.eq]
    lines = [c.rows[i] for i in sorted(c.eq)]
    return VCone(c.dim, rays, lines)


def member(cone, w) -> bool:
    w = vec(w)
    if isinstance(cone, HCone):
        return cone.contains(w)
    return conic_coefficients(cone, w) is not None


def conic_coefficients(v: VCone, w) -> Optional[tuple]:
    """(sigma, tau) with w = sum sigma_k rays_k + sum tau_k lines_k, sigma >= 0, or None."""
    w = vec(w)
    nr, nl = len(v.rays), len(v.lines)
    n = nr + nl
    if n == 0:
        return ((), ()) if is_zero(w) else None
    eq = []
    for t in range(v.dim):
        eq.append((tuple(r[t] for r in v.rays) + tuple(l[t] for l in v.lines), w[t]))
    le = [(tuple(-ONE if u == k else ZERO for u in range(n)), ZERO) for k in range(nr)]
    res = lp_solve(LinProgram(n, (), eq, le))
    if not res.optimal:
        return None
    return res.point[:nr], res.point[nr:]


def is_trivial(cone) -> bool:
    if isinstance(cone, VCone):
        return not cone.rays and not cone.lines
    g = generators(cone)
    return not g.rays and not g.lines


def nonzero_element(cone) -> Optional[tuple]:
    """Some nonzero element of the cone, or None when the cone is {0}."""
    g = generators(cone) if isinstance(cone, HCone) else cone
    if g.rays:
        return g.rays[0]
    if g.lines:
        return g.lines[0]
    return None


def same_cone(c1, c2) -> bool:
    """Set equality via mutual membership of generators."""
    h1 = c1 if isinstance(c1, HCone) else vcone_to_hcone(c1)
    h2 = c2 if isinstance(c2, HCone) else vcone_to_hcone(c2)
    g1 = generators(h1)
    g2 = generators(h2)
    for g, h in ((g1, h2), (g2, h1)):
        for r in g.rays:
            if not h.contains(r):
                return False
        for l in g.lines:
            if not (h.contains(l) and h.contains(tuple(-x for x in l))):
                return False
    return True


# --------------------------------------- cones attached to a polyhedron

def active_rows(D: PolySet, z) -> list:
    z = vec(z)
    if not D.contains(z):
        raise ValueError("infeasible point")
    return [i for i, (a, d) in enumerate(D.ineq) if dot(a, z) == d]


def tangent_cone(D: PolySet, z) -> HCone:
    """T_D(z) = {w : A_I w <= 0, E w = 0}; rows are the active rows then the E rows."""
    I = active_rows(D, z)
    rows = [D.ineq[i][0] for i in I] + [e for e, _ in D.eq]
    return canonicalize(HCone(D.dim, rows, range(len(I), len(rows))))


def normal_cone(D: PolySet, z) -> VCone:
    I = active_rows(D, z)
    return VCone(D.dim, [D.ineq[i][0] for i in I], [e for e, _ in D.eq])


def critical_cone(D: PolySet, z, zstar) -> HCone:
    """K_D(z, z*) = T_D(z) ∩ [z*]⊥, with z* appended as an equality row."""
    zstar = vec(zstar)
    if conic_coefficients(normal_cone(D, z), zstar) is None:
        raise ValueError("not a normal vector")
    T = tangent_cone(D, z)
    return canonicalize(T.with_rows(extra_eq=[zstar]))


# ------------------------------------------------- projections, V <-> H

def project_cone(c: HCone, coords) -> VCone:
    """Image of the cone under the coordinate projection onto coords."""
    g = generators(c)
    coords = list(coords)
    return VCone(len(coords), [tuple(r[i] for i in coords) for r in g.rays],
                 [tuple(l[i] for i in coords) for l in g.lines])


def polyset_vrep(P: PolySet):
    """(vertices, rays, lines) of a polyhedron, by homogenisation."""
    n = P.dim
    rows = [a + (-d,) for a, d in P.ineq] + [zeros(n) + (-ONE,)]
    eqr = [e + (-c,) for e, c in P.eq]
    c = HCone(n + 1, rows + eqr, range(len(rows), len(rows) + len(eqr)))
    g = generators(c)
    verts, rays = [], []
    for r in g.rays:
        if r[n] > 0:
            verts.append(tuple(x / r[n] for x in r[:n]))
        else:
            rays.append(primitive(r[:n]))
    lines = [primitive_line(l[:n]) for l in g.lines]
    return verts, rays, lines


def polyset_from_vrep(dim: int, vertices, rays=(), lines=()) -> PolySet:
    """H-description of conv(vertices) + cone(rays) + span(lines)."""
    if not vertices:
        return PolySet(dim, [(zeros(dim), -ONE)])
    gens = [vec(v) + (ONE,) for v in vertices] + [vec(r) + (ZERO,) for r in rays]
    ls = [vec(l) + (ZERO,) for l in lines]
    h = vcone_to_hcone(VCone(dim + 1, gens, ls))
    ineq, eq = [], []
    for i, a in enumerate(h.rows):
        y, s = a[:dim], a[dim]
        if is_zero(y):
            continue
        (eq if i in h.eq else ineq).append((y, -s))
    return PolySet(dim, ineq, eq)


def project_polyset(P: PolySet, coords) -> PolySet:
    coords = list(coords)
    verts, rays, lines = polyset_vrep(P)
    pick = lambda v: tuple(v[i] for i in coords)
    return polyset_from_vrep(len(coords), [pick(v) for v in verts],
                             [pick(r) for r in rays if not is_zero(pick(r))],
                             [pick(l) for l in lines if not is_zero(pick(l))])


def polyset_point(P: PolySet) -> Optional[tuple]:
    res = lp_solve(P.lp())
    return res.point if res.optimal else None


# ------------------------------------------------ arrangement strata

@dataclass(frozen=True)
class Cell:
    """Relatively open cone: ri of a face of the ambient cone, cut by sign conditions."""

    face: frozenset
    signs: tuple
    closure: HCone
    rep: tuple

    @property
    def is_origin(self) -> bool:
        return is_zero(self.rep)


def arrangement_cells(ambient: HCone, hyperplanes) -> list:
    """Partition the closed cone into sign cells of a central arrangement.

    The cells are the relative interiors of the faces of the ambient cone,
    refined by the sign of each hyperplane; each comes with its closure and
    a relative interior representative.  Signs are -1, 0, +1.
    """
    ambient = canonicalize(ambient)
    hs = [vec(h) for h in hyperplanes]
    hints = [_to_int(h) if not is_zero(h) else tuple(0 for _ in h) for h in hs]
    base = _dd_of(ambient)
    arows = [_to_int(a) for a in ambient.rows]
    cells = []
    for J in faces(ambient):
        st = base
        for i in sorted(J):
            if i not in ambient.eq:
                st = st.add_eq(arows[i])
        cells.append((J, (), st))
    for h in hints:
        nxt = []
        for J, signs, st in cells:
            if any(_idot(h, l) for l in st.lines):
                opts = (-1, 0, 1)
            else:
                vals = [_idot(h, r) for r in st.rays]
                pos = any(v > 0 for v in vals)
                neg = any(v < 0 for v in vals)
                opts = [s for s, ok in ((-1, neg), (0, pos == neg), (1, pos)) if ok]
            for s in opts:
                if s == -1:
                    st2 = st.add(h)
                elif s == 1:
                    st2 = st.add(tuple(-x for x in h))
                else:
                    st2 = st.add_eq(h)
                nxt.append((J, signs + (s,), st2))
        cells = nxt
    out = []
    for J, signs, st in cells:
        rows = list(ambient.rows)
        eq = set(J)
        for h, s in zip(hs, signs):
            if s == 0:
                eq.add(len(rows))
                rows.append(h)
            else:
                rows.append(tuple(-s * x for x in h))
        closure = HCone(ambient.dim, rows, eq)
        if st.rays:
            rep = [0] * ambient.dim
            for r in st.rays:
                rep = [x + y for x, y in zip(rep, r)]
        elif st.lines:
            rep = list(st.lines[0])
        else:
            rep = [0] * ambient.dim
        out.append(Cell(frozenset(J), signs, closure, tuple(Fraction(x) for x in rep)))
    return out


# ----------------------------------------------------------------- JSON

def _row_json(r):
    return [fmt(x) for x in r]


def hcone_to_json(c: HCone) -> dict:
    return {"dim": c.dim,
            "ineq": [_row_json(c.rows[i]) for i in c.ineq],
            "eq": [_row_json(c.rows[i]) for i in sorted(c.eq)]}


def hcone_from_json(obj) -> HCone:
    s = int(obj["dim"])
    rows, eq = [], []

    def strip(r):
        r = vec(r)
        if len(r) == s + 1:
            if r[s] != 0:
                raise ValueError("cone rows must have zero right-hand side")
            r = r[:s]
        if len(r) != s:
            raise ValueError("row length does not match dim")
        return r
    for r in obj.get("ineq", []):
        rows.append(strip(r))
    for r in obj.get("eq", []):
        eq.append(len(rows))
        rows.append(strip(r))
    return HCone(s, rows, eq)


def polyset_to_json(P: PolySet) -> dict:
    return {"dim": P.dim,
            "ineq": [_row_json(a) + [fmt(d)] for a, d in P.ineq],
            "eq": [_row_json(e) + [fmt(c)] for e, c in P.eq]}


def polyset_from_json(obj) -> PolySet:
    s = int(obj["dim"])

    def split(r):
        r = vec(r)
        if len(r) == s:
            return r, ZERO
        if len(r) != s + 1:
            raise ValueError("row length does not match dim")
        return r[:s], r[s]
    return PolySet(s, [split(r) for r in obj.get("ineq", [])],
                   [split(r) for r in obj.get("eq", [])])
