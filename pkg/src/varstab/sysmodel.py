"""The parametric variational system and its multiplier sets.

A system is ``0 in f(p,x) + N^_{Gamma(p,x)}(x)`` with
``Gamma(p,x) = {z : g(p,x,z) in D}``, where f and g are polynomials of
degree at most two with rational coefficients and D is a polyhedron.
Writing ``gt(p,x) = g(p,x,x)`` and ``b(p,x) = d/dz g(p,x,x)``, everything
below is evaluated exactly at a given point.
"""

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Optional

from .exactmath import (
    ONE, ZERO, LinProgram, Q, RatMatrix, dot, fmt, is_zero, lp_solve,
    strict_feasible_point, vec, zeros,
)
from .polyhedra import (
    HCone, PolySet, faces, generators, hcone_from_json, hcone_to_json,
    polyset_from_json, polyset_to_json, tangent_cone,
)


@dataclass(frozen=True)
class PolyFunc2:
    """y -> (c_i + lin_i.y + y' Q_i y)_i with symmetric Q_i."""

    m: int
    const: tuple
    lin: tuple
    quad: tuple

    def __post_init__(self):
        const = vec(self.const)
        lin = tuple(vec(r) for r in self.lin)
        quad = tuple(tuple(vec(r) for r in Qi) for Qi in self.quad)
        k = len(const)
        if len(lin) != k or len(quad) != k:
            raise ValueError("component count mismatch")
        for r in lin:
            if len(r) != self.m:
                raise ValueError("linear part has wrong length")
        for Qi in quad:
            if len(Qi) != self.m or any(len(r) != self.m for r in Qi):
                raise ValueError("quadratic part has wrong shape")
            for a in range(self.m):
                for b in range(a):
                    if Qi[a][b] != Qi[b][a]:
                        raise ValueError("quadratic part must be symmetric")
        object.__setattr__(self, "const", const)
        object.__setattr__(self, "lin", lin)
        object.__setattr__(self, "quad", quad)

    @classmethod
    def affine(cls, A, c=None) -> "PolyFunc2":
        A = [vec(r) for r in A]
        m = len(A[0]) if A else 0
        k = len(A)
        c = zeros(k) if c is None else vec(c)
        return cls(m, c, A, [[zeros(m)] * m for _ in range(k)])

    @property
    def k(self) -> int:
        return len(self.const)

    @property
    def is_affine(self) -> bool:
        return all(not any(any(r) for r in Qi) for Qi in self.quad)

    def __call__(self, y) -> tuple:
        y = vec(y)
        out = []
        for c, a, Qi in zip(self.const, self.lin, self.quad):
            v = c + dot(a, y)
            for i, r in enumerate(Qi):
                if y[i]:
                    v += y[i] * dot(r, y)
            out.append(v)
        return tuple(out)

    def jacobian(self, y) -> RatMatrix:
        y = vec(y)
        rows = []
        for a, Qi in zip(self.lin, self.quad):
            rows.append(tuple(a[j] + 2 * dot(Qi[j], y) for j in range(self.m)))
        return RatMatrix(rows, self.m)

    def hessian(self, i: int) -> RatMatrix:
        return RatMatrix([[2 * x for x in r] for r in self.quad[i]], self.m)

    def substitute(self, S: RatMatrix) -> "PolyFunc2":
        """y -> self(S y') for an m x m' matrix S."""
        St = S.T
        lin = [St @ a for a in self.lin]
        quad = []
        for Qi in self.quad:
            QS = RatMatrix(Qi, self.m) @ S
            quad.append((St @ QS).rows)
        return PolyFunc2(S.ncols, self.const, lin, quad)


@dataclass(frozen=True)
class VarSystem:
    l: int
    n: int
    s: int
    f: PolyFunc2
    g: PolyFunc2
    D: PolySet
    pbar: tuple
    xbar: tuple
    TP: Optional[HCone] = None

    def __post_init__(self):
        object.__setattr__(self, "pbar", vec(self.pbar))
        object.__setattr__(self, "xbar", vec(self.xbar))
        if self.f.m != self.l + self.n or self.f.k != self.n:
            raise ValueError("f must map R^(l+n) to R^n")
        if self.g.m != self.l + 2 * self.n or self.g.k != self.s:
            raise ValueError("g must map R^(l+2n) to R^s")
        if self.D.dim != self.s:
            raise ValueError("D must live in R^s")
        if len(self.pbar) != self.l or len(self.xbar) != self.n:
            raise ValueError("reference point has wrong dimensions")
        if self.TP is not None and self.TP.dim != self.l:
            raise ValueError("parameter tangent cone must live in R^l")
        if not self.D.contains(self.g(self.ybar)):
            raise ValueError("reference point is infeasible: g(pbar, xbar, xbar) is not in D")

    # -- reference data
    @property
    def px(self) -> tuple:
        return self.pbar + self.xbar

    @property
    def ybar(self) -> tuple:
        return self.pbar + self.xbar + self.xbar

    @property
    def m(self) -> int:
        return self.l + self.n

    @cached_property
    def gtilde(self) -> PolyFunc2:
        return derive_gtilde(self)

    @property
    def g_affine(self) -> bool:
        return self.g.is_affine

    @cached_property
    def local(self) -> "LocalData":
        return local_data(self, self.px)

    @property
    def xstar(self) -> tuple:
        return tuple(-x for x in self.f(self.px))

    @property
    def param_cone(self) -> HCone:
        return self.TP if self.TP is not None else HCone.whole(self.l)


def derive_gtilde(sys: VarSystem) -> PolyFunc2:
    l, n = sys.l, sys.n
    S = []
    for i in range(l + n):
        S.append([ONE if j == i else ZERO for j in range(l + n)])
    for i in range(n):
        S.append([ONE if j == l + i else ZERO for j in range(l + n)])
    return sys.g.substitute(RatMatrix(S, l + n))


def derive_b_at(sys: VarSystem, p, x) -> RatMatrix:
    y = vec(p) + vec(x) + vec(x)
    J = sys.g.jacobian(y)
    return J.select_cols(range(sys.l + sys.n, sys.l + 2 * sys.n))


def bterm_matrices(sys: VarSystem) -> list:
    """M_i with d/d(p,x) [b(p,x)' e_i] = M_i; constant since g is quadratic.

    (b' lam)(p,x) = sum_i lam_i grad_z g_i(p,x,x), so the Jacobian of the
    b-term is sum_i lam_i M_i.
    """
    l, n = sys.l, sys.n
    out = []
    for i in range(sys.s):
        H = sys.g.hessian(i).rows
        rows = []
        for k in range(n):
            zk = l + n + k
            row = [H[zk][j] for j in range(l)]
            row += [H[zk][l + j] + H[zk][l + n + j] for j in range(n)]
            rows.append(row)
        out.append(RatMatrix(rows, l + n))
    return out


def lagrangian_grad(sys: VarSystem, lam, at=None) -> RatMatrix:
    """Jacobian of (p,x) -> f(p,x) + b(p,x)' lam, an n x (l+n) matrix."""
    at = sys.px if at is None else vec(at)
    J = sys.f.jacobian(at)
    lam = vec(lam)
    if sys.g_affine or is_zero(lam):
        return J
    for li, M in zip(lam, bterm_matrices(sys)):
        if li:
            J = J + M.scale(li)
    return J


def lagrangian_grad2(sys: VarSystem, lam, at=None) -> RatMatrix:
    """Partial Jacobian in x of the Lagrangian."""
    return lagrangian_grad(sys, lam, at).select_cols(range(sys.l, sys.l + sys.n))


# ------------------------------------------------------------ local data

@dataclass(frozen=True)
class LocalData:
    """Exact first-order data of a system at a point (p, x)."""

    z: tuple            # gt(p,x)
    T: HCone            # T_D(z), canonical
    Tfaces: tuple       # faces of T as canonical index sets
    Jt: RatMatrix       # grad gt(p,x), s x (l+n)
    J2: RatMatrix       # grad_x gt(p,x), s x n
    b: RatMatrix        # grad_z g(p,x,x), s x n
    Jg: RatMatrix       # grad g(p,x,x), s x (l+2n)
    Jf: RatMatrix       # grad f(p,x), n x (l+n)
    Nineq: tuple        # N_D(z) = {lam : lam.r <= 0 for r in Nineq, lam.l = 0 for l in Neq}
    Neq: tuple

    def face_gens(self, J) -> tuple:
        """Generators of T orthogonal to every row in J (rays of the face)."""
        g = generators(self.T)
        return tuple(r for r in g.rays if all(dot(self.T.rows[i], r) == 0 for i in J))


@lru_cache(maxsize=256)
def local_data(sys: VarSystem, px) -> LocalData:
    px = vec(px)
    l, n = sys.l, sys.n
    p, x = px[:l], px[l:]
    z = sys.gtilde(px)
    T = tangent_cone(sys.D, z)
    Jt = sys.gtilde.jacobian(px)
    J2 = Jt.select_cols(range(l, l + n))
    Jg = sys.g.jacobian(p + x + x)
    b = Jg.select_cols(range(l + n, l + 2 * n))
    Jf = sys.f.jacobian(px)
    gT = generators(T)
    return LocalData(z, T, tuple(faces(T)), Jt, J2, b, Jg, Jf,
                     tuple(gT.rays), tuple(gT.lines))


def normal_cone_rows(loc: LocalData):
    """(le rows, eq rows) of N_D(z) in multiplier space, rhs zero."""
    return ([(r, ZERO) for r in loc.Nineq], [(li, ZERO) for li in loc.Neq])


# ------------------------------------------------------- multiplier sets

@dataclass(frozen=True)
class MultiplierPoly:
    poly: PolySet
    tag: str
    anchor: dict = field(default_factory=dict, compare=False, hash=False)
    face: Optional[frozenset] = None

    def point(self) -> Optional[tuple]:
        res = lp_solve(self.poly.lp())
        return res.point if res.optimal else None

    def is_empty(self) -> bool:
        return self.point() is None

    def contains(self, lam) -> bool:
        return self.poly.contains(lam)


def _empty(s: int) -> PolySet:
    return PolySet(s, [(zeros(s), -ONE)])


def _lambda_poly(sys: VarSystem, y, ystar) -> PolySet:
    y = vec(y)
    z = sys.g(y)
    if not sys.D.contains(z):
        raise ValueError("g(y) is not in D")
    T = tangent_cone(sys.D, z)
    gT = generators(T)
    Jg = sys.g.jacobian(y)
    ystar = vec(ystar)
    if len(ystar) != Jg.ncols:
        raise ValueError("ystar has wrong length")
    ineq = [(r, ZERO) for r in gT.rays]
    eq = [(li, ZERO) for li in gT.lines]
    eq += [(Jg.col(j), ystar[j]) for j in range(Jg.ncols)]
    return PolySet(sys.s, ineq, eq)


def multiplier_Lambda(sys: VarSystem, y, ystar) -> MultiplierPoly:
    """{lam in N_D(g(y)) : grad g(y)' lam = ystar}."""
    return MultiplierPoly(_lambda_poly(sys, y, ystar), "Lambda",
                          {"y": vec(y), "ystar": vec(ystar)})


class UnboundedMultipliers(ValueError):
    pass


def curvature_vector(sys: VarSystem, v) -> tuple:
    """c with c.lam = v' grad^2 (lam' g) v."""
    v = vec(v)
    out = []
    for i in range(sys.s):
        Qi = sys.g.quad[i]
        out.append(2 * sum(v[a] * dot(Qi[a], v) for a in range(len(v)) if v[a]))
    return tuple(out)


def multiplier_Lambda_dir(sys: VarSystem, y, ystar, v) -> MultiplierPoly:
    """Optimal face of max v' grad^2(lam' g)(y) v over Lambda(y, ystar)."""
    P = _lambda_poly(sys, y, ystar)
    c = curvature_vector(sys, v)
    res = lp_solve(P.lp(c))
    if res.status == "INFEASIBLE":
        raise ValueError("multiplier set is empty")
    if res.status == "UNBOUNDED":
        raise UnboundedMultipliers("directional multiplier set undefined (unbounded)")
    if not is_zero(c):
        P = P.with_rows(eq=[(c, res.value)])
    return MultiplierPoly(P, "Lambda_dir", {"y": vec(y), "ystar": vec(ystar), "v": vec(v)})


def _xi_poly(sys: VarSystem, px, xstar) -> PolySet:
    loc = local_data(sys, vec(px))
    xstar = vec(xstar)
    if len(xstar) != sys.n:
        raise ValueError("xstar has wrong length")
    ineq, eq = normal_cone_rows(loc)
    eq = eq + [(loc.b.col(j), xstar[j]) for j in range(sys.n)]
    return PolySet(sys.s, ineq, eq)


def multiplier_Xi(sys: VarSystem, px, xstar) -> MultiplierPoly:
    """{mu in N_D(gt(p,x)) : b(p,x)' mu = xstar}."""
    return MultiplierPoly(_xi_poly(sys, px, xstar), "Xi", {"px": vec(px), "xstar": vec(xstar)})


def direction_image(sys: VarSystem, px, qu) -> tuple:
    return local_data(sys, vec(px)).Jt @ vec(qu)


def multiplier_Xi_dir(sys: VarSystem, px, xstar, qu) -> MultiplierPoly:
    """Xi with the extra requirement grad gt (q,u) in K_D(gt, mu)."""
    loc = local_data(sys, vec(px))
    d = loc.Jt @ vec(qu)
    anchor = {"px": vec(px), "xstar": vec(xstar), "qu": vec(qu)}
    if not loc.T.contains(d):
        return MultiplierPoly(_empty(sys.s), "Xi_dir", anchor)
    P = _xi_poly(sys, px, xstar).with_rows(eq=[(d, ZERO)])
    return MultiplierPoly(P, "Xi_dir", anchor)


def face_multipliers(loc: LocalData, J):
    """Rows cutting the face of N_D(z) dual to the face J of T_D(z).

    Returns (eq rows, strict rows): the closed face is N_D(z) with lam.r = 0
    for the rays r of T lying in the face; its relative interior also needs
    lam.r < 0 for the remaining rays.
    """
    inside = set(loc.face_gens(J))
    eq = [(r, ZERO) for r in loc.Nineq if r in inside]
    lt = [(r, ZERO) for r in loc.Nineq if r not in inside]
    return eq, lt


def multiplier_LambdaTilde(sys: VarSystem, px, xstar, qu) -> list:
    """Directional multipliers, one closed polyhedron per face stratum.

    A stratum is a face F of T_D(gt) such that some multiplier in Xi_dir
    has K_D(gt, lam) = F and maximises the curvature objective over its
    fibre {lam' in N_D : grad g' lam' = grad g' lam}.  By LP duality the
    latter means c - grad g w lies in F for some w, which depends on F only.
    """
    px = vec(px)
    qu = vec(qu)
    loc = local_data(sys, px)
    xi = multiplier_Xi_dir(sys, px, xstar, qu)
    base = xi.poly
    if not loc.T.contains(loc.Jt @ qu):
        return []
    l, n = sys.l, sys.n
    c = curvature_vector(sys, qu + qu[l:])
    out = []
    for J in loc.Tfaces:
        feq, flt = face_multipliers(loc, J)
        lp = LinProgram(sys.s, (), base.eq + tuple(feq), base.ineq, tuple(flt))
        if strict_feasible_point(lp) is None:
            continue
        if not is_zero(c) and not _fibre_optimal(loc, J, c):
            continue
        P = base.with_rows(eq=feq)
        out.append(MultiplierPoly(P, "LambdaTilde",
                                  {"px": px, "xstar": vec(xstar), "qu": qu}, J))
    return out


def _fibre_optimal(loc: LocalData, J, c) -> bool:
    """Is there w with c - grad g w in the face J of T?"""
    T = loc.T
    Jg = loc.Jg
    mw = Jg.ncols
    eq, le = [], []
    for i, a in enumerate(T.rows):
        # a.(c - Jg w) <= 0  <=>  -(a Jg).w <= -a.c
        aJ = tuple(-dot(a, Jg.col(j)) for j in range(mw))
        row = (aJ, -dot(a, c))
        (eq if i in J else le).append(row)
    return lp_solve(LinProgram(mw, (), eq, le)).optimal


# ----------------------------------------------------------------- JSON

def _varnames(l: int, n: int, with_z: bool) -> list:
    names = [f"p{i + 1}" for i in range(l)] + [f"x{i + 1}" for i in range(n)]
    if with_z:
        names += [f"z{i + 1}" for i in range(n)]
    return names


def _parse_component(obj, names) -> tuple:
    m = len(names)
    idx = {v: i for i, v in enumerate(names)}
    const = Q(obj.get("const", "0"))
    lin = [ZERO] * m
    for v, c in obj.get("lin", {}).items():
        if v not in idx:
            raise ValueError(f"unknown variable {v!r}")
        lin[idx[v]] += Q(c)
    quad = [[ZERO] * m for _ in range(m)]
    for entry in obj.get("quad", []):
        a, b, c = entry
        if a not in idx or b not in idx:
            raise ValueError(f"unknown variable in quadratic term {entry!r}")
        i, j = idx[a], idx[b]
        c = Q(c)
        if i == j:
            quad[i][i] += c
        else:
            quad[i][j] += c / 2
            quad[j][i] += c / 2
    return const, lin, quad


def _polyfunc_from_json(comps, names) -> PolyFunc2:
    parsed = [_parse_component(c, names) for c in comps]
    return PolyFunc2(len(names), [p[0] for p in parsed], [p[1] for p in parsed],
                     [p[2] for p in parsed])


def _polyfunc_to_json(F: PolyFunc2, names) -> list:
    out = []
    for c, a, Qi in zip(F.const, F.lin, F.quad):
        comp = {"const": fmt(c), "lin": {names[j]: fmt(a[j]) for j in range(F.m) if a[j]}}
        quad = []
        for i in range(F.m):
            for j in range(i, F.m):
                v = Qi[i][j] if i == j else 2 * Qi[i][j]
                if v:
                    quad.append([names[i], names[j], fmt(v)])
        comp["quad"] = quad
        out.append(comp)
    return out


def system_from_json(obj: dict) -> VarSystem:
    dims = obj["dims"]
    l, n, s = int(dims["l"]), int(dims["n"]), int(dims["s"])
    f = _polyfunc_from_json(obj["f"], _varnames(l, n, False))
    g = _polyfunc_from_json(obj["g"], _varnames(l, n, True))
    D = polyset_from_json(obj["D"])
    ref = obj["refpoint"]
    TP = hcone_from_json(obj["P_tangent"]) if obj.get("P_tangent") else None
    return VarSystem(l, n, s, f, g, D, vec(ref.get("p", [])), vec(ref["x"]), TP)


def system_to_json(sys: VarSystem) -> dict:
    out = {
        "dims": {"l": sys.l, "n": sys.n, "s": sys.s},
        "f": _polyfunc_to_json(sys.f, _varnames(sys.l, sys.n, False)),
        "g": _polyfunc_to_json(sys.g, _varnames(sys.l, sys.n, True)),
        "D": polyset_to_json(sys.D),
        "refpoint": {"p": [fmt(x) for x in sys.pbar], "x": [fmt(x) for x in sys.xbar]},
    }
    if sys.TP is not None:
        out["P_tangent"] = hcone_to_json(sys.TP)
    return out


def load_system(path) -> VarSystem:
    with open(path) as fh:
        return system_from_json(json.load(fh))


def save_system(sys: VarSystem, path) -> None:
    with open(path, "w") as fh:
        json.dump(system_to_json(sys), fh, indent=2)
        fh.write("\n")
