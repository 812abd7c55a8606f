"""Condition checkers and the direction-space stratification engine.

Every checker returns a :class:`Verdict`.  Universal quantifiers over
directions are discharged on the cells of a hyperplane arrangement, which
is exact for affine g; quantifiers over multipliers are discharged face by
face (a multiplier determines its critical cone through the face of N_D
whose relative interior contains it).
"""

from dataclasses import dataclass, field
from typing import Optional

from .exactmath import (
    ONE, ZERO, LinProgram, RatMatrix, dot, is_zero, kernel_basis, lp_solve,
    primitive, project_onto_span, rank, solve_affine, strict_feasible_point,
    unit, vec, zeros,
)
from .graphder import (
    _eta_from, dpsi, face_metreg_failures, face_of_multiplier, lambda_strata,
    nondegeneracy_kernel, solution_system, theta_member,
)
from .polyhedra import (
    Cell, HCone, PolySet, VCone, arrangement_cells, canonicalize,
    face_diff_cone, generators, polyset_from_vrep, polyset_vrep, project_cone,
    tangent_cone, vcone_to_hcone,
)
from .status import DISPROVED, FAILS, HOLDS, INCONCLUSIVE, Verdict, prereq
from .sysmodel import (
    VarSystem, lagrangian_grad, multiplier_LambdaTilde, multiplier_Xi,
    multiplier_Xi_dir,
)


def _neg(v):
    return tuple(-x for x in v)


def _rows_times(T: HCone, M: RatMatrix) -> list:
    """Rows a_i M for the rows a_i of T."""
    return [tuple(dot(a, M.col(j)) for j in range(M.ncols)) for a in T.rows]


def _nonzero_part(cone: HCone, coords) -> Optional[tuple]:
    """A generator of the cone whose projection onto coords is nonzero."""
    g = generators(cone)
    for r in list(g.rays) + list(g.lines):
        part = tuple(r[i] for i in coords)
        if not is_zero(part):
            return r
    return None


def _scaled(r, coords) -> tuple:
    """r rescaled so that its restriction to coords is primitive."""
    part = [r[i] for i in coords]
    if is_zero(part):
        return tuple(r)
    p = primitive(part)
    k = next(i for i, x in enumerate(part) if x != 0)
    c = p[k] / part[k]
    return tuple(c * x for x in r)


# ---------------------------------------------------- constraint qualifications

def check_robinson_cq(sys: VarSystem) -> Verdict:
    """{mu in N_D(g(ybar)) : grad_z g' mu = 0} = {0}."""
    loc = sys.local
    s = sys.s
    rows = list(loc.Nineq)
    eq = list(loc.Neq) + [loc.b.col(j) for j in range(sys.n)]
    cone = HCone(s, rows + eq, range(len(rows), len(rows) + len(eq)))
    g = generators(cone)
    if g.lines:
        mu = g.lines[0]
    elif g.rays:
        mu = g.rays[0]
    else:
        return Verdict("robinson_cq", HOLDS, {"multiplier_cone": "trivial"})
    return Verdict("robinson_cq", FAILS, {"mu": mu, "bT_mu": loc.b.T @ mu})


def check_assumption1(sys: VarSystem) -> Verdict:
    rcq = check_robinson_cq(sys)
    st = HOLDS if rcq.holds else INCONCLUSIVE
    cert = {"via": "robinson_cq"}
    if not rcq.holds:
        cert["note"] = "Robinson CQ fails; the error bound is not certified"
    return Verdict("assumption1", st, cert, prerequisites=[prereq("robinson_cq", rcq)])


# --------------------------------------------------------- non-degeneracy

def check_nondegen_dir(jac: RatMatrix, D: PolySet, zref, image_dir) -> Verdict:
    """ker jac' ∩ span{a_i : a_i.d = 0} = {0}, with the primal rank test as a cross-check."""
    T = tangent_cone(D, vec(zref))
    d = vec(image_dir)
    s = D.dim
    if not T.contains(d):
        return Verdict("nondegeneracy", HOLDS, {"vacuous": True, "image": d})
    J = [i for i, a in enumerate(T.rows) if dot(a, d) == 0]
    rows = [T.rows[i] for i in J]
    mu = nondegeneracy_kernel(jac, rows)
    lin = kernel_basis(rows, s) if rows else [unit(s, i) for i in range(s)]
    primal = rank([jac.col(j) for j in range(jac.ncols)] + lin) == s if (jac.ncols or lin) else s == 0
    if primal != (mu is None):
        raise AssertionError("dual and primal non-degeneracy tests disagree")
    cert = {"active_rows": J, "image": d}
    if mu is None:
        return Verdict("nondegeneracy", HOLDS, cert)
    cert["mu"] = mu
    cert["jacT_mu"] = jac.T @ mu
    return Verdict("nondegeneracy", FAILS, cert)


def check_nondegeneracy(sys: VarSystem, v) -> Verdict:
    loc = sys.local
    return check_nondegen_dir(loc.Jt, sys.D, loc.z, loc.Jt @ vec(v))


def check_F_dirmetreg(sys: VarSystem, v, lam, eta) -> Verdict:
    """Directional metric subregularity of (p,x,mu) -> (gt(p,x), mu) - gph N_D."""
    v, lam, eta = vec(v), vec(lam), vec(eta)
    if not theta_member(sys, v, lam, eta):
        raise ValueError("(lam, eta) is not in Theta")
    loc = sys.local
    d = loc.Jt @ v
    single = check_nondegen_dir(loc.Jt, sys.D, loc.z, d)
    bad = face_metreg_failures(loc, loc.Jt, face_of_multiplier(loc, lam), d, eta)
    if single.holds != (not bad):
        raise AssertionError("single-face and all-faces tests disagree")
    cert = {"direction": v, "lambda": lam, "eta": eta}
    if single.holds:
        return Verdict("F_dirmetreg", HOLDS, cert)
    cert["face"] = bad[0][0]
    cert["mu"] = bad[0][1]
    return Verdict("F_dirmetreg", FAILS, cert)


# ------------------------------------------------------------ stratification

@dataclass(frozen=True)
class Stratification:
    space: str
    ambient: HCone
    hyperplanes: tuple
    cells: tuple

    def nonzero_cells(self) -> list:
        return [c for c in self.cells if not c.is_origin]

    def locate(self, w) -> Cell:
        """The cell whose relative interior contains w."""
        w = vec(w)
        for c in self.cells:
            if _in_cell(c, w):
                return c
        raise ValueError("direction lies outside the ambient cone")

    def to_json(self):
        from .status import jsonable
        return {"space": self.space, "hyperplanes": jsonable(self.hyperplanes),
                "cells": [{"signs": list(c.signs), "face": sorted(c.face),
                           "rep": jsonable(c.rep)} for c in self.cells]}


def _in_cell(c: Cell, w) -> bool:
    for i, a in enumerate(c.closure.rows):
        v = dot(a, w)
        if i in c.closure.eq:
            if v != 0:
                return False
        elif v >= 0:
            return False
    return True


def cell_relint_lp(c: Cell, extra_eq=()) -> LinProgram:
    C = c.closure
    eq = [(C.rows[i], ZERO) for i in sorted(C.eq)] + [(a, ZERO) for a in extra_eq]
    lt = [(C.rows[i], ZERO) for i in C.ineq]
    return LinProgram(C.dim, (), eq, (), lt)


def _space_dim(sys: VarSystem, space: str) -> int:
    return {"q": sys.l, "u": sys.n, "qu": sys.l + sys.n, "v": sys.l + sys.n}[space]


def activity_hyperplanes(sys: VarSystem, space: str) -> list:
    """Rows of T_D(gt) composed with the Jacobian restricted to the space."""
    loc = sys.local
    M = {"u": loc.J2, "q": loc.Jt.select_cols(range(sys.l))}.get(space, loc.Jt)
    return [h for h in _rows_times(loc.T, M) if not is_zero(h)]


def stratify_directions(sys: Optional[VarSystem], space, hyperplanes=None,
                        ambient: Optional[HCone] = None) -> Stratification:
    """Sign cells of the hyperplane arrangement inside the ambient cone.

    ``space`` is "q", "u" or "qu" (with a system) or an integer dimension.
    Without an explicit hyperplane list the activity hyperplanes of
    T_D(gt) composed with the Jacobian are used.
    """
    if isinstance(space, int):
        dim, name = space, "custom"
    else:
        dim, name = _space_dim(sys, space), space
    if hyperplanes is None:
        hyperplanes = activity_hyperplanes(sys, space)
    hs = []
    for h in hyperplanes:
        h = primitive(vec(h))
        if not is_zero(h) and h not in hs and _neg(h) not in hs:
            hs.append(h)
    amb = ambient if ambient is not None else HCone.whole(dim)
    cells = arrangement_cells(amb, hs)
    return Stratification(name, canonicalize(amb), tuple(hs), tuple(cells))


# ----------------------------------------------------------- solution strata

@dataclass(frozen=True)
class SolutionStratum:
    """Directions (q,u) solving 0 in grad f(q,u) + DPsi(q,u,u) through a
    fixed multiplier face F (the critical cone) and a face F2 of F holding
    grad gt (q,u); eta is a combination of the rows of F2."""

    face: frozenset
    face2: frozenset
    lifted: HCone          # cone in (q, u, rho)
    eta_rows: tuple
    lam: tuple
    l: int
    n: int

    @property
    def qu_cone(self) -> VCone:
        return project_cone(self.lifted, range(self.l + self.n))

    @property
    def q_cone(self) -> VCone:
        return project_cone(self.lifted, range(self.l))

    def u_map(self) -> Optional[RatMatrix]:
        """U with u = U q on the stratum, or None when u is not determined by q."""
        l, n = self.l, self.n
        fib = self.lifted.with_rows(extra_eq=[unit(self.lifted.dim, i) for i in range(l)])
        if _nonzero_part(fib, range(l, l + n)) is not None:
            return None
        g = generators(self.lifted)
        gens = list(g.rays) + list(g.lines)
        Qm = [r[:l] for r in gens]
        rows = []
        for j in range(n):
            sol = solve_affine(Qm, [r[l + j] for r in gens], l) if gens else zeros(l)
            if sol is None:
                return None
            rows.append(sol)
        return RatMatrix(rows, l)

    def eta_fibre(self, loc, q) -> PolySet:
        """{eta} attached to the parameter direction q on this stratum."""
        l, n, k = self.l, self.n, len(self.eta_rows)
        q = vec(q)
        C = self.lifted
        ineq, eq = [], []
        for i, a in enumerate(C.rows):
            row = (a[l:], -dot(a[:l], q))
            (eq if i in C.eq else ineq).append(row)
        P = PolySet(n + k, ineq, eq)
        verts, rays, lines = polyset_vrep(P)
        s = loc.T.dim
        img = lambda r: _eta_from(loc, self.eta_rows, r[n:])
        return polyset_from_vrep(s, [img(v) for v in verts], [img(r) for r in rays],
                                 [img(x) for x in lines])

    def to_json(self, loc=None):
        from .status import jsonable
        out = {"face": sorted(self.face), "face2": sorted(self.face2),
               "lambda": jsonable(self.lam), "q_cone": jsonable(self.q_cone)}
        U = self.u_map()
        out["u_map"] = jsonable(U) if U is not None else None
        return out


def _param_eq_zero(l: int) -> HCone:
    return HCone(l, [unit(l, i) for i in range(l)], range(l))


def solution_strata(sys: VarSystem, TP: Optional[HCone] = None) -> list:
    """Nonempty strata of the (q,u) directions solving the linearised system (affine g)."""
    if not sys.g_affine:
        raise ValueError("solution strata need affine g")
    loc = sys.local
    out = []
    for JF, lam in lambda_strata(sys):
        for J2 in loc.Tfaces:
            if not JF <= J2:
                continue
            C, je = solution_system(sys, JF, J2, J2, TP)
            if _nonzero_part(C, range(sys.l + sys.n)) is None:
                continue
            out.append(SolutionStratum(JF, J2, C, tuple(je), lam, sys.l, sys.n))
    return out


# -------------------------------------------------------------------- SOCIC

def _socic_prereq(sys):
    a1 = check_assumption1(sys)
    return a1, [prereq("assumption1", a1)]


def _tangent_rows_at(loc, JF, d):
    """(eq rows, le rows) of T_F(d) for the face F = JF of T."""
    eq = [loc.T.rows[i] for i in sorted(JF)]
    le = [a for i, a in enumerate(loc.T.rows) if i not in JF and dot(a, d) == 0]
    return eq, le


def _socic_witness_v(sys, JF, lam, u) -> Optional[tuple]:
    """v with b v in T_F(grad_2 gt u) and v' grad_2 Lag u <= -1, by LP."""
    loc = sys.local
    d = loc.J2 @ u
    H = lagrangian_grad(sys, lam).select_cols(range(sys.l, sys.l + sys.n))
    Hu = H @ u
    eqr, ler = _tangent_rows_at(loc, JF, d)
    B = loc.b
    brow = lambda a: tuple(dot(a, B.col(j)) for j in range(sys.n))
    lp = LinProgram(sys.n, (), [(brow(a), ZERO) for a in eqr],
                    [(brow(a), ZERO) for a in ler] + [(Hu, -ONE)])
    res = lp_solve(lp)
    return res.point if res.optimal else None


def check_socic_dir(sys: VarSystem, u) -> Verdict:
    """SOCIC for one direction u != 0, exact by LP duality: it fails iff
    0 is in grad_2 f u + DPsi(0,u,u)."""
    u = vec(u)
    if is_zero(u):
        raise ValueError("SOCIC quantifies over nonzero directions")
    a1, pre = _socic_prereq(sys)
    qu = zeros(sys.l) + u
    loc = sys.local
    ds = dpsi(sys, None, qu, waive_assumption1=True)
    wit = ds.member(_neg(loc.Jf @ qu))
    if wit is not None:
        lam, eta = wit
        st = FAILS if a1.holds else INCONCLUSIVE
        cert = {"u": u, "lambda": lam, "eta": eta}
        if not a1.holds:
            cert["note"] = "violated, but Assumption 1 is not certified"
        return Verdict("socic", st, cert, prerequisites=pre)
    strata = []
    for st in ds.strata:
        lam = st.multipliers and multiplier_point(st.multipliers)
        v = _socic_witness_v(sys, st.face, lam, u)
        strata.append({"face": st.face, "lambda": lam, "v": v})
    cert = {"u": u, "vacuous": not ds.strata}
    st = HOLDS if a1.holds else INCONCLUSIVE
    if not a1.holds:
        cert["note"] = "condition holds, but Assumption 1 is not certified"
    return Verdict("socic", st, cert, strata, pre)


def multiplier_point(P: PolySet) -> tuple:
    res = lp_solve(P.lp())
    return res.point


def socic_violations(sys: VarSystem) -> Optional[dict]:
    """A direction u != 0 with 0 in grad_2 f u + DPsi(0,u,u), affine g."""
    loc = sys.local
    l, n = sys.l, sys.n
    for JF, lam in lambda_strata(sys):
        for J2 in loc.Tfaces:
            if not JF <= J2:
                continue
            C, je = solution_system(sys, JF, J2, J2, _param_eq_zero(l))
            r = _nonzero_part(C, range(l, l + n))
            if r is not None:
                r = _scaled(r, range(l, l + n))
                return {"u": r[l:l + n], "lambda": lam,
                        "eta": _eta_from(loc, je, r[l + n:]), "face": JF, "face2": J2}
    return None


def _socic_family(sys: VarSystem) -> RatMatrix:
    """V with v = V u: minus the projection of grad_2 f u onto ker(A_T b)."""
    loc = sys.local
    n = sys.n
    Ab = _rows_times(loc.T, loc.b)
    L = kernel_basis(Ab, n) if Ab else [unit(n, i) for i in range(n)]
    H = loc.Jf.select_cols(range(sys.l, sys.l + n))
    cols = [_neg(project_onto_span(H.col(j), L, n)) for j in range(n)]
    return RatMatrix([[c[i] for c in cols] for i in range(n)], n)


def _cell_family(sys, d) -> RatMatrix:
    loc = sys.local
    n = sys.n
    J = [i for i, a in enumerate(loc.T.rows) if dot(a, d) == 0]
    Ab = [tuple(dot(loc.T.rows[i], loc.b.col(j)) for j in range(n)) for i in J]
    L = kernel_basis(Ab, n) if Ab else [unit(n, i) for i in range(n)]
    H = loc.Jf.select_cols(range(sys.l, sys.l + n))
    cols = [_neg(project_onto_span(H.col(j), L, n)) for j in range(n)]
    return RatMatrix([[c[i] for c in cols] for i in range(n)], n)


def admissible_u_cone(sys: VarSystem) -> HCone:
    loc = sys.local
    rows = _rows_times(loc.T, loc.J2)
    return HCone(sys.n, rows, loc.T.eq)


def check_socic(sys: VarSystem) -> Verdict:
    """SOCIC over all u != 0.  Exact for affine g."""
    a1, pre = _socic_prereq(sys)
    loc = sys.local
    amb = admissible_u_cone(sys)
    xi_empty = multiplier_Xi(sys, sys.px, sys.xstar).is_empty()
    g = generators(amb)
    if xi_empty or (not g.rays and not g.lines):
        st = HOLDS if a1.holds else INCONCLUSIVE
        return Verdict("socic", st, {"vacuous": True}, prerequisites=pre)
    if not sys.g_affine:
        return Verdict("socic", INCONCLUSIVE,
                       {"note": "quadratic g: use the per-direction check (socic --direction u)"},
                       prerequisites=pre)
    bad = socic_violations(sys)
    if bad is not None:
        st = FAILS if a1.holds else INCONCLUSIVE
        u = bad["u"]
        cert = dict(bad)
        strat = stratify_directions(sys, "u", ambient=amb)
        cert["cell_signs"] = strat.locate(u).signs
        return Verdict("socic", st, cert, prerequisites=pre)
    V = _socic_family(sys)
    hyper = activity_hyperplanes(sys, "u") + [r for r in V.rows if not is_zero(r)]
    strat = stratify_directions(sys, "u", hyper, amb)
    strata = []
    for c in strat.nonzero_cells():
        d = loc.J2 @ c.rep
        entry = {"signs": c.signs, "rep": c.rep}
        lams = [mp.face for mp in multiplier_LambdaTilde(sys, sys.px, sys.xstar,
                                                          zeros(sys.l) + c.rep)]
        entry["lambda_faces"] = lams
        if not is_zero(V @ c.rep):
            entry["v_map"] = V
            entry["v"] = V @ c.rep
        else:
            Vc = _cell_family(sys, d)
            PH = [r for r in Vc.rows if not is_zero(r)]
            if PH and strict_feasible_point(cell_relint_lp(c, PH)) is None:
                entry["v_map"] = Vc
                entry["v"] = Vc @ c.rep
            else:
                lam = lambda_strata(sys)[0][1]
                entry["v"] = _socic_witness_v(sys, lams[0] if lams else frozenset(), lam, c.rep)
                entry["pointwise"] = True
        strata.append(entry)
    st = HOLDS if a1.holds else INCONCLUSIVE
    cert = {"cells": len(strata), "v_family": V}
    if not a1.holds:
        cert["note"] = "condition holds, but Assumption 1 is not certified"
    return Verdict("socic", st, cert, strata, pre)


# ------------------------------------------------- metric regularity of M

def _bad_w(sys, Lmat: RatMatrix, Gmat: RatMatrix, J1, J2) -> Optional[tuple]:
    """Nonzero w with b w in F1-F2 and L' w in G' (F1-F2)°, with its xi."""
    loc = sys.local
    T = loc.T
    n = sys.n
    j2 = sorted(J2)
    k = len(j2)
    dim = n + k
    le, eq = [], []
    for t, i in enumerate(j2):
        a = T.rows[i]
        ab = tuple(dot(a, loc.b.col(j)) for j in range(n)) + zeros(k)
        if i in J1:
            eq.append(ab)
        else:
            le.append(ab)
            r = [ZERO] * dim
            r[n + t] = -ONE
            le.append(tuple(r))
    Ga = [Gmat.T @ T.rows[i] for i in j2]
    for c in range(Lmat.ncols):
        eq.append(tuple(Lmat.col(c)) + tuple(-x[c] for x in Ga))
    C = HCone(dim, le + eq, range(len(le), len(le) + len(eq)))
    r = _nonzero_part(C, range(n))
    if r is None:
        return None
    xi = _eta_from(loc, j2, r[n:])
    return r[:n], xi


def _faces_between(loc, lo, d):
    """Faces J of T with J ⊇ lo and d in the face."""
    return [J for J in loc.Tfaces if lo <= J and all(dot(loc.T.rows[i], d) == 0 for i in J)]


def _eta_admissible(sys, L, qu, JF, J1) -> Optional[tuple]:
    loc = sys.local
    j1 = sorted(J1)
    k = len(j1)
    target = _neg(L @ qu)
    bta = [loc.b.T @ loc.T.rows[i] for i in j1]
    eq = [(tuple(v[c] for v in bta), target[c]) for c in range(sys.n)]
    le = []
    for t, i in enumerate(j1):
        if i not in JF:
            le.append((tuple(-ONE if u == t else ZERO for u in range(k)), ZERO))
    res = lp_solve(LinProgram(k, (), eq, le))
    if not res.optimal:
        return None
    return _eta_from(loc, j1, res.point)


def check_metreg_M_dir(sys: VarSystem, qu) -> Verdict:
    """Sufficient condition for metric regularity of M = f + G in direction ((q,u),0)."""
    qu = vec(qu)
    loc = sys.local
    nd = check_nondegeneracy(sys, qu)
    pre = [prereq("nondegeneracy", nd)]
    if not nd.holds:
        return Verdict("metreg_M_dir", INCONCLUSIVE,
                       {"direction": qu, "note": "system is degenerate in this direction"},
                       prerequisites=pre)
    d = loc.Jt @ qu
    if not loc.T.contains(d):
        return Verdict("metreg_M_dir", HOLDS, {"direction": qu, "vacuous": True}, prerequisites=pre)
    if sys.g_affine:
        strata = [(JF, lam) for JF, lam in lambda_strata(sys)
                  if all(dot(loc.T.rows[i], d) == 0 for i in JF)]
    else:
        P = multiplier_Xi_dir(sys, sys.px, sys.xstar, qu).poly
        verts, rays, lines = polyset_vrep(P)
        if not verts:
            return Verdict("metreg_M_dir", HOLDS, {"direction": qu, "vacuous": True},
                           prerequisites=pre)
        if len(verts) > 1 or rays or lines:
            return Verdict("metreg_M_dir", INCONCLUSIVE,
                           {"direction": qu, "note": "quadratic g with a non-singleton multiplier set"},
                           prerequisites=pre)
        strata = [(face_of_multiplier(loc, verts[0]), verts[0])]
    checked = []
    for JF, lam in strata:
        L = lagrangian_grad(sys, lam)
        for J1 in _faces_between(loc, JF, d):
            eta = _eta_admissible(sys, L, qu, JF, J1)
            if eta is None:
                continue
            for J2 in _faces_between(loc, J1, d):
                bad = _bad_w(sys, L, loc.Jt, J1, J2)
                checked.append((JF, J1, J2))
                if bad is not None:
                    w, xi = bad
                    cert = {"direction": qu, "lambda": lam, "eta": eta, "face": JF,
                            "F1": J1, "F2": J2, "w": w, "xi": xi}
                    return Verdict("metreg_M_dir", FAILS, cert, prerequisites=pre)
    return Verdict("metreg_M_dir", HOLDS, {"direction": qu, "face_pairs": len(checked)},
                   [{"face": a, "F1": b, "F2": c} for a, b, c in checked], pre)


# --------------------------------------------------------- isolated calmness

def check_isolated_calmness(sys: VarSystem) -> Verdict:
    a1 = check_assumption1(sys)
    soc = check_socic(sys)
    pre = [prereq("assumption1", a1), prereq("socic", soc)]
    if soc.holds and a1.holds:
        return Verdict("isolated_calmness", HOLDS, {"via": "socic"}, soc.strata, pre)
    if soc.status == FAILS or (soc.status == INCONCLUSIVE and "u" in soc.certificate):
        u = soc.certificate["u"]
        qu = zeros(sys.l) + u
        nd = check_nondegeneracy(sys, qu)
        mr = check_metreg_M_dir(sys, qu)
        pre += [prereq("nondegeneracy", nd), prereq("metreg_M_dir", mr)]
        cert = {"u": u, "lambda": soc.certificate.get("lambda"),
                "eta": soc.certificate.get("eta")}
        if a1.holds and soc.status == FAILS and nd.holds and mr.holds:
            return Verdict("isolated_calmness", DISPROVED, cert, prerequisites=pre)
        cert["note"] = "SOCIC fails but the necessity prerequisites are not all certified"
        return Verdict("isolated_calmness", INCONCLUSIVE, cert, prerequisites=pre)
    return Verdict("isolated_calmness", INCONCLUSIVE,
                   {"note": "SOCIC not certified", "socic": soc.status}, prerequisites=pre)


# ---------------------------------------------------------- relative Aubin

def _nondegen_failing_faces(sys) -> list:
    loc = sys.local
    out = []
    for J in loc.Tfaces:
        mu = nondegeneracy_kernel(loc.J2, [loc.T.rows[i] for i in sorted(J)])
        if mu is not None:
            out.append((J, mu))
    return out


def _ds_table(sys, strata) -> list:
    loc = sys.local
    out = []
    for st in strata:
        qc = st.q_cone
        if not qc.rays and not qc.lines:
            continue
        U = st.u_map()
        out.append({"face": st.face, "face2": st.face2, "lambda": st.lam,
                    "q_cone": vcone_to_hcone(qc), "u_map": U,
                    "eta_rows": st.eta_rows})
    return out


def check_rel_aubin(sys: VarSystem, TP: Optional[HCone] = None) -> Verdict:
    """Aubin property of S relative to a set P with tangent cone TP at pbar."""
    TP = TP if TP is not None else sys.param_cone
    a1 = check_assumption1(sys)
    pre = [prereq("assumption1", a1)]
    if not a1.holds:
        return Verdict("rel_aubin", INCONCLUSIVE, {"note": "Assumption 1 is not certified"},
                       prerequisites=pre)
    if not sys.g_affine:
        return Verdict("rel_aubin", INCONCLUSIVE,
                       {"note": "quadratic g: the direction quantifiers are not decided exactly"},
                       prerequisites=pre)
    loc = sys.local
    l, n = sys.l, sys.n
    strata = solution_strata(sys)
    # (i) every q in TP admits some u
    cones = [vcone_to_hcone(st.q_cone) for st in strata]
    hyper = [a for C in cones for a in C.rows]
    strat = stratify_directions(None, l, hyper, TP)
    for c in strat.nonzero_cells():
        if not any(C.contains(c.rep) for C in cones):
            cert = {"condition": "i", "q": primitive(c.rep), "cell_signs": c.signs}
            return Verdict("rel_aubin", FAILS, cert, prerequisites=pre)
    # (ii-a) partial non-degeneracy along admissible directions
    for J, mu in _nondegen_failing_faces(sys):
        for st in strata:
            C, je = solution_system(sys, st.face, st.face2 | J, st.face2, TP)
            r = _nonzero_part(C, range(l + n))
            if r is not None:
                cert = {"condition": "ii-nondegeneracy", "q": r[:l], "u": r[l:l + n],
                        "face": J, "mu": mu}
                return Verdict("rel_aubin", FAILS, cert, prerequisites=pre)
    # (ii-b) face-pair condition with grad_2 quantities
    H = loc.Jf.select_cols(range(l, l + n))
    bad_w = {}
    fails = []
    for JF, lam in lambda_strata(sys):
        lo = [J for J in loc.Tfaces if JF <= J]
        for J1 in lo:
            for J2 in lo:
                if not J1 <= J2:
                    continue
                key = (J1, J2)
                if key not in bad_w:
                    bad_w[key] = _bad_w(sys, H, loc.J2, J1, J2)
                if bad_w[key] is None:
                    continue
                C, je = solution_system(sys, JF, J2, J1, TP)
                r = _nonzero_part(C, range(l + n))
                if r is None:
                    continue
                w, xi = bad_w[key]
                r = _scaled(r, range(l)) if not is_zero(r[:l]) else _scaled(r, range(l, l + n))
                fails.append({"q": r[:l],
                              "u": r[l:l + n], "lambda": lam,
                              "eta": _eta_from(loc, je, r[l + n:]),
                              "face": JF, "F1": J1, "F2": J2, "w": w, "xi": xi})
    if fails:
        cert = dict(fails[0])
        cert["condition"] = "ii-face-pairs"
        rays = []
        for f in fails:
            if f["q"] not in rays:
                rays.append(f["q"])
        cert["rays"] = rays
        return Verdict("rel_aubin", FAILS, cert, fails, pre)
    return Verdict("rel_aubin", HOLDS, {"strata": len(strata)}, _ds_table(sys, strata), pre)


def check_aubin(sys: VarSystem) -> Verdict:
    v = check_rel_aubin(sys, HCone.whole(sys.l))
    v.condition = "aubin"
    return v
