"""Graph of the polyhedral normal-cone map and the graphical derivative DPsi.

Conventions.  For a system at its reference point, ``loc.T`` is the
tangent cone T_D(gt) with canonical rows a_i.  A face of T is an index
set J and every critical cone K_D(gt, lam) is such a face: it is the face
whose dual face of N_D contains lam in its relative interior.  Faces of a
face F are the faces of T whose index set contains J_F.
"""

from dataclasses import dataclass
from typing import Optional

from .exactmath import (
    ONE, ZERO, LinProgram, RatMatrix, dot, fmt, is_zero, kernel_basis,
    lp_solve, rank, strict_feasible_point, vec, zeros,
)
from .polyhedra import (
    HCone, PolySet, VCone, canonicalize, conic_coefficients, critical_cone,
    face_diff_cone, faces, generators, normal_at, normal_cone, polar,
    tangent_cone,
)
from .status import FAILS, HOLDS, INCONCLUSIVE, Verdict
from .sysmodel import (
    LocalData, MultiplierPoly, VarSystem, bterm_matrices, face_multipliers,
    lagrangian_grad, local_data, multiplier_LambdaTilde, multiplier_Xi,
)


# ----------------------------------------------------- face pair data

@dataclass(frozen=True)
class FacePair:
    F1: frozenset
    F2: frozenset
    diff: HCone
    diff_polar: VCone

    def to_json(self):
        return {"F1": sorted(self.F1), "F2": sorted(self.F2),
                "diff": {"dim": self.diff.dim,
                         "ineq": [[fmt(x) for x in self.diff.rows[i]] for i in self.diff.ineq],
                         "eq": [[fmt(x) for x in self.diff.rows[i]] for i in sorted(self.diff.eq)]}}


def _in_span(v, rows) -> bool:
    if is_zero(v):
        return True
    rows = [r for r in rows if not is_zero(r)]
    return bool(rows) and rank(rows + [tuple(v)]) == rank(rows)


def face_pairs(K: HCone, w, eta=None, faces_of=None) -> list:
    """Pairs F2 ⊆ F1 of faces of K with w in F2 and F1 ⊆ [eta]⊥."""
    w = vec(w)
    fl = faces(K) if faces_of is None else faces_of
    at_w = [J for J in fl if all(dot(K.rows[i], w) == 0 for i in J)]
    if eta is not None:
        eta = vec(eta)
        ok1 = [J for J in fl if _in_span(eta, [K.rows[i] for i in J])]
    else:
        ok1 = fl
    out = []
    for J1 in ok1:
        for J2 in at_w:
            if J1 <= J2:
                C = face_diff_cone(K, J1, J2)
                out.append(FacePair(J1, J2, C, polar(C)))
    return out


def gph_normal_tangent_member(D: PolySet, z, zstar, w, eta) -> bool:
    """(w, eta) in T_{gph N_D}(z, z*) = gph N_{K_D(z, z*)}."""
    K = critical_cone(D, z, zstar)
    w, eta = vec(w), vec(eta)
    if not K.contains(w):
        return False
    if conic_coefficients(polar(K), eta) is None:
        return False
    return dot(eta, w) == 0


def dir_limiting_normal_gphN(D: PolySet, z, zstar, w, eta) -> list:
    """Face pairs whose products (F1-F2)° x (F1-F2) make up the directional
    limiting normal cone of gph N_D at (z, z*) in direction (w, eta)."""
    if not gph_normal_tangent_member(D, z, zstar, w, eta):
        return []
    K = critical_cone(D, z, zstar)
    return face_pairs(K, w, eta)


# ------------------------------------------------ multiplier strata

def face_of_multiplier(loc: LocalData, lam) -> frozenset:
    """Index set of K_D(z, lam) = T ∩ [lam]⊥ as a face of T."""
    lam = vec(lam)
    T = loc.T
    g = generators(T)
    rays = [r for r in g.rays if dot(lam, r) == 0]
    return frozenset(i for i in range(T.nrows)
                     if all(dot(T.rows[i], r) == 0 for r in rays))


def in_normal_cone(loc: LocalData, lam) -> bool:
    lam = vec(lam)
    return all(dot(r, lam) <= 0 for r in loc.Nineq) and all(dot(l, lam) == 0 for l in loc.Neq)


def theta_member(sys: VarSystem, v, lam, eta) -> bool:
    """(lam, eta) in Theta(ybar, v)."""
    loc = sys.local
    lam = vec(lam)
    if not in_normal_cone(loc, lam):
        return False
    d = loc.Jt @ vec(v)
    return gph_normal_tangent_member(sys.D, loc.z, lam, d, eta)


def lambda_strata(sys: VarSystem, xstar=None) -> list:
    """Faces F of T whose dual face of N_D meets Xi in its relative interior.

    For affine g these are exactly the critical cones K_D(gt, mu) that occur
    for mu in Xi(pbar, xbar, xstar).
    """
    loc = sys.local
    xstar = sys.xstar if xstar is None else vec(xstar)
    base = multiplier_Xi(sys, sys.px, xstar).poly
    out = []
    for J in loc.Tfaces:
        feq, flt = face_multipliers(loc, J)
        lp = LinProgram(sys.s, (), base.eq + tuple(feq), base.ineq, tuple(flt))
        pt = strict_feasible_point(lp)
        if pt is not None:
            out.append((J, pt))
    return out


def normal_face_cone(loc: LocalData, JF, d) -> VCone:
    """N_F(d) for the face F = JF of T and d in F."""
    F = HCone(loc.T.dim, loc.T.rows, JF)
    return normal_at(F, d)


# ------------------------------------------------------------ DPsi

@dataclass(frozen=True)
class DerivStratum:
    face: frozenset
    multipliers: PolySet
    offset: RatMatrix       # lam -> grad (b' lam)(q,u), n x s
    eta_cone: VCone         # N_{K}(grad gt (q,u)) in R^s
    cone: VCone             # b' eta_cone in R^n

    def to_json(self):
        from .status import jsonable
        return {"face": sorted(self.face), "multipliers": jsonable(self.multipliers),
                "offset": jsonable(self.offset), "cone": jsonable(self.cone)}


@dataclass(frozen=True)
class DerivSet:
    qu: tuple
    xstar: tuple
    strata: tuple
    b: RatMatrix

    def is_empty(self) -> bool:
        return not self.strata

    def member(self, vstar) -> Optional[tuple]:
        """(lam, eta) realising vstar in some stratum, or None."""
        vstar = vec(vstar)
        for st in self.strata:
            wit = _stratum_member(st, self.b, vstar)
            if wit is not None:
                return wit
        return None

    def to_json(self):
        return [st.to_json() for st in self.strata]


def _stratum_member(st: DerivStratum, b: RatMatrix, vstar):
    s = st.multipliers.dim
    rays, lines = st.eta_cone.rays, st.eta_cone.lines
    nr, nl = len(rays), len(lines)
    nv = s + nr + nl
    eq = [(a + zeros(nr + nl), c) for a, c in st.multipliers.eq]
    le = [(a + zeros(nr + nl), c) for a, c in st.multipliers.ineq]
    for k in range(nr):
        row = [ZERO] * nv
        row[s + k] = -ONE
        le.append((tuple(row), ZERO))
    bt = b.T
    br = [bt @ r for r in rays]
    bl = [bt @ li for li in lines]
    for t in range(len(vstar)):
        row = tuple(st.offset.rows[t]) + tuple(x[t] for x in br) + tuple(x[t] for x in bl)
        eq.append((row, vstar[t]))
    res = lp_solve(LinProgram(nv, (), eq, le))
    if not res.optimal:
        return None
    x = res.point
    lam = x[:s]
    eta = zeros(s)
    for c, r in zip(x[s:s + nr], rays):
        eta = tuple(e + c * ri for e, ri in zip(eta, r))
    for c, li in zip(x[s + nr:], lines):
        eta = tuple(e + c * ri for e, ri in zip(eta, li))
    return lam, eta


def offset_matrix(sys: VarSystem, qu) -> RatMatrix:
    """Columns M_i (q,u): the b-term of the Lagrangian applied to (q,u)."""
    qu = vec(qu)
    if sys.g_affine:
        return RatMatrix.zeros(sys.n, sys.s)
    cols = [M @ qu for M in bterm_matrices(sys)]
    return RatMatrix([[c[t] for c in cols] for t in range(sys.n)], sys.s)


def dpsi(sys: VarSystem, xstar=None, qu=None, waive_assumption1: bool = False) -> DerivSet:
    """Stratified DPsi((pbar,xbar,xbar), xstar)(q,u,u)."""
    from .verdicts import check_assumption1

    xstar = sys.xstar if xstar is None else vec(xstar)
    qu = vec(qu)
    if multiplier_Xi(sys, sys.px, xstar).is_empty():
        raise ValueError("xstar is not in G(pbar, xbar)")
    if not waive_assumption1 and not check_assumption1(sys).holds:
        raise ValueError("Assumption 1 is not certified; pass waive_assumption1=True to proceed")
    loc = sys.local
    d = loc.Jt @ qu
    O = offset_matrix(sys, qu)
    strata = []
    for mp in multiplier_LambdaTilde(sys, sys.px, xstar, qu):
        N = normal_face_cone(loc, mp.face, d)
        bt = loc.b.T
        cone = VCone(sys.n, [bt @ r for r in N.rays], [bt @ li for li in N.lines])
        strata.append(DerivStratum(mp.face, mp.poly, O, N, cone))
    return DerivSet(qu, xstar, tuple(strata), loc.b)


def dpsi_member(sys: VarSystem, xstar, qu, vstar, waive_assumption1: bool = False) -> bool:
    return dpsi(sys, xstar, qu, waive_assumption1).member(vstar) is not None


# ------------------------------------- metric subregularity of F

def nondegeneracy_kernel(jac: RatMatrix, rows) -> Optional[tuple]:
    """Nonzero mu in ker jac' ∩ span(rows), or None."""
    rows = [vec(r) for r in rows]
    if not rows:
        return None
    M = RatMatrix(rows).T                  # s x k, columns a_i
    JtM = jac.T @ M
    if rank(JtM) == rank(M):
        return None
    for sig in kernel_basis(JtM, M.ncols):
        mu = M @ sig
        if not is_zero(mu):
            return mu
    raise AssertionError("rank deficit without a kernel witness")


def face_metreg_failures(loc: LocalData, jac: RatMatrix, JK, d, eta) -> list:
    """Faces F of K (index JK in T) with d in F ⊆ [eta]⊥ violating
    ker jac' ∩ (F-F)° = {0}, each with its kernel witness."""
    T = loc.T
    out = []
    for J in loc.Tfaces:
        if not JK <= J:
            continue
        rows = [T.rows[i] for i in sorted(J)]
        if any(dot(r, d) != 0 for r in rows):
            continue
        if not _in_span(eta, rows):
            continue
        mu = nondegeneracy_kernel(jac, rows)
        if mu is not None:
            out.append((J, mu))
    return out


def dg_lower_witness(sys: VarSystem, xstar, qu, lam, eta) -> Verdict:
    """Certify that b'eta + grad(b'lam)(q,u) lies in DG via directional
    metric subregularity of (p,x,mu) -> (gt(p,x), mu) - gph N_D."""
    xstar = sys.xstar if xstar is None else vec(xstar)
    qu, lam, eta = vec(qu), vec(lam), vec(eta)
    loc = sys.local
    d = loc.Jt @ qu
    lam_ok = any(mp.contains(lam) for mp in multiplier_LambdaTilde(sys, sys.px, xstar, qu))
    if not lam_ok:
        raise ValueError("lam is not a directional multiplier")
    JK = face_of_multiplier(loc, lam)
    N = normal_face_cone(loc, JK, d)
    if conic_coefficients(N, eta) is None:
        raise ValueError("eta is not normal to the critical cone at the direction")
    bad = face_metreg_failures(loc, loc.Jt, JK, d, eta)
    element = tuple(a + c for a, c in zip(offset_matrix(sys, qu) @ lam, loc.b.T @ eta))
    cert = {"element": element, "lambda": lam, "eta": eta, "face": JK}
    if not bad:
        cert["derivable"] = True
        return Verdict("dg_lower_witness", HOLDS, cert)
    cert["failing_face"] = bad[0][0]
    cert["kernel_vector"] = bad[0][1]
    cert["note"] = "in DPsi, DG-membership uncertified"
    return Verdict("dg_lower_witness", INCONCLUSIVE, cert)


# ------------------------------------------------------- existence of u

class NotExact(Exception):
    """Raised where an exact answer needs affine g."""


def solution_system(sys: VarSystem, JF, Jd, Jeta, TP: Optional[HCone] = None,
                    q_fixed=None) -> tuple:
    """Cone of (q, u, rho) with grad gt (q,u) in the face Jd of T,
    eta = sum_{i in Jeta} rho_i a_i (rho_i >= 0 off JF) and
    grad f (q,u) + b' eta = 0.  Affine g only.

    Returns (HCone, index list of Jeta).  With q_fixed the q-part is
    substituted and the result is an LP over (u, rho) instead.
    """
    loc = sys.local
    T = loc.T
    l, n = sys.l, sys.n
    je = sorted(Jeta)
    k = len(je)
    m = l + n
    dim = m + k
    rows, eqs = [], []
    for i, a in enumerate(T.rows):
        r = tuple(dot(a, loc.Jt.col(j)) for j in range(m)) + zeros(k)
        (eqs if i in Jd else rows).append(r)
    for t, i in enumerate(je):
        if i not in JF:
            r = [ZERO] * dim
            r[m + t] = -ONE
            rows.append(tuple(r))
    bta = [loc.b.T @ T.rows[i] for i in je]
    for c in range(n):
        r = tuple(loc.Jf.rows[c]) + tuple(v[c] for v in bta)
        eqs.append(r)
    if TP is not None:
        for i, a in enumerate(TP.rows):
            r = tuple(a) + zeros(n + k)
            (eqs if i in TP.eq else rows).append(r)
    if q_fixed is None:
        return HCone(dim, rows + eqs, range(len(rows), len(rows) + len(eqs))), je
    q = vec(q_fixed)
    sub = lambda r: (r[l:], -dot(r[:l], q))
    return LinProgram(dim - l, (), [sub(r) for r in eqs], [sub(r) for r in rows]), je


def _eta_from(loc: LocalData, je, rho) -> tuple:
    eta = zeros(loc.T.dim)
    for c, i in zip(rho, je):
        if c:
            eta = tuple(e + c * a for e, a in zip(eta, loc.T.rows[i]))
    return eta


def existence_u(sys: VarSystem, q, candidates=None):
    """(u, lam, eta) with 0 in grad f(q,u) + DPsi(q,u,u), or None."""
    q = vec(q)
    loc = sys.local
    if not sys.g_affine:
        if candidates is None:
            raise NotExact("quadratic g: supply candidate u vectors")
        for u in candidates:
            qu = q + vec(u)
            v = tuple(-x for x in loc.Jf @ qu)
            wit = dpsi(sys, None, qu, waive_assumption1=True).member(v)
            if wit is not None:
                return vec(u), wit[0], wit[1]
        return None
    for JF, lam in lambda_strata(sys):
        for J2 in loc.Tfaces:
            if not JF <= J2:
                continue
            lp, je = solution_system(sys, JF, J2, J2, q_fixed=q)
            res = lp_solve(lp)
            if res.optimal:
                u = res.point[:sys.n]
                eta = _eta_from(loc, je, res.point[sys.n:])
                return u, lam, eta
    return None
