"""Seeded randomized property suites: small integer instances, dims <= 4,
rows <= 8, at least CASES instances each."""

import random
from fractions import Fraction as F

import sympy

from varstab.exactmath import (
    LinProgram, RatMatrix, dot, is_zero, kernel_basis, lp_solve, rank, span_basis,
)
from varstab.graphder import existence_u, gph_normal_tangent_member, theta_member
from varstab.polyhedra import (
    HCone, PolySet, conic_coefficients, critical_cone, face_diff_cone, faces,
    generators, normal_at, polar, polar_v, polyset_vrep, ri_contains, same_cone,
    tangent_cone,
)
from varstab.sysmodel import PolyFunc2, VarSystem, lagrangian_grad
from varstab.verdicts import (
    check_F_dirmetreg, check_metreg_M_dir, check_nondegen_dir, check_rel_aubin,
    check_robinson_cq, check_socic, stratify_directions,
)

CASES = 200


def rvec(rng, dim, lo=-3, hi=3):
    return tuple(rng.randint(lo, hi) for _ in range(dim))


def rcone(rng, dim=None, rows=None, eq_prob=0.1):
    dim = dim or rng.randint(1, 4)
    rows = rows if rows is not None else rng.randint(0, min(8, 2 * dim))
    rs = [rvec(rng, dim) for _ in range(rows)]
    eq = [i for i in range(rows) if rng.random() < eq_prob]
    return HCone(dim, rs, eq)


def rpoint_in(rng, C: HCone):
    g = generators(C)
    x = [0] * C.dim
    for r in g.rays:
        c = rng.randint(0, 3)
        x = [a + c * b for a, b in zip(x, r)]
    for li in g.lines:
        c = rng.randint(-3, 3)
        x = [a + c * b for a, b in zip(x, li)]
    return tuple(F(a) for a in x)


def rcombo(rng, V):
    """A random element of the cone generated by a VCone."""
    x = [F(0)] * V.dim
    for r in V.rays:
        c = rng.randint(0, 2)
        x = [a + c * b for a, b in zip(x, r)]
    for li in V.lines:
        c = rng.randint(-2, 2)
        x = [a + c * b for a, b in zip(x, li)]
    return tuple(x)


def in_span(v, rows, dim):
    basis = span_basis(list(rows), dim)
    if is_zero(v):
        return True
    return bool(basis) and rank(basis + [tuple(v)]) == len(basis)


def linear_system(rng, n, s, Drows):
    """l = 0, gt(x) = G x, D a random cone in R^s, f(x) = H x."""
    G = [rvec(rng, n) for _ in range(s)]
    H = [rvec(rng, n) for _ in range(n)]
    f = PolyFunc2.affine([list(r) for r in H])
    g = PolyFunc2.affine([list(r) + [0] * n for r in G])
    D = PolySet(s, [(r, 0) for r in Drows])
    return VarSystem(0, n, s, f, g, D, (), (0,) * n), RatMatrix(G)


def test_polar_involution():
    rng = random.Random(101)
    for _ in range(CASES):
        C = rcone(rng)
        assert same_cone(polar_v(polar(C)), C)


def test_face_partition():
    rng = random.Random(202)
    for _ in range(CASES):
        C = rcone(rng)
        x = rpoint_in(rng, C)
        hits = [J for J in faces(C) if ri_contains(C, J, x)]
        assert len(hits) == 1, (C, x, hits)


def test_dual_primal_nondegeneracy_agree():
    # check_nondegen_dir raises AssertionError when the two forms disagree
    rng = random.Random(303)
    seen = set()
    for _ in range(CASES):
        s = rng.randint(1, 4)
        m = rng.randint(0, 4)
        jac = RatMatrix([rvec(rng, m) for _ in range(s)], m)
        D = PolySet(s, [(rvec(rng, s), 0) for _ in range(rng.randint(0, 8))])
        d = rpoint_in(rng, tangent_cone(D, (0,) * s)) if rng.random() < 0.8 else rvec(rng, s)
        seen.add(check_nondegen_dir(jac, D, (0,) * s, d).status)
    assert seen == {"HOLDS", "FAILS"}


def theta_cases(seed):
    """Random (system, v, lam, eta) with (lam, eta) in Theta(ybar, v)."""
    rng = random.Random(seed)
    out = []
    while len(out) < CASES:
        n, s = rng.randint(1, 3), rng.randint(1, 4)
        sysm, G = linear_system(rng, n, s, [rvec(rng, s) for _ in range(rng.randint(0, 6))])
        T = sysm.local.T
        v = rvec(rng, n)
        d = G @ v
        if not T.contains(d):
            continue
        lam = rcombo(rng, normal_at(T, d))
        K = critical_cone(sysm.D, (0,) * s, lam)
        eta = rcombo(rng, normal_at(K, d))
        out.append((sysm, v, lam, eta, d, K))
    return out


def test_single_face_matches_all_faces():
    # check_F_dirmetreg runs both tests and raises on disagreement
    seen = set()
    for sysm, v, lam, eta, _, _ in theta_cases(404):
        seen.add(check_F_dirmetreg(sysm, v, lam, eta).status)
    assert seen == {"HOLDS", "FAILS"}


def test_union_of_polars_is_span_of_normals():
    for sysm, v, lam, eta, d, K in theta_cases(505):
        s = sysm.s
        T = sysm.local.T
        target = [a for a in T.rows if dot(a, d) == 0]
        polars = []
        for J in faces(K):
            rows = [K.rows[i] for i in J]
            if any(dot(r, d) != 0 for r in rows) or not in_span(eta, rows, s):
                continue
            polars.append(rows)
        assert polars
        # every (F-F)° sits inside span N_T(d) ...
        for rows in polars:
            assert all(in_span(r, target, s) for r in rows)
        # ... and one of them is all of it, so the union equals the span
        assert any(all(in_span(a, rows, s) for a in target) for rows in polars)


def test_theta_is_shifted_gph_tangent():
    for sysm, v, lam, eta, d, _ in theta_cases(606)[:50]:
        assert theta_member(sysm, v, lam, eta)
        assert theta_member(sysm, v, lam, eta) == gph_normal_tangent_member(
            sysm.D, (0,) * sysm.s, lam, d, eta)
        bad = tuple(e + 1 for e in eta)
        assert theta_member(sysm, v, lam, bad) == gph_normal_tangent_member(
            sysm.D, (0,) * sysm.s, lam, d, bad)


def test_lp_matches_vertex_enumeration():
    rng = random.Random(707)
    for _ in range(CASES):
        dim = rng.randint(1, 4)
        box = []
        for i in range(dim):
            e = tuple(1 if j == i else 0 for j in range(dim))
            box.append((e, rng.randint(1, 4)))
            box.append((tuple(-x for x in e), rng.randint(1, 4)))
        cuts = [(rvec(rng, dim), rng.randint(-1, 4)) for _ in range(rng.randint(0, 8 - 2 * dim if dim < 4 else 0))]
        P = PolySet(dim, box + cuts)
        c = rvec(rng, dim)
        res = lp_solve(P.lp(c))
        verts, rays, lines = polyset_vrep(P)
        assert not rays and not lines
        if not verts:
            assert res.status == "INFEASIBLE"
            continue
        assert res.optimal
        assert res.value == max(dot(c, v) for v in verts)


def test_rank_and_kernel_against_sympy():
    rng = random.Random(808)
    for _ in range(CASES):
        r, c = rng.randint(1, 4), rng.randint(1, 4)
        rows = [rvec(rng, c, -2, 2) for _ in range(r)]
        if rng.random() < 0.3:
            rows.append(tuple(a + b for a, b in zip(rows[0], rows[-1])))
        M = sympy.Matrix(rows)
        rk = rank(rows)
        ker = kernel_basis(rows, c)
        assert rk == M.rank()
        assert rk + len(ker) == c
        for k in ker:
            assert all(dot(row, k) == 0 for row in rows)


def random_affine_system(rng):
    n, s = rng.randint(1, 2), rng.randint(1, 3)
    l = rng.randint(0, 2)
    m = l + 2 * n
    f = PolyFunc2.affine([list(rvec(rng, l + n, -2, 2)) for _ in range(n)])
    g = PolyFunc2.affine([list(rvec(rng, m, -2, 2)) for _ in range(s)])
    D = PolySet(s, [(rvec(rng, s, -1, 1), 0) for _ in range(rng.randint(0, 3))])
    return VarSystem(l, n, s, f, g, D, (0,) * l, (0,) * n)


def test_fails_witnesses_reverify():
    rng = random.Random(909)
    fails = {"robinson": 0, "nondegeneracy": 0, "F": 0, "socic": 0}
    for sysm, v, lam, eta, d, _ in theta_cases(910):
        res = check_F_dirmetreg(sysm, v, lam, eta)
        if res.status == "FAILS":
            fails["F"] += 1
            mu, J = res.certificate["mu"], res.certificate["face"]
            T = sysm.local.T
            assert not is_zero(mu)
            assert sysm.local.Jt.T @ mu == (0,) * sysm.n
            assert in_span(mu, [T.rows[i] for i in J], sysm.s)
        nd = check_nondegen_dir(sysm.local.Jt, sysm.D, (0,) * sysm.s, d)
        if nd.status == "FAILS":
            fails["nondegeneracy"] += 1
            mu = nd.certificate["mu"]
            T = sysm.local.T
            assert not is_zero(mu) and sysm.local.Jt.T @ mu == (0,) * sysm.n
            assert in_span(mu, [T.rows[i] for i in nd.certificate["active_rows"]], sysm.s)
    count = 0
    while count < CASES:
        sysm = random_affine_system(rng)
        count += 1
        loc = sysm.local
        rc = check_robinson_cq(sysm)
        if rc.status == "FAILS":
            fails["robinson"] += 1
            mu = rc.certificate["mu"]
            assert not is_zero(mu)
            assert all(dot(r, mu) <= 0 for r in loc.Nineq) and all(dot(x, mu) == 0 for x in loc.Neq)
            assert loc.b.T @ mu == (0,) * sysm.n
            continue
        sc = check_socic(sysm)
        if sc.status == "FAILS":
            fails["socic"] += 1
            c = sc.certificate
            u, lam, eta = c["u"], c["lambda"], c["eta"]
            qu = (0,) * sysm.l + u
            dd = loc.Jt @ qu
            assert not is_zero(u)
            # lam in N_D, grad gt (0,u) in K_D(gt, lam), eta in N_K(grad gt (0,u))
            assert all(dot(r, lam) <= 0 for r in loc.Nineq)
            K = critical_cone(sysm.D, loc.z, lam)
            assert K.contains(dd)
            assert gph_normal_tangent_member(sysm.D, loc.z, lam, dd, eta)
            # 0 = grad f (0,u) + b' eta, and b' lam = xstar
            assert tuple(a + b for a, b in zip(loc.Jf @ qu, loc.b.T @ eta)) == (0,) * sysm.n
            assert loc.b.T @ lam == sysm.xstar
    assert all(fails.values()), fails


def test_stratification_cells_partition():
    rng = random.Random(1111)
    for _ in range(CASES):
        dim = rng.randint(1, 3)
        hs = [rvec(rng, dim, -2, 2) for _ in range(rng.randint(0, 4))]
        st = stratify_directions(None, dim, hs)
        w = rvec(rng, dim, -5, 5)
        signs = tuple((dot(h, w) > 0) - (dot(h, w) < 0) for h in st.hyperplanes)
        hits = [c for c in st.cells if c.signs == signs]
        assert len(hits) == 1
        assert st.locate(w) is hits[0]


def _check_w_certificate(loc, Lmat, Gmat, c):
    """b w in F1 - F2, xi in (F1 - F2)°, L' w = G' xi, w != 0."""
    w, xi = c["w"], c["xi"]
    C = face_diff_cone(loc.T, c["F1"], c["F2"])
    assert not is_zero(w)
    assert C.contains(loc.b @ w)
    assert conic_coefficients(polar(C), xi) is not None
    assert Lmat.T @ w == Gmat.T @ xi


def test_metreg_and_aubin_witnesses_reverify():
    rng = random.Random(1212)
    seen = {"i": 0, "ii": 0, "metreg": 0}
    done = 0
    while done < CASES:
        sysm = random_affine_system(rng)
        if sysm.l == 0 or check_robinson_cq(sysm).status != "HOLDS":
            continue
        done += 1
        loc = sysm.local
        l, n = sysm.l, sysm.n
        qu = (0,) * (l + n) if rng.random() < 0.5 else rvec(rng, l + n, -2, 2)
        mr = check_metreg_M_dir(sysm, qu)
        if mr.status == "FAILS":
            seen["metreg"] += 1
            L = lagrangian_grad(sysm, mr.certificate["lambda"])
            _check_w_certificate(loc, L, loc.Jt, mr.certificate)
        ra = check_rel_aubin(sysm, HCone.whole(l))
        c = ra.certificate
        if ra.status != "FAILS":
            continue
        if c["condition"] == "i":
            seen["i"] += 1
            assert existence_u(sysm, c["q"]) is None
        elif c["condition"] == "ii-face-pairs":
            seen["ii"] += 1
            qu2 = c["q"] + c["u"]
            d = loc.Jt @ qu2
            assert not is_zero(qu2)
            assert loc.T.contains(d) and all(dot(loc.T.rows[i], d) == 0 for i in c["F2"])
            res = tuple(a + b for a, b in zip(loc.Jf @ qu2, loc.b.T @ c["eta"]))
            assert res == (0,) * n
            H = loc.Jf.select_cols(range(l, l + n))
            _check_w_certificate(loc, H, loc.J2, c)
    assert all(seen.values()), seen
