"""Reference data shared by the tests: bundled systems, small toys, and the
closed-form solution map of the two-dimensional example."""

from fractions import Fraction as F

from varstab import example_path, load_system
from varstab.polyhedra import HCone, PolySet, VCone, vcone_to_hcone
from varstab.sysmodel import PolyFunc2, VarSystem


def socic_system():
    return load_system(example_path("ex_socic.json"))


def relaubin_system():
    return load_system(example_path("ex_relaubin.json"))


def nondegen6_system():
    return load_system(example_path("ex_nondegen6.json"))


def closed_form_S(p):
    """S(p) of the two-dimensional example, written out case by case."""
    p1, p2 = F(p[0]), F(p[1])
    if p2 - p1 <= 0 and p1 >= 0:
        return {(p1, F(0)), (p1, (p1 - p2) / 2)}
    if p2 - 2 * p1 <= 0 and p1 < 0:
        return {(p1, -p1 / 2), (p1, (p1 - p2) / 2)}
    return set()


def closed_form_case(p):
    p1, p2 = F(p[0]), F(p[1])
    if p2 - p1 <= 0 and p1 >= 0:
        return 1
    if p2 - 2 * p1 <= 0 and p1 < 0:
        return 2
    return 3


def cone_of(*rays, dim=2):
    return vcone_to_hcone(VCone(dim, [tuple(F(x) for x in r) for r in rays], []))


def with_tp(sys, TP):
    return VarSystem(sys.l, sys.n, sys.s, sys.f, sys.g, sys.D, sys.pbar, sys.xbar, TP)


def nonpos(dim):
    return PolySet.orthant(dim)


def canonical_perturbation_toy():
    """0 in -p + N_{R_-}(x): S(0) = R_-, not isolated."""
    f = PolyFunc2.affine([[-1, 0]])
    g = PolyFunc2.affine([[0, 0, 1]])
    return VarSystem(1, 1, 1, f, g, PolySet(1, [((1,), 0)]), (0,), (0,))


def robinson_fail_toy():
    """g = (z, -z) in R^2_-: N_D = R^2_+ and mu = (1,1) annihilates grad_z g."""
    f = PolyFunc2.affine([[0, 0]])
    g = PolyFunc2.affine([[0, 0, 1], [0, 0, -1]])
    return VarSystem(1, 1, 2, f, g, nonpos(2), (0,), (0,))


def duplicated_rows_toy():
    """gt = (x, x) in R^2_-: ker grad gt' contains (1,-1)."""
    f = PolyFunc2.affine([[1]])
    g = PolyFunc2.affine([[1, 0], [1, 0]])
    return VarSystem(0, 1, 2, f, g, nonpos(2), (), (0,))


def free_space_system(n=2, l=1):
    """D = R^s (no constraints), f(p,x) = x - p-ish with invertible grad_2 f."""
    lin = []
    for i in range(n):
        row = [0] * (l + n)
        row[l + i] = 1
        if i < l:
            row[i] = -1
        lin.append(row)
    f = PolyFunc2.affine(lin)
    g = PolyFunc2.affine([[0] * (l + 2 * n)])
    return VarSystem(l, n, 1, f, g, PolySet(1, []), (0,) * l, (0,) * n)
