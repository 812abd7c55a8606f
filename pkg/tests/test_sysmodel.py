import json
from fractions import Fraction as F

import pytest

from examples_ref import nondegen6_system, nonpos, socic_system
from varstab.exactmath import RatMatrix
from varstab.polyhedra import PolySet
from varstab.sysmodel import (
    PolyFunc2, UnboundedMultipliers, VarSystem, derive_b_at, lagrangian_grad,
    lagrangian_grad2, multiplier_Lambda, multiplier_Lambda_dir,
    multiplier_LambdaTilde, multiplier_Xi, multiplier_Xi_dir, system_from_json,
    system_to_json,
)


def test_gtilde_and_b_of_example():
    s = socic_system()
    gt = s.gtilde
    # gt(p,x) = (p2 - x1 + 2 x2, -x1 - 2 x2)
    assert gt.lin == ((0, 1, -1, 2), (0, 0, -1, -2))
    assert derive_b_at(s, (0, 0), (0, 0)) == RatMatrix([[0, 1], [0, 1]])
    assert derive_b_at(s, (3, -1), (F(1, 2), 7)) == RatMatrix([[0, 1], [0, 1]])


def test_identity_g():
    f = PolyFunc2.affine([[0, 1]])
    g = PolyFunc2.affine([[0, 0, 1]])
    s = VarSystem(1, 1, 1, f, g, PolySet(1, []), (0,), (0,))
    assert s.gtilde.lin == ((0, 1),)
    assert derive_b_at(s, (0,), (0,)) == RatMatrix.identity(1)


def test_chain_rule_identity():
    s = nondegen6_system()
    y = (F(1, 3), F(-2), F(1), F(5, 7))
    Jt = s.gtilde.jacobian(y)
    Jg = s.g.jacobian(y + y)
    n = s.n
    for i in range(s.s):
        for j in range(n):
            assert Jt.rows[i][j] == Jg.rows[i][j] + Jg.rows[i][n + j]


def test_lagrangian_example():
    s = socic_system()
    assert lagrangian_grad2(s, (0, 0)) == RatMatrix([[1, 0], [0, -1]])
    # affine g: the b-term has no derivative
    assert lagrangian_grad(s, (5, 3)) == s.f.jacobian(s.px)


def test_lagrangian_quadratic_term():
    s = nondegen6_system()
    lam = (0, 0, 0, 0, 7, 0)
    J = lagrangian_grad(s, lam)
    # d/dx1 of lam5 * d/dz1 (z1^2) at z = x is 2 * lam5
    assert J.rows[0][0] == 14
    assert all(J.rows[i][j] == 0 for i in range(4) for j in range(4) if (i, j) != (0, 0))


def test_xi_of_example():
    s = socic_system()
    xi = multiplier_Xi(s, s.px, s.xstar)
    assert xi.point() == (0, 0)
    assert not xi.contains((1, 0))
    for u in [(1, 0), (-1, 0), (3, -1)]:
        qu = (0, 0) + u
        assert multiplier_Xi_dir(s, s.px, s.xstar, qu).point() in (None, (0, 0))
        strata = multiplier_LambdaTilde(s, s.px, s.xstar, qu)
        for st in strata:
            assert st.point() == (0, 0)


def test_xi_dir_empty_outside_tangent():
    s = socic_system()
    # grad gt (0,u) with u = (1,0) is (-1,-1), inside; u = (-1,0) gives (1,1), outside
    assert multiplier_Xi_dir(s, s.px, s.xstar, (0, 0, -1, 0)).is_empty()
    assert multiplier_LambdaTilde(s, s.px, s.xstar, (0, 0, -1, 0)) == []


def test_lambda_tilde_row3_direction():
    s = socic_system()
    strata = multiplier_LambdaTilde(s, s.px, s.xstar, (-1, -2, -1, F(1, 2)))
    assert [st.point() for st in strata] == [(0, 0)]


def test_free_space_multipliers():
    f = PolyFunc2.affine([[0, 1]])
    g = PolyFunc2.affine([[0, 0, 1]])
    s = VarSystem(1, 1, 1, f, g, PolySet(1, []), (0,), (0,))
    assert multiplier_Lambda(s, (0, 0, 0), (0, 0, 0)).point() == (0,)
    assert multiplier_Lambda(s, (0, 0, 0), (0, 0, 1)).is_empty()


def test_directional_argmax_selects_vertex():
    # g = (z, z + z^2): Lambda = {lam >= 0 : lam1 + lam2 = c}, curvature 2 lam2
    g = PolyFunc2(2, [0, 0], [[0, 1], [0, 1]], [[[0, 0], [0, 0]], [[0, 0], [0, 1]]])
    f = PolyFunc2(1, [0], [[0]], [[[0]]])
    s = VarSystem(0, 1, 2, f, g, nonpos(2), (), (0,))
    c = F(3)
    base = multiplier_Lambda(s, (0, 0), (0, c))
    assert base.contains((c, 0)) and base.contains((0, c))
    d = multiplier_Lambda_dir(s, (0, 0), (0, c), (0, 1))
    assert d.point() == (0, c)
    assert not d.contains((c, 0))


def test_directional_argmax_unbounded():
    # g = (z, z^2): lam2 is unconstrained by the stationarity equation
    g = PolyFunc2(2, [0, 0], [[0, 1], [0, 0]], [[[0, 0], [0, 0]], [[0, 0], [0, 1]]])
    f = PolyFunc2(1, [0], [[0]], [[[0]]])
    s = VarSystem(0, 1, 2, f, g, nonpos(2), (), (0,))
    with pytest.raises(UnboundedMultipliers):
        multiplier_Lambda_dir(s, (0, 0), (0, 3), (0, 1))


def test_affine_directional_equals_plain():
    s = socic_system()
    y = s.ybar
    ys = (0, 0, 0, 0, 0, 0)
    a = multiplier_Lambda(s, y, ys)
    b = multiplier_Lambda_dir(s, y, ys, (1, 2, 3, 4, 5, 6))
    assert a.poly == b.poly


def test_reference_feasibility_checked():
    f = PolyFunc2.affine([[0, 1]])
    g = PolyFunc2.affine([[0, 0, 1]], [1])
    with pytest.raises(ValueError, match="infeasible"):
        VarSystem(1, 1, 1, f, g, PolySet.orthant(1), (0,), (0,))


def test_lambda_rejects_infeasible_point():
    s = socic_system()
    # p2 = 1 puts the first component of g at 1 > 0
    with pytest.raises(ValueError, match="not in D"):
        multiplier_Lambda(s, (0, 1, 0, 0, 0, 0), (0,) * 6)


@pytest.mark.parametrize("make", [socic_system, nondegen6_system])
def test_json_roundtrip(make):
    s = make()
    again = system_from_json(json.loads(json.dumps(system_to_json(s))))
    assert again == s


def test_bad_component_variable():
    obj = system_to_json(socic_system())
    obj["f"][0]["lin"]["y9"] = "1"
    with pytest.raises(ValueError, match="unknown variable"):
        system_from_json(obj)
