from fractions import Fraction as F

import pytest

from examples_ref import (
    canonical_perturbation_toy, cone_of, duplicated_rows_toy, nondegen6_system,
    nonpos, relaubin_system, robinson_fail_toy, socic_system, with_tp,
)
from varstab.exactmath import RatMatrix
from varstab.graphder import existence_u
from varstab.polyhedra import HCone, PolySet
from varstab.sysmodel import PolyFunc2, VarSystem
from varstab.verdicts import (
    check_assumption1, check_aubin, check_F_dirmetreg, check_isolated_calmness,
    check_metreg_M_dir, check_nondegen_dir, check_nondegeneracy, check_rel_aubin,
    check_robinson_cq, check_socic, check_socic_dir, stratify_directions,
)


def free_system():
    f = PolyFunc2.affine([[-1, 1]])
    g = PolyFunc2.affine([[0, 0, 1]])
    return VarSystem(1, 1, 1, f, g, PolySet(1, []), (0,), (0,))


def pinned_system():
    """gt = (x, -x) in R^2_-: the only admissible u is 0."""
    f = PolyFunc2.affine([[-1, 1]])
    g = PolyFunc2.affine([[0, 0, 1], [0, -2, 1]])
    return VarSystem(1, 1, 2, f, g, nonpos(2), (0,), (0,))


# ------------------------------------------------ Robinson and Assumption 1

def test_robinson_example_holds():
    assert check_robinson_cq(socic_system()).status == "HOLDS"
    assert check_robinson_cq(free_system()).status == "HOLDS"


def test_robinson_toy_fails_with_witness():
    s = robinson_fail_toy()
    v = check_robinson_cq(s)
    assert v.status == "FAILS"
    mu = v.certificate["mu"]
    # mu in N_{R^2_-}(0) = R^2_+, nonzero, and grad_z g' mu = mu1 - mu2 = 0
    assert all(x >= 0 for x in mu) and any(mu)
    assert s.local.b.T @ mu == (0,)
    assert mu[0] == mu[1]


def test_assumption1():
    assert check_assumption1(socic_system()).status == "HOLDS"
    assert check_assumption1(free_system()).status == "HOLDS"
    assert check_assumption1(robinson_fail_toy()).status == "INCONCLUSIVE"


# ------------------------------------------------------ non-degeneracy

@pytest.mark.parametrize("v", [(0, 0, 0, 0), (1, 0, 1, 0), (-1, -2, -1, F(1, 2)), (0, 1, 0, 0)])
def test_nondegeneracy_example_full_rank(v):
    assert check_nondegeneracy(socic_system(), v).status == "HOLDS"


def test_nondegeneracy_six_rows_at_zero():
    s = nondegen6_system()
    v = check_nondegeneracy(s, (0, 0, 0, 0))
    assert v.status == "FAILS"
    mu = v.certificate["mu"]
    assert any(mu) and s.local.Jt.T @ mu == (0, 0, 0, 0)


def test_nondegeneracy_six_rows_every_direction():
    s = nondegen6_system()
    strat = stratify_directions(s, "qu")
    cells = strat.nonzero_cells()
    assert cells
    for c in cells:
        assert check_nondegeneracy(s, c.rep).status == "HOLDS", c.signs


@pytest.mark.parametrize("rows,expect", [
    ([[1, 0], [0, 1]], "HOLDS"),
    ([[1, 0], [2, 0]], "FAILS"),
    ([[1, 0], [0, 1], [1, 1]], "FAILS"),
    ([[1, 2]], "HOLDS"),
])
def test_nondegeneracy_orthant_is_linear_independence(rows, expect):
    jac = RatMatrix(rows)
    s = len(rows)
    assert check_nondegen_dir(jac, nonpos(s), (0,) * s, (0,) * s).status == expect


def test_nondegeneracy_vacuous_outside_tangent():
    v = check_nondegen_dir(RatMatrix([[1, 0], [2, 0]]), nonpos(2), (0, 0), (1, 0))
    assert v.status == "HOLDS" and v.certificate["vacuous"]


# -------------------------------------------- metric subregularity of F

def test_F_dirmetreg_example():
    s = socic_system()
    assert check_F_dirmetreg(s, (1, 0, 1, 0), (0, 0), (0, 0)).status == "HOLDS"
    assert check_F_dirmetreg(s, (1, 0, 1, F(1, 2)), (0, 0), (F(1, 2), 0)).status == "HOLDS"


def test_F_dirmetreg_free_space():
    assert check_F_dirmetreg(free_system(), (1, 1), (0,), (0,)).status == "HOLDS"


def test_F_dirmetreg_duplicated_rows():
    s = duplicated_rows_toy()
    v = check_F_dirmetreg(s, (0,), (0, 0), (0, 0))
    assert v.status == "FAILS"
    mu = v.certificate["mu"]
    assert any(mu) and s.local.Jt.T @ mu == (0,)


def test_F_dirmetreg_rejects_pair_outside_theta():
    with pytest.raises(ValueError, match="Theta"):
        check_F_dirmetreg(socic_system(), (1, 0, 1, 0), (0, 0), (1, 0))


# ----------------------------------------------------------------- SOCIC

def test_socic_example_holds_with_family():
    v = check_socic(socic_system())
    assert v.status == "HOLDS"
    # v = (-u1, 0)
    assert v.certificate["v_family"] == RatMatrix([[-1, 0], [0, 0]])
    for entry in v.strata:
        u = entry["rep"]
        assert entry["v"] == (-u[0], 0)


@pytest.mark.parametrize("u", [(1, 0), (3, -1), (1, F(1, 4)), (2, -1)])
def test_socic_direction_example(u):
    v = check_socic_dir(socic_system(), u)
    assert v.status == "HOLDS"


def test_socic_vacuous_when_no_direction_admissible():
    v = check_socic(pinned_system())
    assert v.status == "HOLDS" and v.certificate["vacuous"]


def test_socic_one_dimensional_toy_fails():
    s = canonical_perturbation_toy()
    v = check_socic(s)
    assert v.status == "FAILS"
    assert v.certificate["u"] == (-1,)
    d = check_socic_dir(s, (-1,))
    assert d.status == "FAILS"
    # u > 0 is not admissible, so that direction is fine
    assert check_socic_dir(s, (1,)).status == "HOLDS"


def test_socic_rejects_zero_direction():
    with pytest.raises(ValueError):
        check_socic_dir(socic_system(), (0, 0))


def test_socic_quadratic_global_inconclusive():
    v = check_socic(nondegen6_system())
    assert v.status == "INCONCLUSIVE"
    assert "per-direction" in v.certificate["note"]


# ------------------------------------------------------ isolated calmness

def test_isolated_calmness_example_holds():
    assert check_isolated_calmness(socic_system()).status == "HOLDS"


def test_isolated_calmness_canonical_toy_disproved():
    v = check_isolated_calmness(canonical_perturbation_toy())
    assert v.status == "DISPROVED"
    assert all(p["status"] in ("HOLDS", "FAILS") for p in v.prerequisites)
    names = {p["name"]: p["status"] for p in v.prerequisites}
    assert names["assumption1"] == names["nondegeneracy"] == names["metreg_M_dir"] == "HOLDS"
    assert names["socic"] == "FAILS"


def test_isolated_calmness_quadratic_inconclusive():
    assert check_isolated_calmness(nondegen6_system()).status == "INCONCLUSIVE"


# ---------------------------------------------------- metric regularity

def test_metreg_example_at_zero():
    v = check_metreg_M_dir(socic_system(), (0, 0, 0, 0))
    assert v.status == "HOLDS"
    assert v.certificate["face_pairs"] > 0


def test_metreg_free_space():
    assert check_metreg_M_dir(free_system(), (0, 0)).status == "HOLDS"
    assert check_metreg_M_dir(free_system(), (1, -1)).status == "HOLDS"


@pytest.mark.parametrize("w2", [1, -1, F(3, 2)])
def test_metreg_w1_zero_branch_witness(w2):
    # the hand-built witness: u2 = -w2, u1 = -2 u2, q2 = u1 - 2 u2
    s = socic_system()
    loc = s.local
    u2 = -F(w2)
    u1 = -2 * u2
    q2 = u1 - 2 * u2
    qu = (0, q2, u1, u2)
    assert loc.Jt @ qu == (0, 0)
    w = (0, F(w2))
    assert sum(a * b for a, b in zip(w, loc.Jf @ qu)) > 0


def test_metreg_degenerate_direction_inconclusive():
    v = check_metreg_M_dir(duplicated_rows_toy(), (0,))
    assert v.status == "INCONCLUSIVE"


# ---------------------------------------------------------------- Aubin

@pytest.mark.parametrize("rays", [
    [(1, 0), (-1, -3)],
    [(1, 0)],
    [(1, 0), (0, -1)],
    [(-1, -3), (-1, -5)],
])
def test_rel_aubin_holds_inside_domain(rays):
    s = socic_system()
    v = check_rel_aubin(s, cone_of(*rays))
    assert v.status == "HOLDS"
    assert v.strata


def test_rel_aubin_fails_on_ray_one_one():
    s = relaubin_system()
    v = check_rel_aubin(s)
    assert v.status == "FAILS"
    c = v.certificate
    assert c["condition"] == "ii-face-pairs"
    # F1 = R^2_-, F2 = {0} x R_-
    assert c["F1"] == frozenset() and c["F2"] == frozenset({0})
    w = c["w"]
    assert w[0] * 2 == w[1] and w[0] < 0
    assert (1, 1) in c["rays"]


def test_rel_aubin_fails_on_ray_minus_one_minus_two():
    v = check_rel_aubin(socic_system(), cone_of((-1, -2)))
    assert v.status == "FAILS"
    assert v.certificate["rays"] == [(-1, -2)]


def test_aubin_whole_space_fails_condition_i():
    s = socic_system()
    v = check_aubin(s)
    assert v.status == "FAILS" and v.certificate["condition"] == "i"
    q = v.certificate["q"]
    # the witness lies outside {q2 - q1 <= 0, q2 - 2 q1 <= 0}
    assert q[1] - q[0] > 0 or q[1] - 2 * q[0] > 0
    assert existence_u(s, q) is None


def test_rel_aubin_uses_problem_cone():
    s = relaubin_system()
    assert s.TP is not None
    assert check_rel_aubin(with_tp(s, cone_of((1, 0)))).status == "HOLDS"


# -------------------------------------------------------- stratification

def test_stratification_single_line():
    st = stratify_directions(None, 2, [(1, 0)])
    assert len(st.cells) == 3


def test_stratification_empty_list():
    st = stratify_directions(None, 3, [])
    assert len(st.cells) == 1


def test_stratification_table_regions():
    s = socic_system()
    st = stratify_directions(s, "q", [(-1, 1), (-2, 1), (1, 0)])
    # three lines through the origin: six sectors, six rays, the origin
    assert len(st.cells) == 13
    for c in st.nonzero_cells():
        q1, q2 = c.rep
        solvable = existence_u(s, c.rep) is not None
        assert solvable == (q2 - q1 <= 0 and q2 - 2 * q1 <= 0), c.signs


def test_stratification_locate():
    st = stratify_directions(None, 2, [(1, 0), (0, 1)])
    for w in [(1, 1), (-3, 0), (0, 5), (2, -7)]:
        c = st.locate(w)
        assert c.signs == tuple((x > 0) - (x < 0) for x in w)
