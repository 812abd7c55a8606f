"""
Aubin property relative to a cone of parameter directions
=========================================================

The same example fails the plain Aubin property.  Restricted to a cone
of parameter directions it can hold again, as long as the cone stays
away from the two rays where solution branches meet.
"""

from fractions import Fraction as F

from varstab import check_aubin, check_rel_aubin, example_path, load_system
from varstab.polyhedra import VCone, vcone_to_hcone
from varstab.verdicts import solution_strata


def cone(*rays):
    return vcone_to_hcone(VCone(2, list(rays), []))


def show(v):
    return "(" + ", ".join(str(x) for x in v) + ")"


sys_ = load_system(example_path("ex_socic.json"))

plain = check_aubin(sys_)
print(plain, "condition", plain.certificate["condition"])

# the solution map splits into strata; u depends linearly on q on each
for st in solution_strata(sys_):
    print("active", sorted(st.face2), "u = M q with M =", st.u_map())

# the whole domain contains both bad rays
dom = check_rel_aubin(sys_, cone((1, 1), (-1, -2)))
print(dom, "bad rays:", ", ".join(show(r) for r in dom.certificate["rays"]))

# a cone inside the domain that avoids them
inner = check_rel_aubin(sys_, cone((1, 0), (-1, -3)))
print(inner)

# creep toward (1, 1) from below: still fine until the ray itself
for t in [F(1, 2), F(9, 10), F(99, 100), F(1)]:
    v = check_rel_aubin(sys_, cone((1, t)))
    print(f"ray (1, {t}):", v.status)
