"""
Isolated calmness of a small variational system
================================================

Load the bundled two-dimensional example, check the constraint
qualification, then the second-order condition that carries isolated
calmness.  Everything is exact rational arithmetic.
"""

from varstab import (check_isolated_calmness, check_metreg_M_dir, check_robinson_cq,
                     check_socic, example_path, load_system)

def show(v):
    return "(" + ", ".join(str(x) for x in v) + ")"


sys_ = load_system(example_path("ex_socic.json"))
print(sys_.l, "parameters,", sys_.n, "decision variables")

# Robinson's condition at the reference point
print(check_robinson_cq(sys_))

# the second-order condition is checked cell by cell over the critical cone
soc = check_socic(sys_)
print(soc)
print("cells examined:", soc.certificate["cells"])
print("witness matrix, v = M u:", soc.certificate["v_family"])

for stratum in soc.strata:
    print("  u =", show(stratum["rep"]), " v =", show(stratum["v"]))

# with the prerequisites certified the property itself follows
iso = check_isolated_calmness(sys_)
print(iso)
for pre in iso.prerequisites:
    print("  needs", pre)

# directional metric regularity along the zero direction
print(check_metreg_M_dir(sys_, (0, 0, 0, 0)))
