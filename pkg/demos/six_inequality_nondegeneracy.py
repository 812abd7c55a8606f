"""
Non-degeneracy with six inequalities
====================================

Six constraints in a four-dimensional (q, u) space.  At the zero
direction the active gradients are linearly dependent, so the check
fails; along every nonzero direction it holds.  The activity
hyperplanes split R^4 into cells and one check per cell covers the
whole space.
"""

from varstab import check_nondegeneracy, example_path, load_system, stratify_directions

sys_ = load_system(example_path("ex_nondegen6.json"))

at_zero = check_nondegeneracy(sys_, (0, 0, 0, 0))
print(at_zero)
print("dependence among the active rows:", [str(x) for x in at_zero.certificate["mu"]])

strat = stratify_directions(sys_, "qu")
cells = strat.nonzero_cells()
print(len(strat.hyperplanes), "hyperplanes,", len(cells), "nonzero cells")

statuses = {}
for c in cells:
    status = check_nondegeneracy(sys_, c.rep).status
    statuses[status] = statuses.get(status, 0) + 1
print(statuses)
