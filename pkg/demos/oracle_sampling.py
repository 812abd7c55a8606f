"""
Checking the verdicts against the solution map
==============================================

For affine constraints the solution set at a parameter is a finite
union of polyhedra, one per active set.  Enumerating them gives an
independent view of what the verdicts claim: distances stay bounded
where isolated calmness holds, and blow up across the rays where the
relative Aubin check fails.
"""

from fractions import Fraction as F

from varstab import example_path, load_system, sample_aubin, sample_calmness, solve_solution_map

def show(v):
    return "(" + ", ".join(str(x) for x in v) + ")"


sys_ = load_system(example_path("ex_socic.json"))

for p in [(1, 0), (1, 1), (-1, -2), (-1, -3), (0, 1)]:
    pts = sorted(solve_solution_map(sys_, p).points())
    print("S%s =" % show(p), "{" + ", ".join(show(x) for x in pts) + "}")

# calmness: squared distance to S(p0) over squared parameter step
vals = [F(k, 2) for k in range(-4, 5)]
grid = [(a, b) for a in vals for b in vals if solve_solution_map(sys_, (a, b)).points()]
cal = sample_calmness(sys_, grid)
print(len(grid), "feasible grid points, max ratio^2 =", cal.max_ratio_sq)

# two nearby parameters on either side of the ray (1, 1)
print("across (1,1):", sample_aubin(sys_, [(1, F(9, 10)), (1, F(11, 10))]).unbounded)
# two nearby parameters inside one stratum
print("inside:", sample_aubin(sys_, [(1, F(-1, 2)), (1, F(-6, 10))]).unbounded)
