"""Exact stability analysis of parametric variational systems with polyhedral constraints."""

from importlib import resources

from .exactmath import LinProgram, RatMatrix, Rational, kernel_basis, lp_solve, rank
from .polyhedra import HCone, PolySet, VCone, canonicalize, faces, generators, polar
from .status import DISPROVED, FAILS, HOLDS, INCONCLUSIVE, Verdict
from .sysmodel import PolyFunc2, VarSystem, load_system, save_system
from .verdicts import (
    check_assumption1, check_aubin, check_F_dirmetreg, check_isolated_calmness,
    check_metreg_M_dir, check_nondegen_dir, check_nondegeneracy, check_rel_aubin,
    check_robinson_cq, check_socic, check_socic_dir, stratify_directions,
)
from .oracle import sample_aubin, sample_calmness, solve_solution_map

__version__ = "0.1.0"


def example_path(name: str) -> str:
    """Path of a bundled problem file, e.g. ``example_path("ex_socic.json")``."""
    return str(resources.files(__name__) / "data" / name)
