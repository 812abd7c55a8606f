"""Verdict records shared by the checkers."""

from dataclasses import dataclass, field
from fractions import Fraction

HOLDS = "HOLDS"
FAILS = "FAILS"
DISPROVED = "DISPROVED"
INCONCLUSIVE = "INCONCLUSIVE"

EXIT_CODES = {HOLDS: 0, FAILS: 1, DISPROVED: 1, INCONCLUSIVE: 2}


@dataclass
class Verdict:
    condition: str
    status: str
    certificate: dict = field(default_factory=dict)
    strata: list = field(default_factory=list)
    prerequisites: list = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return self.status == HOLDS

    @property
    def negative(self) -> bool:
        return self.status in (FAILS, DISPROVED)

    def to_json(self) -> dict:
        return {"condition": self.condition, "status": self.status,
                "certificate": jsonable(self.certificate),
                "strata": jsonable(self.strata),
                "prerequisites": jsonable(self.prerequisites)}

    def __repr__(self):
        return f"Verdict({self.condition}: {self.status})"


def jsonable(obj):
    """Convert certificates to JSON-ready values; rationals become strings."""
    from .polyhedra import HCone, PolySet, VCone, hcone_to_json, polyset_to_json
    from .exactmath import RatMatrix

    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (str, float)):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, Verdict):
        return obj.to_json()
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, frozenset):
        return sorted(jsonable(x) for x in obj)
    if isinstance(obj, (list, tuple)):
        return [jsonable(x) for x in obj]
    if isinstance(obj, HCone):
        return hcone_to_json(obj)
    if isinstance(obj, PolySet):
        return polyset_to_json(obj)
    if isinstance(obj, VCone):
        return {"dim": obj.dim, "rays": jsonable(obj.rays), "lines": jsonable(obj.lines)}
    if isinstance(obj, RatMatrix):
        return jsonable(obj.rows)
    if hasattr(obj, "to_json"):
        return obj.to_json()
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def prereq(name: str, verdict_or_status) -> dict:
    st = verdict_or_status.status if isinstance(verdict_or_status, Verdict) else verdict_or_status
    return {"name": name, "status": st}
