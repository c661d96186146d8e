"""Verdict objects shared by the validators and the CLI."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List

from .scalar import Scalar

__all__ = ["Failure", "StructureReport", "jsonable"]


@dataclass(frozen=True)
class Failure:
    condition: str
    witness: Any = None

    def __str__(self) -> str:
        if self.witness is None:
            return self.condition
        return f"{self.condition} (witness: {_text(self.witness)})"


@dataclass
class StructureReport:
    """accept/reject verdict with named failing conditions and computed witnesses."""

    kind: str
    failures: List[Failure] = field(default_factory=list)
    data: Dict[str, Any] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    @property
    def verdict(self) -> str:
        return "reject" if self.failures else "accept"

    @property
    def accepted(self) -> bool:
        return not self.failures

    def __bool__(self) -> bool:
        return self.accepted

    def fail(self, condition: str, witness: Any = None) -> "StructureReport":
        self.failures.append(Failure(condition, witness))
        return self

    def failing(self) -> List[str]:
        return [f.condition for f in self.failures]

    def absorb(self, other: "StructureReport", prefix: str) -> None:
        for f in other.failures:
            self.failures.append(Failure(f"{prefix}: {f.condition}", f.witness))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "verdict": self.verdict,
            "failures": [
                {"condition": f.condition, "witness": jsonable(f.witness)} for f in self.failures
            ],
            "data": {k: jsonable(v) for k, v in self.data.items()},
            "notes": list(self.notes),
        }

    def __str__(self) -> str:
        lines = [f"{self.kind}: {self.verdict}"]
        for k, v in self.data.items():
            lines.append(f"  {k} = {_text(v)}")
        for f in self.failures:
            lines.append(f"  FAILED {f}")
        for n in self.notes:
            lines.append(f"  note: {n}")
        return "\n".join(lines)


def _text(x: Any) -> str:
    if isinstance(x, dict):
        return "{" + ", ".join(f"{k}: {_text(v)}" for k, v in x.items()) + "}"
    if isinstance(x, (list, tuple)):
        if x and isinstance(x[0], (list, tuple)):
            return "[" + "; ".join(", ".join(_text(y) for y in row) for row in x) + "]"
        return "[" + ", ".join(_text(y) for y in x) + "]"
    return str(x)


def jsonable(x: Any) -> Any:
    """Exact JSON-friendly rendering: numbers become "p/q" or "p/q+r/s*i" strings."""
    from .clifford import GenVector, Subspace
    from .exterior import Multivector

    if x is None or isinstance(x, (bool, str)):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, (Scalar, Fraction)):
        return str(x)
    if isinstance(x, Multivector):
        return str(x)
    if isinstance(x, GenVector):
        return {"tangent": [str(c) for c in x.tangent], "cotangent": [str(c) for c in x.cotangent]}
    if isinstance(x, Subspace):
        if x.ambient == 2 * x.n:
            return {"rank": x.rank, "basis": [jsonable(v) for v in x.vectors()]}
        return {"rank": x.rank}
    if isinstance(x, StructureReport):
        return x.to_dict()
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if hasattr(x, "to_json"):
        return x.to_json()
    return str(x)
