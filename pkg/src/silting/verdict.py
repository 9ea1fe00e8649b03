"""Three-valued outcomes of the decision procedures, with certificates."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Any


class Outcome(str, Enum):
    HOLDS = "Holds"
    FAILS = "Fails"
    INCONCLUSIVE = "Inconclusive"


@dataclass
class Verdict:
    """Result of a decision procedure.

    Attributes:
        outcome: Holds, Fails or Inconclusive.
        witness: JSON-serialisable certificate. For Fails it names the violated
            condition; for Inconclusive it records the bound that ran out.
        provenance: names of the routes that produced the answer.
        bound: the search bound in force, when one applies.
        probe: for class-level statements checked on a finite probe set, the
            labels of the probe (the claim is then "Holds on probe").
    """

    outcome: Outcome
    witness: dict = field(default_factory=dict)
    provenance: tuple[str, ...] = ()
    bound: Any = None
    probe: list[str] | None = None

    @classmethod
    def holds(cls, provenance: str, **witness) -> "Verdict":
        return cls(Outcome.HOLDS, witness, (provenance,))

    @classmethod
    def fails(cls, provenance: str, **witness) -> "Verdict":
        return cls(Outcome.FAILS, witness, (provenance,))

    @classmethod
    def inconclusive(cls, provenance: str, bound: Any, **witness) -> "Verdict":
        return cls(Outcome.INCONCLUSIVE, witness, (provenance,), bound=bound)

    @property
    def holds_(self) -> bool:
        return self.outcome is Outcome.HOLDS

    @property
    def fails_(self) -> bool:
        return self.outcome is Outcome.FAILS

    @property
    def inconclusive_(self) -> bool:
        return self.outcome is Outcome.INCONCLUSIVE

    def __bool__(self):
        raise TypeError("a Verdict is three-valued; test .holds_ / .fails_ explicitly")

    def to_json(self) -> dict:
        out = {"outcome": self.outcome.value, "witness": _jsonable(self.witness), "provenance": list(self.provenance)}
        if self.bound is not None:
            out["bound"] = _jsonable(self.bound)
        if self.probe is not None:
            out["probe"] = list(self.probe)
        return out

    def digest(self) -> str:
        return certificate_digest(self.to_json())


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Enum):
        return x.value
    if isinstance(x, Verdict):
        return x.to_json()
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    if hasattr(x, "item"):
        return x.item()
    return str(x)


def certificate_digest(obj) -> str:
    blob = json.dumps(_jsonable(obj), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def all_of(provenance: str, parts: dict[str, Verdict]) -> Verdict:
    """Conjunction: Fails if any part fails, Inconclusive if any is undecided, else Holds."""
    for name, v in parts.items():
        if v.fails_:
            return Verdict(Outcome.FAILS, {"failed": name, "detail": v.to_json()}, (provenance,))
    for name, v in parts.items():
        if v.inconclusive_:
            return Verdict(Outcome.INCONCLUSIVE, {"undecided": name, "detail": v.to_json()}, (provenance,), v.bound)
    return Verdict(Outcome.HOLDS, {k: v.to_json() for k, v in parts.items()}, (provenance,))
