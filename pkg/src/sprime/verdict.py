from dataclasses import dataclass, field
from typing import Any, Optional


@dataclass
class Verdict:
    """Outcome of a predicate: a boolean plus a witness or a counterexample.

    Witness and counterexample payloads are plain dicts of named elements
    (integer indices or lists of indices) so they serialize directly.
    """

    holds: bool
    witness: Optional[dict] = None
    counterexample: Optional[dict] = None
    notes: dict = field(default_factory=dict)

    def __bool__(self):
        return self.holds

    def to_dict(self) -> dict[str, Any]:
        out = {"holds": self.holds}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        if self.notes:
            out["notes"] = self.notes
        return out


def passed(**witness):
    return Verdict(True, witness=witness or None)


def failed(**counterexample):
    return Verdict(False, counterexample=counterexample or None)
