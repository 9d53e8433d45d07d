"""Result records shared by the enumeration and oracle layers."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional


@dataclass
class CountReport:
    """A tropical count together with the bookkeeping that produced it.

    ``trop_tev`` is the symmetry-normalized degree; ``labelled_sum`` is the
    sum of multiplicities over labelled curves (``trop_tev * prod sym``).
    """

    method: str
    trop_tev: int
    labelled_sum: int
    unlabelled_curves: int = 0
    labelled_curves: int = 0
    type_a: int = 0
    type_b: int = 0
    seed: Optional[int] = None
    details: Dict = field(default_factory=dict)

    def to_json(self) -> Dict:
        return {
            "method": self.method,
            "trop_tev": str(self.trop_tev),
            "labelled_sum": str(self.labelled_sum),
            "unlabelled_curves": str(self.unlabelled_curves),
            "labelled_curves": str(self.labelled_curves),
            "type_a": str(self.type_a),
            "type_b": str(self.type_b),
            "seed": self.seed,
            "details": self.details,
        }
