from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

from ..errors import ParseError
from ..lattice import (
    LatticePolytope,
    is_reflexive,
    is_smooth_vertex,
    normalized_volume,
    read_polytope_records,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PolytopeRecord:
    id: str
    polytope: LatticePolytope
    reflexive: bool
    smooth: bool
    volN: int

    @property
    def n(self):
        return self.polytope.dim

    @classmethod
    def from_polytope(cls, id, P):
        return cls(
            id=id,
            polytope=P,
            reflexive=is_reflexive(P),
            smooth=all(is_smooth_vertex(P, v) for v in P.vertices),
            volN=normalized_volume(P),
        )


def parse_text(text, stem, errors=None):
    records = []
    for index, _line, item in read_polytope_records(text, source=stem):
        if isinstance(item, ParseError):
            if errors is None:
                log.warning("%s", item)
            else:
                errors.append(item)
            continue
        records.append(PolytopeRecord.from_polytope(f"{stem}:{index}", item))
    return records


def parse_polytopes(path, errors=None):
    """Records of a polytope text file, in file order.

    Malformed records are skipped; their ParseErrors go to ``errors`` when a
    list is given, otherwise to the log.  Ids are ``<file stem>:<index>`` with
    the index counting malformed records too, so ids stay stable.
    """
    path = Path(path)
    return parse_text(path.read_text(encoding="utf-8"), path.stem, errors)
