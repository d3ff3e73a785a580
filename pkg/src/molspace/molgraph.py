"""Molecular graphs over H/C/N/O/F with implicit- or explicit-hydrogen input.

Two wire formats are supported:

* V2000 connection tables (single molecule, fixed columns, hydrogens
  usually present as atoms).
* One-object-per-line structured text records with fields ``id``,
  ``elements`` (heavy atoms only), ``bonds`` (1-indexed ``[i, j, order]``
  triples) and ``h`` (per-atom hydrogen counts, or ``"auto"`` to infer
  counts from default valences).

Internally bonds are stored 0-indexed with ``i < j``. Graphs are immutable
after construction; parsers enforce the structural invariants and reject
multi-fragment input.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Iterable, Mapping

from .errors import (
    InvalidHydrogenCount,
    InvalidHydrogenTopology,
    ParseError,
    UnsupportedBondOrder,
    UnsupportedElement,
)

ELEMENTS = ("H", "C", "N", "O", "F")
HEAVY_ELEMENTS = ("C", "N", "O", "F")

# Neutral-molecule default valences used for implicit-hydrogen inference.
DEFAULT_VALENCE = {"C": 4, "N": 3, "O": 2, "F": 1}

BOND_ORDERS = (1, 2, 3)


class HydrogenClampWarning(UserWarning):
    """Inferred hydrogen count was negative and has been clamped to zero."""


@dataclass(frozen=True)
class MolGraph:
    """A parsed molecule, prior to hydrogen suppression.

    ``elements`` may include ``"H"`` entries (explicit-hydrogen input).
    When ``explicit_h`` is False the graph came from the heavy-atom record
    format and ``h_counts`` holds one hydrogen count per atom.
    """

    id: str
    elements: tuple[str, ...]
    bonds: tuple[tuple[int, int, int], ...]
    explicit_h: bool
    h_counts: tuple[int, ...] | None = None


@dataclass(frozen=True)
class HeavyGraph:
    """Hydrogen-suppressed molecular graph.

    Vertices are heavy atoms; each carries the count of hydrogens removed
    from (or assigned to) it. Immutable and safe to share between threads.
    """

    elements: tuple[str, ...]
    bonds: tuple[tuple[int, int, int], ...]
    h_count: tuple[int, ...]

    @property
    def na(self) -> int:
        """Number of heavy atoms."""
        return len(self.elements)

    @cached_property
    def neighbors(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Per-atom tuple of (neighbor index, bond order) pairs."""
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.na)]
        for i, j, order in self.bonds:
            adj[i].append((j, order))
            adj[j].append((i, order))
        return tuple(tuple(a) for a in adj)

    def order_sum(self, i: int) -> int:
        return sum(order for _, order in self.neighbors[i])

    def composition(self) -> dict[str, int]:
        """Element counts including hydrogens."""
        counts: dict[str, int] = {}
        for el in self.elements:
            counts[el] = counts.get(el, 0) + 1
        nh = sum(self.h_count)
        if nh:
            counts["H"] = counts.get("H", 0) + nh
        return counts


def _normalize_bonds(
    bonds: Iterable[tuple[int, int, int]], natoms: int
) -> tuple[tuple[int, int, int], ...]:
    """Reindex to i < j, check ranges and duplicates, sort for determinism."""
    seen: set[tuple[int, int]] = set()
    out: list[tuple[int, int, int]] = []
    for i, j, order in bonds:
        if not (0 <= i < natoms and 0 <= j < natoms):
            raise ParseError(f"bond ({i + 1},{j + 1}) references a missing atom")
        if i == j:
            raise ParseError(f"bond ({i + 1},{j + 1}) is a self-loop")
        if i > j:
            i, j = j, i
        if (i, j) in seen:
            raise ParseError(f"duplicate bond ({i + 1},{j + 1})")
        seen.add((i, j))
        if order not in BOND_ORDERS:
            if order == 4:
                raise UnsupportedBondOrder(
                    "aromatic bond order 4 is not supported; supply a Kekule structure"
                )
            raise UnsupportedBondOrder(f"unsupported bond order {order}")
        out.append((i, j, order))
    return tuple(sorted(out))


def _connected(natoms: int, bonds: Iterable[tuple[int, int, int]]) -> int:
    """Number of connected components."""
    if natoms == 0:
        return 0
    adj: list[list[int]] = [[] for _ in range(natoms)]
    for i, j, _ in bonds:
        adj[i].append(j)
        adj[j].append(i)
    seen = [False] * natoms
    parts = 0
    for start in range(natoms):
        if seen[start]:
            continue
        parts += 1
        stack = [start]
        seen[start] = True
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
    return parts


def parse_molfile(text: str, id: str = "") -> MolGraph:
    """Parse a single V2000 connection table.

    Element symbols are read from their fixed columns; coordinates, charge
    and stereo fields are ignored. Raises UnsupportedElement for atoms
    outside H/C/N/O/F, UnsupportedBondOrder for bond codes other than
    1 to 3 (the aromatic code 4 included), and ParseError for structural
    problems (truncation, bad counts, duplicate bonds, multiple fragments).
    """
    lines = text.splitlines()
    if len(lines) < 4:
        raise ParseError("molfile has fewer than 4 lines")
    counts = lines[3]
    try:
        natoms = int(counts[0:3])
        nbonds = int(counts[3:6])
    except (ValueError, IndexError) as exc:
        raise ParseError(f"malformed counts line: {counts!r}") from exc
    if natoms <= 0:
        raise ParseError("molfile declares no atoms")
    if len(lines) < 4 + natoms + nbonds:
        raise ParseError("molfile truncated before end of atom/bond blocks")

    elements: list[str] = []
    for k in range(natoms):
        line = lines[4 + k]
        symbol = line[31:34].strip()
        if not symbol:
            raise ParseError(f"atom line {k + 1} too short for an element symbol")
        if symbol not in ELEMENTS:
            raise UnsupportedElement(f"unsupported element {symbol!r} at atom {k + 1}")
        elements.append(symbol)

    raw_bonds: list[tuple[int, int, int]] = []
    for k in range(nbonds):
        line = lines[4 + natoms + k]
        try:
            i = int(line[0:3])
            j = int(line[3:6])
            order = int(line[6:9])
        except (ValueError, IndexError) as exc:
            raise ParseError(f"malformed bond line {k + 1}: {line!r}") from exc
        raw_bonds.append((i - 1, j - 1, order))

    bonds = _normalize_bonds(raw_bonds, natoms)
    if _connected(natoms, bonds) != 1:
        raise ParseError("molfile describes more than one fragment")
    name = id or lines[0].strip()
    return MolGraph(
        id=name,
        elements=tuple(elements),
        bonds=bonds,
        explicit_h=any(el == "H" for el in elements),
        h_counts=None,
    )


def parse_record_obj(obj: Mapping[str, Any]) -> MolGraph:
    """Build a MolGraph from an already-decoded record object."""
    for key in ("id", "elements", "bonds", "h"):
        if key not in obj:
            raise ParseError(f"record missing field {key!r}")
    rec_id = str(obj["id"])
    elements_raw = obj["elements"]
    if not isinstance(elements_raw, list) or not elements_raw:
        raise ParseError("field 'elements' must be a non-empty list")
    elements: list[str] = []
    for k, el in enumerate(elements_raw):
        if el == "H":
            raise ParseError(
                f"atom {k + 1} is hydrogen; records carry heavy atoms only"
            )
        if el not in HEAVY_ELEMENTS:
            raise UnsupportedElement(f"unsupported element {el!r} at atom {k + 1}")
        elements.append(el)
    natoms = len(elements)

    bonds_raw = obj["bonds"]
    if not isinstance(bonds_raw, list):
        raise ParseError("field 'bonds' must be a list")
    raw_bonds: list[tuple[int, int, int]] = []
    for entry in bonds_raw:
        if (
            not isinstance(entry, list)
            or len(entry) != 3
            or not all(isinstance(x, int) and not isinstance(x, bool) for x in entry)
        ):
            raise ParseError(f"malformed bond entry {entry!r}")
        i, j, order = entry
        raw_bonds.append((i - 1, j - 1, order))
    bonds = _normalize_bonds(raw_bonds, natoms)
    if _connected(natoms, bonds) != 1:
        raise ParseError("record describes more than one fragment")

    order_sums = [0] * natoms
    for i, j, order in bonds:
        order_sums[i] += order
        order_sums[j] += order

    h_field = obj["h"]
    if h_field == "auto":
        h_counts: list[int] = []
        for k, el in enumerate(elements):
            h = DEFAULT_VALENCE[el] - order_sums[k]
            if h < 0:
                warnings.warn(
                    f"record {rec_id!r}: atom {k + 1} ({el}) has bond order sum "
                    f"{order_sums[k]} above the default valence; hydrogen count "
                    "clamped to 0",
                    HydrogenClampWarning,
                    stacklevel=2,
                )
                h = 0
            h_counts.append(h)
    elif isinstance(h_field, list):
        if len(h_field) != natoms:
            raise ParseError(
                f"field 'h' has {len(h_field)} entries for {natoms} atoms"
            )
        for k, h in enumerate(h_field):
            if not isinstance(h, int) or isinstance(h, bool):
                raise ParseError(f"hydrogen count for atom {k + 1} is not an integer")
            if h < 0:
                raise InvalidHydrogenCount(
                    f"negative hydrogen count {h} at atom {k + 1}"
                )
        h_counts = list(h_field)
    else:
        raise ParseError("field 'h' must be a count list or the token \"auto\"")

    return MolGraph(
        id=rec_id,
        elements=tuple(elements),
        bonds=bonds,
        explicit_h=False,
        h_counts=tuple(h_counts),
    )


def parse_record_line(line: str) -> MolGraph:
    """Parse one structured-text record line."""
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ParseError(f"record line is not valid structured text: {exc}") from exc
    if not isinstance(obj, dict):
        raise ParseError("record line must hold a single object")
    return parse_record_obj(obj)


def serialize_record(g: MolGraph) -> str:
    """Serialize a molecule as one heavy-atom record line.

    Field order is fixed (id, elements, bonds, h) so identical molecules
    produce identical bytes. Explicit-hydrogen input is suppressed first.
    """
    hg = heavy_graph(g)
    obj = {
        "id": g.id,
        "elements": list(hg.elements),
        "bonds": [[i + 1, j + 1, order] for i, j, order in hg.bonds],
        "h": list(hg.h_count),
    }
    return json.dumps(obj, separators=(",", ":"))


def heavy_graph(g: MolGraph) -> HeavyGraph:
    """Suppress explicit hydrogens, or adopt stored implicit counts.

    For explicit-hydrogen input every H must be bonded to exactly one
    heavy atom by a single bond; anything else (H-H bonds, isolated or
    multivalent H) raises InvalidHydrogenTopology.
    """
    if g.h_counts is not None:
        return HeavyGraph(elements=g.elements, bonds=g.bonds, h_count=g.h_counts)

    natoms = len(g.elements)
    adj: list[list[tuple[int, int]]] = [[] for _ in range(natoms)]
    for i, j, order in g.bonds:
        adj[i].append((j, order))
        adj[j].append((i, order))

    index_map: dict[int, int] = {}
    elements: list[str] = []
    for k, el in enumerate(g.elements):
        if el != "H":
            index_map[k] = len(elements)
            elements.append(el)

    h_count = [0] * len(elements)
    for k, el in enumerate(g.elements):
        if el != "H":
            continue
        if len(adj[k]) != 1:
            raise InvalidHydrogenTopology(
                f"hydrogen atom {k + 1} has {len(adj[k])} bonds (expected 1)"
            )
        partner, order = adj[k][0]
        if g.elements[partner] == "H":
            raise InvalidHydrogenTopology(
                f"hydrogen atoms {k + 1} and {partner + 1} are bonded to each other"
            )
        if order != 1:
            raise InvalidHydrogenTopology(
                f"hydrogen atom {k + 1} carries a bond of order {order}"
            )
        h_count[index_map[partner]] += 1

    bonds = [
        (index_map[i], index_map[j], order)
        for i, j, order in g.bonds
        if g.elements[i] != "H" and g.elements[j] != "H"
    ]
    return HeavyGraph(
        elements=tuple(elements),
        bonds=tuple(sorted(bonds)),
        h_count=tuple(h_count),
    )


# Per-element load caps used by validate(). Carbon, oxygen and fluorine are
# checked against the sum of bond orders plus hydrogens; nitrogen is checked
# by connectivity (neighbor count plus hydrogens) so that tetracoordinate
# motifs pass without formal-charge bookkeeping.
_ORDER_SUM_CAPS = {"C": 4, "O": 2, "F": 1}
_CONNECTIVITY_CAPS = {"N": 4}


def validate(hg: HeavyGraph) -> list[str]:
    """Return human-readable diagnostics; an empty list means valid.

    Checks per-atom valence loads against element caps and requires the
    graph to be a single fragment.
    """
    diags: list[str] = []
    for k, el in enumerate(hg.elements):
        h = hg.h_count[k]
        if el in _ORDER_SUM_CAPS:
            load = hg.order_sum(k) + h
            cap = _ORDER_SUM_CAPS[el]
            if load > cap:
                diags.append(
                    f"atom {k + 1} ({el}): bond order sum plus hydrogens is "
                    f"{load}, above the cap of {cap}"
                )
        else:
            load = len(hg.neighbors[k]) + h
            cap = _CONNECTIVITY_CAPS[el]
            if load > cap:
                diags.append(
                    f"atom {k + 1} ({el}): neighbor count plus hydrogens is "
                    f"{load}, above the cap of {cap}"
                )
    if hg.na > 0:
        parts = _connected(hg.na, hg.bonds)
        if parts != 1:
            diags.append(f"graph is disconnected ({parts} fragments)")
    return diags
