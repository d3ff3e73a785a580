"""Dataset-level structural coverage analytics.

A dataset table holds parsed heavy-atom records plus their numeric
properties. On top of it this module computes type inventories for both
representation axes (local-valence codes and bridge-free topologies),
overlap regions between tables, smoothed Kullback-Leibler divergence
matrices, property histograms, threshold-based expansion subsets,
unseen-structure complements and composition uniformity reports.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Iterable

from . import gcn, nbg
from .errors import (
    DuplicateRecord,
    EmptyDistribution,
    InvalidArgument,
    MissingProperty,
    MolspaceError,
    ParseError,
)
from .molgraph import HeavyGraph, heavy_graph, parse_record_obj, validate

# Feature axes with a per-record type multiset.
TYPE_FEATURES = ("gcn0", "gcn1", "gcn2", "nbg0", "scaffold", "nbg_plus")

# Feature axes accepted by structure_complement.
COMPLEMENT_FEATURES = ("gcn1", "nbg_plus", "scaffold")

COMPOSITION_ELEMENT_ORDER = ("F", "O", "N", "C", "H")


@dataclass
class DatasetRecord:
    id: str
    graph: HeavyGraph
    properties: dict[str, float]
    mol: str
    cache: dict[Any, Any] = field(default_factory=dict)


@dataclass
class DatasetTable:
    name: str
    records: list[DatasetRecord]

    def __len__(self) -> int:
        return len(self.records)


@dataclass(frozen=True)
class RejectEntry:
    line_no: int
    record_id: str | None
    reason: str


def ingest(lines: Iterable[str], name: str) -> tuple[DatasetTable, list[RejectEntry]]:
    """Build a table from record lines, collecting per-record failures.

    Blank lines and '#' comments are skipped. A record is rejected (never
    fatal) when it fails to parse, fails validation, contains an atom
    environment outside the code table, or reuses an id already in the
    table. Accepted records are guaranteed encodable by every downstream
    operation.
    """
    records: list[DatasetRecord] = []
    rejects: list[RejectEntry] = []
    seen_ids: set[str] = set()
    for line_no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        rec_id: str | None = None
        try:
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(
                    f"record line is not valid structured text: {exc}"
                ) from exc
            if not isinstance(obj, dict):
                raise ParseError("record line must hold a single object")
            mol_graph = parse_record_obj(obj)
            rec_id = mol_graph.id
            g = heavy_graph(mol_graph)
            diags = validate(g)
            if diags:
                raise ParseError("; ".join(diags))
            for i in range(g.na):
                gcn.gcn0_of_atom(g, i)
            if rec_id in seen_ids:
                raise DuplicateRecord(f"id {rec_id!r} already present")
            props_raw = obj.get("props", {})
            if not isinstance(props_raw, dict):
                raise ParseError("field 'props' must be an object")
            properties: dict[str, float] = {}
            for key, value in props_raw.items():
                if not isinstance(value, (int, float)) or isinstance(value, bool):
                    raise ParseError(f"property {key!r} is not numeric")
                properties[str(key)] = float(value)
            mol_key = str(obj["mol"]) if "mol" in obj else rec_id
        except MolspaceError as exc:
            rejects.append(
                RejectEntry(
                    line_no=line_no,
                    record_id=rec_id,
                    reason=f"{type(exc).__name__}: {exc}",
                )
            )
            continue
        seen_ids.add(rec_id)
        records.append(
            DatasetRecord(id=rec_id, graph=g, properties=properties, mol=mol_key)
        )
    return DatasetTable(name=name, records=records), rejects


def record_type_counts(
    record: DatasetRecord, feature: str, mode: str = nbg.DEFAULT_MODE
) -> Counter:
    """Multiset of feature types contributed by one record (cached)."""
    if feature not in TYPE_FEATURES:
        raise InvalidArgument(f"unknown feature {feature!r}")
    key = (feature, mode if feature in ("nbg0", "scaffold") else None)
    cached = record.cache.get(key)
    if cached is not None:
        return cached
    g = record.graph
    counts: Counter = Counter()
    if feature in ("gcn0", "gcn1", "gcn2"):
        codes = record.cache.get("codes")
        if codes is None:
            codes = gcn.atom_codes(g)
            record.cache["codes"] = codes
        level = ("gcn0", "gcn1", "gcn2").index(feature)
        counts.update(codes[level])
    elif feature == "nbg0":
        counts.update(t.signature for t in nbg.nbg0_extract(g, mode))
    elif feature == "scaffold":
        topo = nbg.scaffold(g, mode)
        if topo is not None:
            counts[topo.signature] += 1
    else:  # nbg_plus: the whole molecule as one topology unit
        topo = nbg.topology_of(
            g.elements, list(g.bonds), nbg.MODE_ELEMENT_ORDER
        )
        counts[topo.signature] += 1
    record.cache[key] = counts
    return counts


def _table_type_counts(
    t: DatasetTable, feature: str, mode: str = nbg.DEFAULT_MODE
) -> Counter:
    total: Counter = Counter()
    for record in t.records:
        total.update(record_type_counts(record, feature, mode))
    return total


def type_set(
    t: DatasetTable, feature: str, mode: str = nbg.DEFAULT_MODE
) -> set[str]:
    """Unique feature types observed anywhere in a table."""
    return set(_table_type_counts(t, feature, mode))


def _levels(record: DatasetRecord) -> tuple[int, int]:
    """(radius-2 crowding level, cut-set level) for one record, cached."""
    cached = record.cache.get("levels")
    if cached is None:
        cached = (
            gcn.gcn2_level(record.graph),
            nbg.nbg_plus_class(record.graph).level,
        )
        record.cache["levels"] = cached
    return cached


@dataclass(frozen=True)
class CoverageReport:
    name: str
    molecule_count: int
    conformation_count: int
    gcn0_types: int
    gcn1_types: int
    gcn2_types: int
    nbg0_types: dict[str, int]
    scaffold_types: int
    nbg_plus_levels: dict[int, int]
    na_histogram: dict[int, int]

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "molecule_count": self.molecule_count,
            "conformation_count": self.conformation_count,
            "gcn0_types": self.gcn0_types,
            "gcn1_types": self.gcn1_types,
            "gcn2_types": self.gcn2_types,
            "nbg0_types": {k: self.nbg0_types[k] for k in sorted(self.nbg0_types)},
            "scaffold_types": self.scaffold_types,
            "nbg_plus_levels": {
                str(k): self.nbg_plus_levels[k]
                for k in sorted(self.nbg_plus_levels)
            },
            "na_histogram": {
                str(k): self.na_histogram[k] for k in sorted(self.na_histogram)
            },
        }


def coverage_report(t: DatasetTable) -> CoverageReport:
    """Inventory counts across both representation axes.

    Topology core counts are reported for all three label modes side by
    side; the scaffold axis uses the default mode (carbon skeleton with
    bond orders retained).
    """
    na_hist: Counter = Counter()
    plus_levels: Counter = Counter()
    for record in t.records:
        na_hist[record.graph.na] += 1
        plus_levels[_levels(record)[1]] += 1
    return CoverageReport(
        name=t.name,
        molecule_count=len({r.mol for r in t.records}),
        conformation_count=len(t.records),
        gcn0_types=len(type_set(t, "gcn0")),
        gcn1_types=len(type_set(t, "gcn1")),
        gcn2_types=len(type_set(t, "gcn2")),
        nbg0_types={mode: len(type_set(t, "nbg0", mode)) for mode in nbg.MODES},
        scaffold_types=len(type_set(t, "scaffold")),
        nbg_plus_levels=dict(plus_levels),
        na_histogram=dict(na_hist),
    )


def overlap_report(
    tables: list[DatasetTable], feature: str, mode: str = nbg.DEFAULT_MODE
) -> dict[str, int]:
    """Cardinality of every occupancy region of the type sets.

    For k tables the result has one entry per non-empty subset of tables,
    keyed by the '&'-joined table names in input order: the number of
    types present in exactly that subset. Region counts sum to the size of
    the union.
    """
    if not 2 <= len(tables) <= 3:
        raise InvalidArgument("overlap_report takes two or three tables")
    names = [t.name for t in tables]
    if len(set(names)) != len(names):
        raise InvalidArgument("table names must be distinct")
    sets = [type_set(t, feature, mode) for t in tables]
    universe: set[str] = set()
    for s in sets:
        universe |= s
    regions: dict[str, int] = {}
    k = len(tables)
    for mask in range(1, 2**k):
        key = "&".join(names[i] for i in range(k) if mask & (1 << i))
        regions[key] = 0
    for item in universe:
        mask = 0
        for i, s in enumerate(sets):
            if item in s:
                mask |= 1 << i
        key = "&".join(names[i] for i in range(k) if mask & (1 << i))
        regions[key] += 1
    return regions


@dataclass(frozen=True)
class KlMatrix:
    """Pairwise divergences; entry [row q][col p] is D_KL(P || Q) in nats."""

    names: tuple[str, ...]
    feature: str
    epsilon: float
    matrix: tuple[tuple[float, ...], ...]


def kl_matrix(
    tables: list[DatasetTable],
    feature: str,
    epsilon: float = 1e-9,
    mode: str = nbg.DEFAULT_MODE,
) -> KlMatrix:
    """Smoothed Kullback-Leibler divergence between type distributions.

    Each table's type occurrence counts are smoothed additively by epsilon
    over the union support and renormalized; rows index the reference
    distribution Q. A table with no type occurrences raises
    EmptyDistribution.
    """
    if epsilon <= 0:
        raise InvalidArgument(f"epsilon must be positive, got {epsilon}")
    if len(tables) < 2:
        raise InvalidArgument("kl_matrix takes at least two tables")
    counts = []
    for t in tables:
        c = _table_type_counts(t, feature, mode)
        if sum(c.values()) == 0:
            raise EmptyDistribution(
                f"table {t.name!r} has no {feature} occurrences"
            )
        counts.append(c)
    support = sorted(set().union(*counts))
    s = len(support)
    dists: list[list[float]] = []
    for c in counts:
        total = sum(c.values()) + epsilon * s
        dists.append([(c.get(x, 0) + epsilon) / total for x in support])

    n = len(tables)
    matrix: list[tuple[float, ...]] = []
    for r in range(n):
        q = dists[r]
        row = []
        for cidx in range(n):
            p = dists[cidx]
            row.append(sum(pi * math.log(pi / qi) for pi, qi in zip(p, q) if pi > 0))
        matrix.append(tuple(row))
    return KlMatrix(
        names=tuple(t.name for t in tables),
        feature=feature,
        epsilon=epsilon,
        matrix=tuple(matrix),
    )


@dataclass(frozen=True)
class Histogram:
    """Fixed-edge histogram; entries are (low, high, count) with low
    inclusive and high exclusive except for the final width-mode bin."""

    property: str
    kind: str
    entries: tuple[tuple[float, float, int], ...]
    used: int
    skipped: int


def _property_values(t: DatasetTable, prop: str) -> tuple[list[float], int]:
    values: list[float] = []
    skipped = 0
    for record in t.records:
        if prop.lower() == "na":
            values.append(float(record.graph.na))
        elif prop in record.properties:
            values.append(record.properties[prop])
        else:
            skipped += 1
    return values, skipped


def histogram(t: DatasetTable, prop: str, bins: int | str = "unit") -> Histogram:
    """Histogram of Na or any numeric record property.

    bins is either the token "unit" (one bin per integer floor) or a
    positive bin count for equal-width bins spanning the observed range.
    Records lacking the property are skipped and counted as such; bin
    counts always sum to the number of records used.
    """
    values, skipped = _property_values(t, prop)
    if bins == "unit":
        c: Counter = Counter(math.floor(v) for v in values)
        entries = tuple(
            (float(k), float(k + 1), c[k]) for k in sorted(c)
        )
        return Histogram(
            property=prop, kind="unit", entries=entries,
            used=len(values), skipped=skipped,
        )
    if not isinstance(bins, int) or bins < 1:
        raise InvalidArgument("bins must be 'unit' or a positive integer")
    if not values:
        return Histogram(
            property=prop, kind="width", entries=(), used=0, skipped=skipped
        )
    lo, hi = min(values), max(values)
    if hi == lo:
        hi = lo + 1.0
    width = (hi - lo) / bins
    counts = [0] * bins
    for v in values:
        idx = min(int((v - lo) / width), bins - 1)
        counts[idx] += 1
    entries = tuple(
        (lo + i * width, lo + (i + 1) * width, counts[i]) for i in range(bins)
    )
    return Histogram(
        property=prop, kind="width", entries=entries,
        used=len(values), skipped=skipped,
    )


def expansion_subsets(
    t: DatasetTable, gcn2_max: int, nbg_max: int
) -> set[str]:
    """Ids of records within both level thresholds.

    A record qualifies when its radius-2 crowding level is at most
    gcn2_max and its cut-set level is at most nbg_max; the subsets are
    monotone in both thresholds.
    """
    if gcn2_max < 0 or nbg_max < 0:
        raise InvalidArgument("level thresholds must be non-negative")
    out: set[str] = set()
    for record in t.records:
        glevel, nlevel = _levels(record)
        if glevel <= gcn2_max and nlevel <= nbg_max:
            out.add(record.id)
    return out


def structure_complement(
    train: DatasetTable,
    eval_table: DatasetTable,
    feature: str,
    na_cap: int | None = None,
) -> set[str]:
    """Ids of eval records carrying a feature type never seen in training.

    feature is one of gcn1, nbg_plus (whole-molecule topology with
    elements and bond orders) or scaffold. The optional na_cap drops eval
    records with more heavy atoms than the cap before the comparison.
    """
    if feature not in COMPLEMENT_FEATURES:
        raise InvalidArgument(
            f"feature must be one of {COMPLEMENT_FEATURES}, got {feature!r}"
        )
    known = type_set(train, feature)
    out: set[str] = set()
    for record in eval_table.records:
        if na_cap is not None and record.graph.na > na_cap:
            continue
        types = record_type_counts(record, feature)
        if any(x not in known for x in types):
            out.add(record.id)
    return out


def composition_key(g: HeavyGraph) -> str:
    """Element-composition key in F, O, N, C, H order ('CH4', 'C2H6')."""
    comp = g.composition()
    parts = []
    for el in COMPOSITION_ELEMENT_ORDER:
        count = comp.get(el, 0)
        if count == 0:
            continue
        parts.append(el if count == 1 else f"{el}{count}")
    return "".join(parts)


@dataclass(frozen=True)
class CompositionReport:
    """Distinct structure counts per composition; flagged = below 2."""

    structures: dict[str, int]
    flagged: tuple[str, ...]


def composition_uniformity(t: DatasetTable) -> CompositionReport:
    """Count distinct molecular structures per element composition.

    Structures are distinguished by exact canonical form over
    (element, hydrogen count) vertex labels and bond orders, so conformer
    duplicates collapse. Compositions represented by fewer than two
    distinct structures are flagged.
    """
    per_key: dict[str, set[str]] = {}
    for record in t.records:
        g = record.graph
        labels = tuple(f"{el}{h}" for el, h in zip(g.elements, g.h_count))
        sig = nbg.canonical_signature(labels, list(g.bonds))
        per_key.setdefault(composition_key(g), set()).add(sig)
    structures = {k: len(per_key[k]) for k in sorted(per_key)}
    flagged = tuple(k for k in sorted(per_key) if len(per_key[k]) < 2)
    return CompositionReport(structures=structures, flagged=flagged)


def property_vector(t: DatasetTable, prop: str) -> dict[str, float]:
    """Map record id to a required numeric property; missing raises."""
    out: dict[str, float] = {}
    for record in t.records:
        if prop not in record.properties:
            raise MissingProperty(
                f"record {record.id!r} lacks property {prop!r}"
            )
        out[record.id] = record.properties[prop]
    return out
