"""Linear cross-protocol energy alignment.

Predicts a target-protocol energy from a source-protocol energy plus
optional structural count features:

    E1 ~ c0 * E0 + sum_i c_i * n_i + b0

Three feature modes: ``plain`` (no counts), ``composition`` (per-element
atom counts, hydrogens included) and ``gcn1`` (per-atom level-1 code
counts). The fit minimizes the sum of squared residuals plus
``ridge * ||(c0, c_i)||^2`` with the intercept left unpenalized, solved
through the normal equations. With ridge zero a singular system raises
RankDeficient instead of silently pseudo-inverting.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt
from typing import Iterable, Mapping, Sequence

import numpy as np

from .coverage import DatasetTable, record_type_counts
from .errors import (
    InvalidArgument,
    MissingProperty,
    ParseError,
    RankDeficient,
    UnseenFeature,
)

MODES = ("plain", "composition", "gcn1")

DEFAULT_RIDGE = 1e-8
DEFAULT_OUTLIER_THRESHOLD = 30.0


@dataclass(frozen=True)
class FeatureVector:
    """Source energy plus sparse integer count features."""

    e0: float
    counts: Mapping[str, int]


@dataclass(frozen=True)
class AlignmentModel:
    mode: str
    c0: float
    coefficients: dict[str, float]
    b0: float
    ridge: float
    n_records: int
    mae: float
    rmsd: float


@dataclass(frozen=True)
class ResidualStats:
    n: int
    mae: float
    rmsd: float
    outliers: int
    threshold: float


def build_features(
    table: DatasetTable,
    e0_prop: str,
    mode: str,
    target_prop: str | None = None,
) -> list[tuple[FeatureVector, float | None]]:
    """Feature/target pairs for every record of a table.

    Raises MissingProperty when a record lacks the source property (or the
    target property, when one is requested).
    """
    if mode not in MODES:
        raise InvalidArgument(f"mode must be one of {MODES}, got {mode!r}")
    out: list[tuple[FeatureVector, float | None]] = []
    for record in table.records:
        if e0_prop not in record.properties:
            raise MissingProperty(f"record {record.id!r} lacks {e0_prop!r}")
        e0 = record.properties[e0_prop]
        if mode == "plain":
            counts: dict[str, int] = {}
        elif mode == "composition":
            counts = record.graph.composition()
        else:
            counts = dict(record_type_counts(record, "gcn1"))
        target: float | None = None
        if target_prop is not None:
            if target_prop not in record.properties:
                raise MissingProperty(
                    f"record {record.id!r} lacks {target_prop!r}"
                )
            target = record.properties[target_prop]
        out.append((FeatureVector(e0=e0, counts=counts), target))
    return out


def _infer_mode(pairs: Sequence[tuple[FeatureVector, float]]) -> str:
    keys = set()
    for fv, _ in pairs:
        keys.update(fv.counts)
    if not keys:
        return "plain"
    if keys <= {"H", "C", "N", "O", "F"}:
        return "composition"
    return "gcn1"


def _canonical_pairs(
    pairs: Iterable[tuple[FeatureVector, float | None]]
) -> list[tuple[FeatureVector, float]]:
    checked: list[tuple[FeatureVector, float]] = []
    for fv, target in pairs:
        if target is None:
            raise InvalidArgument("fit requires a target for every pair")
        checked.append((fv, target))
    # Sorting by content makes the fit independent of record order even
    # at the floating-point level.
    checked.sort(
        key=lambda p: (p[0].e0, tuple(sorted(p[0].counts.items())), p[1])
    )
    return checked


def fit(
    pairs: Iterable[tuple[FeatureVector, float | None]],
    ridge: float | None = None,
    mode: str | None = None,
) -> AlignmentModel:
    """Least-squares fit of the alignment form over feature/target pairs.

    ridge defaults to 1e-8; pass 0.0 for an exact unregularized fit, which
    raises RankDeficient when the normal matrix is singular. The result is
    deterministic and independent of the order of the pairs.
    """
    if ridge is None:
        ridge = DEFAULT_RIDGE
    if ridge < 0:
        raise InvalidArgument(f"ridge must be non-negative, got {ridge}")
    data = _canonical_pairs(pairs)
    if not data:
        raise InvalidArgument("fit requires at least one pair")
    if mode is None:
        mode = _infer_mode(data)
    elif mode not in MODES:
        raise InvalidArgument(f"mode must be one of {MODES}, got {mode!r}")

    keys = sorted({k for fv, _ in data for k in fv.counts})
    dim = 1 + len(keys) + 1
    x = np.zeros((len(data), dim))
    y = np.zeros(len(data))
    key_pos = {k: 1 + idx for idx, k in enumerate(keys)}
    for row, (fv, target) in enumerate(data):
        x[row, 0] = fv.e0
        for k, count in fv.counts.items():
            x[row, key_pos[k]] = count
        x[row, dim - 1] = 1.0
        y[row] = target

    gram = x.T @ x
    penalty = np.zeros((dim, dim))
    for idx in range(dim - 1):
        penalty[idx, idx] = ridge
    system = gram + penalty
    if ridge == 0.0 and np.linalg.matrix_rank(system) < dim:
        raise RankDeficient(
            "normal matrix is singular; supply a positive ridge"
        )
    try:
        beta = np.linalg.solve(system, x.T @ y)
    except np.linalg.LinAlgError as exc:
        raise RankDeficient(str(exc)) from exc

    coefficients = {k: float(beta[key_pos[k]]) for k in keys}
    model = AlignmentModel(
        mode=mode,
        c0=float(beta[0]),
        coefficients=coefficients,
        b0=float(beta[dim - 1]),
        ridge=float(ridge),
        n_records=len(data),
        mae=0.0,
        rmsd=0.0,
    )
    stats = residual_stats(model, [(fv, t) for fv, t in data])
    return AlignmentModel(
        mode=mode,
        c0=model.c0,
        coefficients=coefficients,
        b0=model.b0,
        ridge=float(ridge),
        n_records=len(data),
        mae=stats.mae,
        rmsd=stats.rmsd,
    )


def apply(model: AlignmentModel, fv: FeatureVector) -> float:
    """Predict the target-protocol value for one feature vector.

    A nonzero count under a key the model never saw raises UnseenFeature.
    """
    value = model.c0 * fv.e0 + model.b0
    for key, count in fv.counts.items():
        if count == 0:
            continue
        if key not in model.coefficients:
            raise UnseenFeature(f"feature {key!r} not in the fitted model")
        value += model.coefficients[key] * count
    return value


def residual_stats(
    model: AlignmentModel,
    pairs: Iterable[tuple[FeatureVector, float | None]],
    threshold: float = DEFAULT_OUTLIER_THRESHOLD,
) -> ResidualStats:
    """MAE, RMSD and outlier count of model predictions against targets."""
    abs_sum = 0.0
    sq_sum = 0.0
    outliers = 0
    n = 0
    for fv, target in pairs:
        if target is None:
            raise InvalidArgument("residual_stats requires targets")
        err = apply(model, fv) - target
        abs_sum += abs(err)
        sq_sum += err * err
        if abs(err) > threshold:
            outliers += 1
        n += 1
    if n == 0:
        raise InvalidArgument("residual_stats requires at least one pair")
    return ResidualStats(
        n=n,
        mae=abs_sum / n,
        rmsd=sqrt(sq_sum / n),
        outliers=outliers,
        threshold=threshold,
    )


def save_model(model: AlignmentModel) -> str:
    """Serialize a model as tab-separated key/value lines.

    Floats are written with repr so that loading reproduces them exactly.
    """
    lines = [
        "# alignment model",
        f"mode\t{model.mode}",
        f"ridge\t{model.ridge!r}",
        f"n_records\t{model.n_records}",
        f"c0\t{model.c0!r}",
        f"b0\t{model.b0!r}",
        f"mae\t{model.mae!r}",
        f"rmsd\t{model.rmsd!r}",
    ]
    for key in sorted(model.coefficients):
        lines.append(f"coef\t{key}\t{model.coefficients[key]!r}")
    return "\n".join(lines) + "\n"


def load_model(text: str) -> AlignmentModel:
    """Inverse of save_model."""
    fields: dict[str, str] = {}
    coefficients: dict[str, float] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if parts[0] == "coef":
            if len(parts) != 3:
                raise ParseError(f"malformed coefficient line: {line!r}")
            coefficients[parts[1]] = float(parts[2])
        elif len(parts) == 2:
            fields[parts[0]] = parts[1]
        else:
            raise ParseError(f"malformed model line: {line!r}")
    try:
        return AlignmentModel(
            mode=fields["mode"],
            c0=float(fields["c0"]),
            coefficients=coefficients,
            b0=float(fields["b0"]),
            ridge=float(fields["ridge"]),
            n_records=int(fields["n_records"]),
            mae=float(fields["mae"]),
            rmsd=float(fields["rmsd"]),
        )
    except KeyError as exc:
        raise ParseError(f"model text missing field {exc}") from exc
