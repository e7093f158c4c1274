"""Statistics over post-editing logs.

Covers the session-level analyses a study of the logs needs: which
suggestion origin each translator picked and how often, chance-corrected
pairwise agreement (Cohen's kappa), correlation between editing time and
the amount of editing (Pearson's rho), and raw edit-type frequencies.
"""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Hashable, Mapping, Sequence, Tuple

from .editlog import EditLogRecord
from .suggestions import Origin

# Continuous session variables (time, edit counts) are quantile-binned
# before computing kappa; three bins = terciles.
AGREEMENT_BINS = 3


def cohen_kappa(a: Sequence[Hashable], b: Sequence[Hashable]) -> float:
    """Chance-corrected agreement between two equally long label sequences.

    kappa = (po - pe) / (1 - pe) with po the observed agreement rate and
    pe the chance rate from the marginal label distributions.  In the
    degenerate pe = 1 case the value is 1.0 for identical sequences and
    0.0 otherwise.
    """
    if len(a) != len(b):
        raise ValueError(f"sequences differ in length: {len(a)} vs {len(b)}")
    if len(a) == 0:
        raise ValueError("need at least one label pair")
    n = len(a)
    po = sum(1 for x, y in zip(a, b) if x == y) / n
    ca, cb = Counter(a), Counter(b)
    pe = sum((ca[label] / n) * (cb[label] / n) for label in ca if label in cb)
    if pe == 1.0:
        return 1.0 if po == 1.0 else 0.0
    return (po - pe) / (1.0 - pe)


def pearson_rho(x: Sequence[float], y: Sequence[float]) -> float:
    """Sample Pearson correlation; constant input has no defined value."""
    if len(x) != len(y):
        raise ValueError(f"series differ in length: {len(x)} vs {len(y)}")
    if len(x) < 2:
        raise ValueError("need at least two points")
    n = len(x)
    mx = math.fsum(x) / n
    my = math.fsum(y) / n
    var_x = math.fsum((v - mx) ** 2 for v in x)
    var_y = math.fsum((v - my) ** 2 for v in y)
    if var_x == 0.0 or var_y == 0.0:
        raise ValueError("correlation undefined for a constant series")
    cov = math.fsum((u - mx) * (v - my) for u, v in zip(x, y))
    return cov / math.sqrt(var_x * var_y)


@dataclass(frozen=True)
class SelectionTable:
    """Per-translator counts and rates of chosen suggestion origins."""

    counts: Mapping[str, Mapping[Origin, int]]
    rates: Mapping[str, Mapping[Origin, float]]
    totals: Mapping[str, int]


def selection_rates(records: Sequence[EditLogRecord]) -> SelectionTable:
    """Group records by translator and tally which origin was chosen."""
    if not records:
        raise ValueError("no records to tally")
    counts: dict[str, Counter] = defaultdict(Counter)
    for rec in records:
        counts[rec.translator_id][rec.origin] += 1
    totals = {t: sum(c.values()) for t, c in counts.items()}
    rates = {
        t: {origin: cnt / totals[t] for origin, cnt in sorted(c.items(), key=lambda kv: kv[0].value)}
        for t, c in counts.items()
    }
    return SelectionTable(
        counts={t: dict(c) for t, c in counts.items()},
        rates=rates,
        totals=totals,
    )


@dataclass(frozen=True)
class EditTypeFrequencies:
    insertions: int
    deletions: int
    substitutions: int
    shifts: int
    per_record_totals: Tuple[int, ...]

    def as_dict(self) -> dict[str, int]:
        return {
            "insertions": self.insertions,
            "deletions": self.deletions,
            "substitutions": self.substitutions,
            "shifts": self.shifts,
        }


def edit_type_frequencies(records: Sequence[EditLogRecord]) -> EditTypeFrequencies:
    """Sum each edit type over the records; totals per record ride along."""
    return EditTypeFrequencies(
        insertions=sum(r.insertions for r in records),
        deletions=sum(r.deletions for r in records),
        substitutions=sum(r.substitutions for r in records),
        shifts=sum(r.shifts for r in records),
        per_record_totals=tuple(
            r.insertions + r.deletions + r.substitutions + r.shifts for r in records
        ),
    )


def time_edits_series(records: Sequence[EditLogRecord]) -> list[Tuple[int, int]]:
    """(total edits, editing time ms) per record, ordered by finish time."""
    ordered = sorted(records, key=lambda r: r.finished_at)
    return [
        (r.insertions + r.deletions + r.substitutions + r.shifts, r.edit_time_ms)
        for r in ordered
    ]


def bin_by_quantiles(values: Sequence[float], bins: int = AGREEMENT_BINS) -> list[int]:
    """Map each value to its quantile bin (0 = lowest).

    Cut points sit at the ceil(n*q)-th order statistic, so ties get the
    same bin and every bin boundary is an observed value.
    """
    if bins < 2:
        raise ValueError("need at least two bins")
    if not values:
        return []
    ordered = sorted(values)
    n = len(ordered)
    cuts = [ordered[min(n - 1, math.ceil(n * (q + 1) / bins) - 1)] for q in range(bins - 1)]
    out = []
    for v in values:
        for b, cut in enumerate(cuts):
            if v <= cut:
                out.append(b)
                break
        else:
            out.append(bins - 1)
    return out


@dataclass(frozen=True)
class AgreementReport:
    """Pairwise Cohen's kappa over one session variable."""

    variable: str
    translators: Tuple[str, ...]
    kappa: Mapping[Tuple[str, str], float]


def _per_translator(records: Sequence[EditLogRecord]) -> dict[str, dict[str, EditLogRecord]]:
    by_translator: dict[str, dict[str, EditLogRecord]] = defaultdict(dict)
    for rec in records:
        by_translator[rec.translator_id][rec.segment_id] = rec
    return by_translator


def agreement_report(records: Sequence[EditLogRecord], variable: str) -> AgreementReport:
    """Pairwise kappa between translators over their shared segments.

    `variable` is one of "selection" (chosen origin, categorical),
    "time" or "edits" (continuous, quantile-binned per translator pair
    with AGREEMENT_BINS bins before computing kappa).
    """
    if variable not in ("selection", "time", "edits"):
        raise ValueError(f"unknown agreement variable {variable!r}")
    by_translator = _per_translator(records)
    translators = tuple(sorted(by_translator))
    kappa: dict[Tuple[str, str], float] = {}
    for i, t1 in enumerate(translators):
        for t2 in translators[i + 1 :]:
            shared = sorted(set(by_translator[t1]) & set(by_translator[t2]))
            if not shared:
                continue
            if variable == "selection":
                a = [by_translator[t1][s].origin for s in shared]
                b = [by_translator[t2][s].origin for s in shared]
            else:
                def series(t):
                    recs = (by_translator[t][s] for s in shared)
                    if variable == "time":
                        return [r.edit_time_ms for r in recs]
                    return [
                        r.insertions + r.deletions + r.substitutions + r.shifts
                        for r in recs
                    ]
                a = bin_by_quantiles(series(t1))
                b = bin_by_quantiles(series(t2))
            value = cohen_kappa(a, b)
            kappa[(t1, t2)] = value
            kappa[(t2, t1)] = value
    return AgreementReport(variable=variable, translators=translators, kappa=kappa)
