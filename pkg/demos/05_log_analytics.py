"""Session-log analytics: selection rates, agreement, correlation.

Builds a synthetic three-translator log over a shared segment set, then
runs the full battery: who picked which engine, pairwise kappa per
variable, the edits-vs-time correlation, and edit-type frequencies.
"""

import random
from datetime import datetime, timedelta, timezone

from tmbench import (
    Origin,
    Session,
    agreement_report,
    edit_type_frequencies,
    pearson_rho,
    record_postedit,
    selection_rates,
    time_edits_series,
)

rng = random.Random(7)
T0 = datetime(2026, 8, 9, 9, 0, 0, tzinfo=timezone.utc)
PHRASES = ["der Zug fährt ab", "das Wetter ist schön", "die Katze schläft",
           "der Bericht ist fertig", "wir lesen ein Buch"]

records = []
for translator, mt_bias in (("T1", 0.8), ("T2", 0.85), ("T3", 0.8)):
    session = Session(f"sess-{translator}", "p1", translator)
    clock = T0
    for i in range(60):
        roll = rng.random()
        if roll < mt_bias:
            origin = Origin.MT
        elif roll < mt_bias + 0.05:
            origin = Origin.TM
        else:
            origin = Origin.SCRATCH
        initial = "" if origin is Origin.SCRATCH else rng.choice(PHRASES)
        final = rng.choice(PHRASES)
        edit_seconds = 5 + rng.randint(0, 40)
        started = clock
        clock += timedelta(seconds=edit_seconds)
        record_postedit(session, f"s{i}", origin, initial, final, started, clock)
        clock += timedelta(seconds=2)
    records.extend(session.records)

print("=== selection rates ===")
table = selection_rates(records)
for translator in sorted(table.totals):
    rates = ", ".join(
        f"{origin.value}={rate:.3f}" for origin, rate in table.rates[translator].items()
    )
    print(f"  {translator} (n={table.totals[translator]}): {rates}")

print("\n=== pairwise agreement (Cohen's kappa) ===")
for variable in ("selection", "time", "edits"):
    report = agreement_report(records, variable)
    cells = ", ".join(
        f"{a}/{b}={v:.2f}" for (a, b), v in sorted(report.kappa.items()) if a < b
    )
    print(f"  {variable:9s}: {cells}")

print("\n=== edits vs. time ===")
series = time_edits_series(records)
edits = [float(e) for e, _ in series]
times = [float(t) for _, t in series]
print(f"  {len(series)} points, rho = {pearson_rho(edits, times):.3f}")

print("\n=== edit-type frequencies ===")
freq = edit_type_frequencies(records)
for kind, count in sorted(freq.as_dict().items(), key=lambda kv: -kv[1]):
    print(f"  {kind:13s} {count}")
