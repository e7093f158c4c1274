"""A full post-editing round trip against the workbench store.

Creates a project, uploads the sample TM plus MT/APE tables, pulls
suggestions for each segment, simulates a translator picking and editing
them, and exports the session log as XML.
"""

import tempfile
from datetime import datetime, timedelta, timezone
from pathlib import Path

from tmbench import Origin, export_alignments, import_xml
from tmbench.store import Workbench

DATA = Path(__file__).parent / "data"
CLOCK = datetime(2026, 8, 9, 14, 0, 0, tzinfo=timezone.utc)

workdir = tempfile.mkdtemp(prefix="tmbench-demo-")
bench = Workbench(workdir)

pid = bench.create_project("demo-en-de", "en", "de")
added, warnings = bench.upload_tm(pid, (DATA / "sample.tm.tsv").read_text("utf-8"))
print(f"uploaded TM: {added} entries, {len(warnings)} warnings")
seg_ids = bench.add_segments(pid, (DATA / "segments.txt").read_text("utf-8").splitlines())
bench.ingest_table(pid, Origin.MT, (DATA / "mt.tsv").read_text("utf-8"))
bench.ingest_table(pid, Origin.APE, (DATA / "ape.tsv").read_text("utf-8"))

session_id = bench.create_session(pid, "demo-translator")
clock = CLOCK
for i, seg_id in enumerate(seg_ids):
    suggestions = bench.get_suggestions(pid, seg_id)
    # pick the best TM hit when it is strong, otherwise post-edit the MT
    if suggestions.tm and suggestions.tm[0].sim_score >= 0.8:
        origin, initial = Origin.TM, bench.project(pid).entries[
            suggestions.tm[0].entry_id
        ].target.raw
    elif suggestions.mt is not None:
        origin, initial = Origin.MT, suggestions.mt
    else:
        origin, initial = Origin.SCRATCH, ""
    final = initial if i % 3 else (initial + " !").strip()
    started = clock
    clock += timedelta(seconds=20 + 3 * i)
    record = bench.submit_postedit(
        pid, session_id, seg_id, origin, initial, final, started, clock
    )
    print(
        f"{seg_id}: chose {record.origin.value:7s} "
        f"edits(i/d/s/sh)={record.insertions}/{record.deletions}/"
        f"{record.substitutions}/{record.shifts} time={record.edit_time_ms}ms"
    )

xml_bytes = bench.export_log(pid, session_id)
log_path = Path(workdir) / "session.xml"
log_path.write_bytes(xml_bytes)
print(f"\nwrote {log_path} ({len(xml_bytes)} bytes)")
print(xml_bytes.decode("utf-8")[:400] + "...\n")

restored = import_xml(xml_bytes)
print(f"re-imported {len(restored.records)} records; round-trip equal:",
      restored == bench.session(pid, session_id))

first = restored.records[0]
if first.origin is Origin.TM:
    entry_id = None
    for eid, entry in bench.project(pid).entries.items():
        if entry.target.raw == first.initial_text:
            entry_id = eid
            break
    links = export_alignments(first, chosen_entry=bench.project(pid).entries[entry_id])
else:
    links = export_alignments(
        first, source_segment=bench.project(pid).segments[first.segment_id]
    )
print(f"alignment export for {first.segment_id}: {links}")
