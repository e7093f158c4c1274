"""Word-level edit alignment with block shifts, and the similarity score.

The alignment charges one edit for every insertion, deletion,
substitution or block shift; the similarity rewards matches, penalizes
edits, and normalizes by the longer segment.
"""

from tmbench import EditOpKind, segment, similarity, ter_align


def show_alignment(hyp_text, ref_text):
    hyp, ref = segment(hyp_text), segment(ref_text)
    script = ter_align(hyp, ref)
    print(f"hyp: {hyp_text!r}")
    print(f"ref: {ref_text!r}")
    print(
        f"  matches={script.matches} ins={script.insertions} "
        f"del={script.deletions} sub={script.substitutions} shifts={script.shifts}"
    )
    for op in script.ops:
        if op.kind is EditOpKind.SHIFT:
            start, length, dest = op.shift_span
            print(f"  shift block [{start}:{start + length}] -> position {dest}")
        elif op.kind is EditOpKind.MATCH:
            print(f"  match  hyp[{op.hyp_index}] == ref[{op.ref_index}]")
        elif op.kind is EditOpKind.SUBSTITUTE:
            print(f"  sub    hyp[{op.hyp_index}] -> ref[{op.ref_index}]")
        elif op.kind is EditOpKind.INSERT:
            print(f"  insert ref[{op.ref_index}]")
        else:
            print(f"  delete hyp[{op.hyp_index}]")
    print(f"  similarity = {similarity(hyp, ref):.3f}")
    print()


print("=== identical segments ===")
show_alignment("the cat sat on the mat", "the cat sat on the mat")

print("=== one substitution ===")
show_alignment("the cat sat on the mat", "the dog sat on the mat")

print("=== a block shift: moving 'at noon' to the front ===")
show_alignment("the train leaves at noon", "at noon the train leaves")

print("=== heavy rewording ===")
show_alignment("prices rose sharply last year", "last year prices fell")

print("=== case-insensitive matching ===")
show_alignment("The Cat Sat", "the cat sat")
