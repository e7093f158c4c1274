import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from tmbench import TMEntry, segment

WORDS = [
    "alpha", "bravo", "charlie", "delta", "echo", "foxtrot", "golf", "hotel",
    "india", "juliet", "kilo", "lima", "mike", "november", "oscar", "papa",
    "quebec", "romeo", "sierra", "tango", "uniform", "victor", "whiskey",
    "xray", "yankee", "zulu", "one", "two", "three", "four", "five", "six",
    "seven", "eight", "nine", "ten", "red", "green", "blue", "gray",
]


def random_text(rng: random.Random, min_len=3, max_len=9, vocab=WORDS) -> str:
    return " ".join(rng.choice(vocab) for _ in range(rng.randint(min_len, max_len)))


def make_entry(eid: str, source: str, target: str, alignment=frozenset()) -> TMEntry:
    return TMEntry(
        id=eid,
        source=segment(source, f"{eid}.s", "en"),
        target=segment(target, f"{eid}.t", "de"),
        alignment=frozenset(alignment),
    )


def synthetic_corpus(rng: random.Random, size: int) -> list[TMEntry]:
    """Unique synthetic TM entries; a per-entry marker token guarantees the
    source norms are pairwise distinct."""
    entries = []
    for i in range(size):
        src = f"{random_text(rng)} mark{i}"
        tgt = random_text(rng)
        entries.append(make_entry(f"e{i:04d}", src, tgt))
    return entries


@pytest.fixture
def rng() -> random.Random:
    return random.Random(0xC0FFEE)
