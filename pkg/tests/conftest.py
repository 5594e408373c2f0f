"""Shared fixtures: a deterministic msnbc-format clickstream file generator."""

import numpy as np
import pytest

PAGE_NAMES = [
    "frontpage", "news", "tech", "local", "opinion", "on-air", "misc", "weather",
    "msn-news", "health", "living", "business", "msn-sports", "sports", "summary",
    "bbs", "travel",
]

# (1-based page signature, visit-share weights) per browsing archetype; signatures
# share pages so the planted user groups overlap in page space
ARCHETYPES = [
    ((1, 2, 3, 4), (0.4, 0.3, 0.2, 0.1)),
    ((4, 5, 6, 7), (0.35, 0.3, 0.25, 0.1)),
    ((8, 9, 10, 11), (0.45, 0.25, 0.2, 0.1)),
    ((11, 12, 13, 14), (0.4, 0.35, 0.15, 0.1)),
    ((2, 8, 15, 16), (0.5, 0.25, 0.15, 0.1)),
    ((5, 12, 16, 17), (0.35, 0.3, 0.2, 0.15)),
]


def write_msnbc_fixture(path, n_sessions=1000, n_archetype=900, seed=3):
    """Write an msnbc-format session file with archetypal plus random sessions.

    The first n_archetype sessions cycle through ARCHETYPES: each session's
    length is split across its archetype's pages by largest-remainder
    apportionment of the weights, so same-archetype users have proportional
    (hence correlated) visit-count rows. The rest are uniform noise sessions.
    """
    rng = np.random.default_rng(seed)
    lines = ["% synthetic clickstream fixture", " ".join(PAGE_NAMES)]
    for i in range(n_sessions):
        length = int(rng.integers(5, 16))
        if i < n_archetype:
            signature, weights = ARCHETYPES[i % len(ARCHETYPES)]
            quota = [w * length for w in weights]
            counts = [int(np.floor(q)) for q in quota]
            remainder = length - sum(counts)
            order = np.argsort([-(q - np.floor(q)) for q in quota])
            for j in range(remainder):
                counts[order[j]] += 1
            session = []
            for page, count in zip(signature, counts):
                session += [page] * count
        else:
            session = (rng.integers(1, len(PAGE_NAMES) + 1, length)).tolist()
        rng.shuffle(session)
        lines.append(" ".join(map(str, session)))
    path.write_text("\n".join(lines) + "\n")


@pytest.fixture(scope="session")
def msnbc_file(tmp_path_factory):
    """A 1000-session msnbc-format fixture file, built once per test session."""
    path = tmp_path_factory.mktemp("clickstream") / "sessions.seq"
    write_msnbc_fixture(path)
    return path


@pytest.fixture(scope="session")
def small_msnbc_file(tmp_path_factory):
    """A quick 60-session variant for pipeline plumbing tests."""
    path = tmp_path_factory.mktemp("clickstream-small") / "sessions.seq"
    write_msnbc_fixture(path, n_sessions=60, n_archetype=48, seed=7)
    return path
