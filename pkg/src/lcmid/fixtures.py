"""Bundled Q-matrices for the TIMSS 2007 4th-grade mathematics assessment.

Rows are stored in the original item order 1..25. The row grouping used to
exhibit the identity-like blocks ``(Q_1, Q_2, Q*)`` is kept as metadata in
:data:`BLOCK_ORDER`.
"""

from __future__ import annotations

import hashlib

import numpy as np

from lcmid.model import QMatrix

_TIMSS_K7 = """\
1000000
0100000
1100000
1100000
1010000
0000110
0001110
1000100
0000100
0001100
1001000
1000001
1000001
1100001
1000000
1000000
1010000
1010000
1000001
1010000
1010000
0000110
1000000
0000100
1000001
"""

_TIMSS_K3 = """\
100
100
100
100
100
010
010
110
010
010
110
101
101
101
100
100
100
100
101
101
100
010
100
010
101
"""

_TABLES = {"timss_k7": _TIMSS_K7, "timss_k3": _TIMSS_K3}

CHECKSUMS = {
    "timss_k7": "40bed18b24aeb3c3bc1eb16187f25251775b5f49f29bc7419c5c61e233bc6089",
    "timss_k3": "d0a25d1315a7821bc94ee6378e1047eaf4944b55ed2e155bfb5dd8ebbf7a169d",
}

LABELS = {
    "timss_k7": (
        "Whole numbers",
        "Fractions and decimals",
        "Number sentences, patterns and relationships",
        "Lines and angles",
        "Two- and three-dimensional shapes",
        "Location and movement",
        "Reading, interpreting, organizing and representing",
    ),
    "timss_k3": ("Number", "Geometric shapes and measures", "Data display"),
}

# 1-based item numbers in the published grouping (Q_1, Q_2, Q*).
BLOCK_ORDER = {
    "timss_k7": (
        (1, 3, 5, 10, 9, 6, 12),
        (15, 4, 17, 11, 24, 22, 13),
        (2, 8, 7, 14, 16, 23, 18, 20, 19, 25, 21),
    ),
    "timss_k3": (
        (1, 6, 12),
        (2, 7, 13),
        (3, 4, 5, 15, 16, 17, 18, 21, 23, 9, 10, 22, 24, 14, 19, 20, 25, 8, 11),
    ),
}

NAMES = tuple(sorted(_TABLES))


def checksum(name: str) -> str:
    return hashlib.sha256(_TABLES[name].encode("ascii")).hexdigest()


def fixture(name: str) -> QMatrix:
    """Return the named Q-matrix after verifying its embedded checksum."""
    if name not in _TABLES:
        raise KeyError(f"unknown fixture {name!r}; choose from {', '.join(NAMES)}")
    if checksum(name) != CHECKSUMS[name]:
        raise RuntimeError(f"fixture {name} failed its integrity check")
    rows = [[int(ch) for ch in line] for line in _TABLES[name].splitlines()]
    return QMatrix(np.array(rows, dtype=np.int64), LABELS[name])
