"""Deterministic seed derivation.

Every place that needs a child RNG (per-class splits, per-document
synthesis) derives its seed here, so reproducibility does not depend on
call order or on Python's per-process hash salting.
"""

from __future__ import annotations

import hashlib


def derive_seed(base: int, *parts: object) -> int:
    """Derive a 64-bit child seed from a base seed and a role path.

    The same (base, parts) always yields the same seed, on any platform.
    """
    key = "|".join([str(int(base)), *(str(p) for p in parts)])
    digest = hashlib.sha256(key.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")
