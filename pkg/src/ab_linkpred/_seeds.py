"""Deterministic seed derivation shared by all randomized stages."""

import hashlib


def derive_seed(*parts) -> int:
    """Stable 63-bit seed derived from the given parts (ints or strings).

    Hash-based so that unrelated stages (neighbor shuffles, balancing,
    splitting, per-tree sampling) get independent streams and results never
    depend on process, platform, or scheduling order.
    """
    text = "\x1f".join(str(p) for p in parts)
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") >> 1
