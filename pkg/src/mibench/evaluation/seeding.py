"""
Order-independent random streams for Monte-Carlo repetitions.

Each repetition's seed is a pure function of the master seed and the cell coordinates,
so results never depend on which worker ran which repetition, or in what order.
"""

import hashlib
from typing import Optional

import numpy as np

SPLIT_STREAM = "split"


def derive_seed(master_seed: int, design: str, subject: Optional[str], algorithm: str, n: int, rep: int) -> int:
    """
    64-bit seed: blake2b (8-byte digest) of "master|design|subject|algorithm|n|rep",
    read little-endian. A missing subject is written as "-".
    """
    key = f"{int(master_seed)}|{design}|{subject or '-'}|{algorithm}|{int(n)}|{int(rep)}"
    digest = hashlib.blake2b(key.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def split_seed(master_seed: int, design: str, subject: Optional[str]) -> int:
    """Seed shared by every cell and repetition of one data scope when the split is fixed."""
    return derive_seed(master_seed, design, subject, SPLIT_STREAM, 0, 0)


def stream(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)
