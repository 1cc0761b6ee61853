"""Deterministic randomness for reproducible runs.

Every sampling decision in this package flows through a DetRng so that a
(seed, label) pair fully determines protocol runs, attack trials, and game
outcomes.  The stream is SHA-256 in counter mode, which is deterministic
across platforms and Python versions (unlike the stdlib Mersenne Twister).
"""

from __future__ import annotations

import hashlib

Seed = bytes | str | int


def _canon(seed: Seed) -> bytes:
    if isinstance(seed, bytes):
        return seed
    if isinstance(seed, str):
        return seed.encode("utf-8")
    if isinstance(seed, int):
        return str(seed).encode("ascii")
    raise TypeError(f"unsupported seed type: {type(seed).__name__}")


class DetRng:
    """SHA-256 counter-mode byte stream with unbiased integer sampling."""

    def __init__(self, seed: Seed, label: bytes = b""):
        self._key = hashlib.sha256(_canon(seed) + b"\x1f" + label).digest()
        self._counter = 0
        self._buf = b""

    def fork(self, label: Seed) -> "DetRng":
        """Derive an independent stream; forks with distinct labels never overlap."""
        return DetRng(self._key, label=_canon(label))

    def randbytes(self, n: int) -> bytes:
        while len(self._buf) < n:
            block = hashlib.sha256(self._key + self._counter.to_bytes(8, "big"))
            self._buf += block.digest()
            self._counter += 1
        out, self._buf = self._buf[:n], self._buf[n:]
        return out

    def randbits(self, k: int) -> int:
        if k <= 0:
            raise ValueError("k must be positive")
        nbytes = (k + 7) // 8
        return int.from_bytes(self.randbytes(nbytes), "big") >> (8 * nbytes - k)

    def randbelow(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection sampling."""
        if n <= 0:
            raise ValueError("n must be positive")
        k = n.bit_length()
        while True:
            r = self.randbits(k)
            if r < n:
                return r

    def randrange(self, a: int, b: int) -> int:
        if b <= a:
            raise ValueError("empty range")
        return a + self.randbelow(b - a)

    def coin(self) -> int:
        return self.randbits(1)

    def choice(self, seq):
        return seq[self.randbelow(len(seq))]
