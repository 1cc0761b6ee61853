"""Additively homomorphic encryption over the composite-order group.

A ciphertext of m is C = g^m * h^r with r uniform in Z_N; since h has order
q_sub, raising C to q_sub strips the blinding and leaves (g^q_sub)^m, whose
small discrete log is the plaintext.  One ciphertext multiplication is
available through the pairing, which moves the carrier from G to G_T.
Plaintexts must stay small enough for the final discrete-log step.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .algebra import (
    IDENTITY,
    CurvePoint,
    GroupParams,
    GtElement,
    dlog_bsgs,
    gt_mul,
    gt_pow,
    pairing,
    point_add,
    scalar_mul,
)
from .rng import DetRng

DEFAULT_MESSAGE_BOUND = 1 << 16

LEVEL_G = "G"
LEVEL_GT = "GT"

CIPHERTEXT_FORMAT = "bgnlab-ct/1"


class MessageOutOfRangeError(ValueError):
    """Plaintext outside [0, message_bound)."""


class DecryptionRangeError(ValueError):
    """The discrete-log step found no exponent below the stated bound."""


@dataclass(frozen=True)
class BgnPublicKey:
    params: GroupParams

    @property
    def g(self) -> CurvePoint:
        return self.params.g

    @property
    def h(self) -> CurvePoint:
        return self.params.h


@dataclass(frozen=True)
class BgnKeyPair:
    pk: BgnPublicKey
    sk: int  # q_sub


def bgn_keypair(params: GroupParams) -> BgnKeyPair:
    return BgnKeyPair(BgnPublicKey(params), params.q_sub)


@dataclass(frozen=True)
class BgnCiphertext:
    level: str
    body: CurvePoint | GtElement

    def __post_init__(self):
        if self.level == LEVEL_G and not isinstance(self.body, CurvePoint):
            raise ValueError("level-G ciphertext needs a curve point body")
        if self.level == LEVEL_GT and not isinstance(self.body, GtElement):
            raise ValueError("level-GT ciphertext needs a GT body")
        if self.level not in (LEVEL_G, LEVEL_GT):
            raise ValueError(f"unknown ciphertext level {self.level!r}")


@lru_cache(maxsize=None)
def gt_base_g(params: GroupParams) -> GtElement:
    """The G_T generator e(g, g); plays the role of g for level-GT ciphertexts."""
    return pairing(params.g, params.g, params)


@lru_cache(maxsize=None)
def gt_base_h(params: GroupParams) -> GtElement:
    """The order-q_sub blinding base e(g, h) in G_T."""
    return pairing(params.g, params.h, params)


def bgn_encrypt(
    pk: BgnPublicKey,
    m: int,
    rng: DetRng,
    *,
    message_bound: int = DEFAULT_MESSAGE_BOUND,
    r: int | None = None,
) -> BgnCiphertext:
    """Encrypt m as g^m * h^r.  r may be pinned for deterministic tests."""
    if not 0 <= m < message_bound:
        raise MessageOutOfRangeError(f"message {m} outside [0, {message_bound})")
    params = pk.params
    if r is None:
        r = rng.randbelow(params.n_ord)
    body = point_add(
        scalar_mul(m, params.g, params), scalar_mul(r, params.h, params), params
    )
    return BgnCiphertext(LEVEL_G, body)


def bgn_add(pk: BgnPublicKey, c1: BgnCiphertext, c2: BgnCiphertext) -> BgnCiphertext:
    if c1.level != c2.level:
        raise ValueError("cannot add ciphertexts at different levels")
    params = pk.params
    if c1.level == LEVEL_G:
        return BgnCiphertext(LEVEL_G, point_add(c1.body, c2.body, params))
    return BgnCiphertext(LEVEL_GT, gt_mul(c1.body, c2.body, params))


def bgn_mult_once(
    pk: BgnPublicKey, c1: BgnCiphertext, c2: BgnCiphertext
) -> BgnCiphertext:
    """The single supported ciphertext multiplication; output lives in G_T."""
    if c1.level != LEVEL_G or c2.level != LEVEL_G:
        raise ValueError("multiplication consumes two level-G ciphertexts")
    return BgnCiphertext(LEVEL_GT, pairing(c1.body, c2.body, pk.params))


def bgn_decrypt(kp: BgnKeyPair, ct: BgnCiphertext, bound: int) -> int:
    """Recover the plaintext, assuming it is below bound."""
    params = kp.pk.params
    if ct.level == LEVEL_G:
        stripped = scalar_mul(kp.sk, ct.body, params)
        base = scalar_mul(kp.sk, params.g, params)
    else:
        stripped = gt_pow(ct.body, kp.sk, params)
        base = gt_pow(gt_base_g(params), kp.sk, params)
    m = dlog_bsgs(base, stripped, bound, params)
    if m is None:
        raise DecryptionRangeError(f"no plaintext below {bound}")
    return m


# ---------------------------------------------------------------------------
# serialization


def body_to_text(body: CurvePoint | GtElement) -> str:
    if isinstance(body, CurvePoint):
        if body.is_identity:
            return "G:inf"
        return f"G:{hex(body.x)},{hex(body.y)}"
    return f"GT:{hex(body.a)},{hex(body.b)}"


def body_from_text(text: str) -> CurvePoint | GtElement:
    tag, _, payload = text.partition(":")
    if tag == "G":
        if payload == "inf":
            return IDENTITY
        xs, ys = payload.split(",")
        return CurvePoint(int(xs, 16), int(ys, 16))
    if tag == "GT":
        a, b = payload.split(",")
        return GtElement(int(a, 16), int(b, 16))
    raise ValueError(f"unknown body tag {tag!r}")


def ciphertext_to_text(ct: BgnCiphertext) -> str:
    return f"{CIPHERTEXT_FORMAT}:{body_to_text(ct.body)}"


def ciphertext_from_text(text: str) -> BgnCiphertext:
    fmt, _, rest = text.partition(":")
    if fmt != CIPHERTEXT_FORMAT:
        raise ValueError(f"unsupported ciphertext format {fmt!r}")
    body = body_from_text(rest)
    level = LEVEL_G if isinstance(body, CurvePoint) else LEVEL_GT
    return BgnCiphertext(level, body)
