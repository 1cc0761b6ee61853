"""The aggregation schemes under study.

Variant ids (also the CLI vocabulary):

* ``shi-base``  - additive blinding c_i = ghat^m * H_T(t)^s_i over G_T, where
  the share vector satisfies sum(s_i) = 0 (mod N) so a complete period
  unmasks exactly the sum.
* ``fhl14``     - noisy BGN over G: CT_i = g^m * (H(t) * h^r)^s_i; the
  aggregator holds the decryption key in the original protocol.
* ``llwkr19``   - noisy BGN over G: CT_i = g^m * h^r * f^s_i; aggregator and
  decryptor are distinct roles.  (Two published protocols share this exact
  shape; one code path serves both.)
* ``fixed-gt``  - the repaired construction: CT_i = ghat^m * (H_T(t) *
  hhat^r)^s_i over G_T, where no pairing is available to an attacker.
* ``wang``      - identity-based scheme with no blinding shares at all:
  CT_i = (g^r, ghat^m * W^r); kept here because its decryptor reads every
  individual value (see attacks).
* ``shi-g``     - the shi-base blinding naively instantiated over the curve
  group G.  Not one of the published protocols: it exists in this lab to
  demonstrate why instantiating the blinding in a pairing-equipped group
  voids its security argument.

Roles are explicit: the dealer runs setup_shares, participants hold s_i,
the aggregator holds s_0, and the recipient holds the decryption key q_sub.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass

from .algebra import (
    GT_ONE,
    IDENTITY,
    CurvePoint,
    GroupParams,
    GtElement,
    dlog_bsgs,
    gt_inv,
    gt_mul,
    gt_pow,
    hash_to_g,
    hash_to_gt,
    pairing,
    point_add,
    point_neg,
    scalar_mul,
)
from .bgn import (
    DEFAULT_MESSAGE_BOUND,
    DecryptionRangeError,
    MessageOutOfRangeError,
    body_from_text,
    body_to_text,
    gt_base_g,
    gt_base_h,
)
from .rng import DetRng

SHI_BASE = "shi-base"
FHL14 = "fhl14"
LLWKR19 = "llwkr19"
FIXED_GT = "fixed-gt"
WANG = "wang"
SHI_G = "shi-g"

BLINDED_SCHEMES = (SHI_BASE, FHL14, LLWKR19, FIXED_GT, SHI_G)
ALL_SCHEMES = BLINDED_SCHEMES + (WANG,)
GT_CARRIER = frozenset({SHI_BASE, FIXED_GT})

TRANSCRIPT_FORMAT = "bgnlab-transcript/1"


class EncryptOnceError(RuntimeError):
    """A participant already produced a ciphertext for this period."""


class IncompletePeriodError(RuntimeError):
    """Aggregation attempted without one ciphertext from every participant."""


class AggregateDecryptionError(DecryptionRangeError):
    """Aggregate failed to decrypt: period incomplete or sum above bound."""


@dataclass(frozen=True)
class PartySecrets:
    """Share vector s_0..s_n with sum = 0 (mod N), plus the recipient's BGN key."""

    shares: tuple[int, ...]
    recipient_sk: int

    @property
    def n_parties(self) -> int:
        return len(self.shares) - 1


@dataclass(frozen=True)
class NoisyCiphertext:
    scheme: str
    participant: int
    period: bytes
    body: CurvePoint | GtElement | WangCiphertext


@dataclass(frozen=True)
class WangKeys:
    master_x: int
    identity: bytes
    W: GtElement  # encryption key e(H(ID), g^x)
    d: CurvePoint  # decryption key [x] H(ID)


@dataclass(frozen=True)
class WangCiphertext:
    X: CurvePoint
    Y: GtElement


def _check_scheme(scheme: str) -> None:
    if scheme not in ALL_SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}; expected one of {ALL_SCHEMES}")


def period_point(params: GroupParams, t: bytes) -> CurvePoint:
    """H(t) in G; period labels are domain-separated from generator labels."""
    return hash_to_g(b"bgnlab/t/" + bytes(t), params)


def period_gt(params: GroupParams, t: bytes) -> GtElement:
    """H_T(t) in G_T for the schemes whose ciphertexts live there."""
    return hash_to_gt(b"bgnlab/t/" + bytes(t), params)


def setup_shares(n: int, params: GroupParams, rng: DetRng) -> PartySecrets:
    """Dealer role: n participant shares plus the cancelling aggregator share s_0."""
    if n < 1:
        raise ValueError("need at least one participant")
    shares = [rng.randbelow(params.n_ord) for _ in range(n)]
    s0 = (-sum(shares)) % params.n_ord
    return PartySecrets(tuple([s0] + shares), params.q_sub)


def noisy_enc(
    scheme: str,
    params: GroupParams,
    s_i: int,
    participant: int,
    t: bytes,
    m: int,
    rng: DetRng,
    *,
    message_bound: int = DEFAULT_MESSAGE_BOUND,
    r: int | None = None,
) -> NoisyCiphertext:
    """One participant's blinded ciphertext for period t.

    The randomness r may be pinned for deterministic tests; shi variants take
    no per-ciphertext randomness.
    """
    _check_scheme(scheme)
    if scheme == WANG:
        raise ValueError("wang uses wang_encrypt, not the blinding path")
    if not 0 <= m < message_bound:
        raise MessageOutOfRangeError(f"message {m} outside [0, {message_bound})")
    t = bytes(t)
    n = params.n_ord

    if scheme == SHI_BASE:
        body = gt_mul(
            gt_pow(gt_base_g(params), m, params),
            gt_pow(period_gt(params, t), s_i, params),
            params,
        )
    elif scheme == SHI_G:
        body = point_add(
            scalar_mul(m, params.g, params),
            scalar_mul(s_i, period_point(params, t), params),
            params,
        )
    elif scheme == FHL14:
        if r is None:
            r = rng.randbelow(n)
        mask = point_add(
            period_point(params, t), scalar_mul(r, params.h, params), params
        )
        body = point_add(
            scalar_mul(m, params.g, params), scalar_mul(s_i, mask, params), params
        )
    elif scheme == LLWKR19:
        if r is None:
            r = rng.randbelow(n)
        body = point_add(
            point_add(
                scalar_mul(m, params.g, params),
                scalar_mul(r, params.h, params),
                params,
            ),
            scalar_mul(s_i, params.f, params),
            params,
        )
    else:  # FIXED_GT
        if r is None:
            r = rng.randbelow(n)
        mask = gt_mul(
            period_gt(params, t), gt_pow(gt_base_h(params), r, params), params
        )
        body = gt_mul(
            gt_pow(gt_base_g(params), m, params), gt_pow(mask, s_i, params), params
        )
    return NoisyCiphertext(scheme, participant, t, body)


def aggregate(
    scheme: str,
    params: GroupParams,
    s_0: int,
    cts: list[NoisyCiphertext],
    n_parties: int,
    *,
    allow_partial: bool = False,
):
    """Aggregator role: fold one period's ciphertexts and apply the s_0 share.

    The blinding only cancels over a complete period, so a missing participant
    is rejected up front unless allow_partial is set (tests use that to show
    the residue makes decryption fail).
    """
    _check_scheme(scheme)
    if scheme == WANG:
        raise ValueError("wang uses wang_aggregate")
    if not cts:
        raise IncompletePeriodError("no ciphertexts")
    period = cts[0].period
    seen = set()
    for ct in cts:
        if ct.scheme != scheme or ct.period != period:
            raise ValueError("mixed schemes or periods in one aggregation")
        if ct.participant in seen:
            raise ValueError(f"duplicate ciphertext from participant {ct.participant}")
        seen.add(ct.participant)
    if not allow_partial and seen != set(range(1, n_parties + 1)):
        missing = sorted(set(range(1, n_parties + 1)) - seen)
        raise IncompletePeriodError(f"missing participants {missing}")

    if scheme in GT_CARRIER:
        V = gt_pow(period_gt(params, period), s_0, params)
        for ct in cts:
            V = gt_mul(V, ct.body, params)
        return V
    if scheme == LLWKR19:
        V = scalar_mul(s_0, params.f, params)
    else:  # FHL14, SHI_G blind with the period point
        V = scalar_mul(s_0, period_point(params, period), params)
    for ct in cts:
        V = point_add(V, ct.body, params)
    return V


def aggre_dec(scheme: str, params: GroupParams, recipient_sk: int, V, bound: int) -> int:
    """Recipient role: recover the period sum from an aggregate V."""
    _check_scheme(scheme)
    if scheme == SHI_BASE:
        base, target = gt_base_g(params), V
    elif scheme == SHI_G:
        base, target = params.g, V
    elif scheme == FIXED_GT:
        base = gt_pow(gt_base_g(params), recipient_sk, params)
        target = gt_pow(V, recipient_sk, params)
    elif scheme in (FHL14, LLWKR19):
        base = scalar_mul(recipient_sk, params.g, params)
        target = scalar_mul(recipient_sk, V, params)
    else:
        raise ValueError("wang uses wang_decrypt_sum")
    total = dlog_bsgs(base, target, bound, params)
    if total is None:
        raise AggregateDecryptionError(
            "aggregate did not decrypt: period incomplete or sum above bound"
        )
    return total


def peel_blinding(
    scheme: str,
    params: GroupParams,
    ct: NoisyCiphertext,
    s_i: int,
    r: int | None,
    bound: int,
) -> int:
    """Test-only oracle: strip a single ciphertext's blinding with full knowledge
    of (s_i, r) and return its plaintext.  No protocol role can do this."""
    t = ct.period
    if scheme == SHI_BASE:
        residue = gt_pow(period_gt(params, t), s_i, params)
        bare = gt_mul(ct.body, gt_inv(residue, params), params)
        base = gt_base_g(params)
    elif scheme == FIXED_GT:
        mask = gt_mul(
            period_gt(params, t), gt_pow(gt_base_h(params), r, params), params
        )
        bare = gt_mul(ct.body, gt_inv(gt_pow(mask, s_i, params), params), params)
        base = gt_base_g(params)
    elif scheme == SHI_G:
        residue = scalar_mul(s_i, period_point(params, t), params)
        bare = point_add(ct.body, point_neg(residue, params), params)
        base = params.g
    elif scheme == FHL14:
        mask = point_add(
            period_point(params, t), scalar_mul(r, params.h, params), params
        )
        bare = point_add(
            ct.body, point_neg(scalar_mul(s_i, mask, params), params), params
        )
        base = params.g
    elif scheme == LLWKR19:
        residue = point_add(
            scalar_mul(r, params.h, params), scalar_mul(s_i, params.f, params), params
        )
        bare = point_add(ct.body, point_neg(residue, params), params)
        base = params.g
    else:
        raise ValueError(f"no blinding to peel for {scheme!r}")
    m = dlog_bsgs(base, bare, bound, params)
    if m is None:
        raise DecryptionRangeError("peeled plaintext above bound")
    return m


# ---------------------------------------------------------------------------
# Wang's identity-based scheme


def wang_keygen(params: GroupParams, identity: bytes, rng: DetRng) -> WangKeys:
    """Trusted-authority role: master secret x, encryption key W, decryption key d."""
    x = rng.randrange(1, params.n_ord)
    Qid = hash_to_g(b"bgnlab/id/" + bytes(identity), params)
    W = pairing(Qid, scalar_mul(x, params.g, params), params)
    d = scalar_mul(x, Qid, params)
    return WangKeys(x, bytes(identity), W, d)


def wang_encrypt(
    params: GroupParams,
    W: GtElement,
    m: int,
    rng: DetRng,
    *,
    message_bound: int = DEFAULT_MESSAGE_BOUND,
    r: int | None = None,
) -> WangCiphertext:
    if not 0 <= m < message_bound:
        raise MessageOutOfRangeError(f"message {m} outside [0, {message_bound})")
    if r is None:
        r = rng.randbelow(params.n_ord)
    X = scalar_mul(r, params.g, params)
    Y = gt_mul(
        gt_pow(gt_base_g(params), m, params), gt_pow(W, r, params), params
    )
    return WangCiphertext(X, Y)


def wang_aggregate(params: GroupParams, cts: list[WangCiphertext]) -> WangCiphertext:
    """Component-wise products; the scheme is homomorphic in both slots.

    The published protocol only pins down encryption and the key relations;
    this aggregate/decrypt path is the minimal reconstruction consistent with
    them."""
    if not cts:
        raise IncompletePeriodError("no ciphertexts")
    X, Y = IDENTITY, GT_ONE
    for ct in cts:
        X = point_add(X, ct.X, params)
        Y = gt_mul(Y, ct.Y, params)
    return WangCiphertext(X, Y)


def wang_decrypt_sum(
    params: GroupParams, d: CurvePoint, agg: WangCiphertext, bound: int
) -> int:
    blind = pairing(d, agg.X, params)
    bare = gt_mul(agg.Y, gt_inv(blind, params), params)
    total = dlog_bsgs(gt_base_g(params), bare, bound, params)
    if total is None:
        raise AggregateDecryptionError("wang aggregate above bound")
    return total


# ---------------------------------------------------------------------------
# protocol-run ledger


class ProtocolRun:
    """Mutable state of one protocol execution: enforces encrypt-once per
    (participant, period), tracks period completeness, and records an
    append-only transcript.  Submissions may arrive concurrently."""

    def __init__(
        self,
        scheme: str,
        params: GroupParams,
        secrets: PartySecrets | None,
        n_parties: int,
        *,
        wang_keys: WangKeys | None = None,
        message_bound: int = DEFAULT_MESSAGE_BOUND,
    ):
        _check_scheme(scheme)
        if scheme == WANG and wang_keys is None:
            raise ValueError("wang runs need wang_keys")
        if scheme != WANG and secrets is None:
            raise ValueError("blinded schemes need dealt shares")
        self.scheme = scheme
        self.params = params
        self.secrets = secrets
        self.n_parties = n_parties
        self.wang_keys = wang_keys
        self.message_bound = message_bound
        self._lock = threading.Lock()
        self._by_period: dict[bytes, dict[int, object]] = {}
        self._records: list[dict] = []

    def encrypt(
        self, participant: int, t: bytes, m: int, rng: DetRng, *, r: int | None = None
    ):
        if not 1 <= participant <= self.n_parties:
            raise ValueError(f"participant index {participant} out of range")
        t = bytes(t)
        if self.scheme == WANG:
            ct = wang_encrypt(
                self.params, self.wang_keys.W, m, rng,
                message_bound=self.message_bound, r=r,
            )
            body_text = f"{body_to_text(ct.X)}|{body_to_text(ct.Y)}"
        else:
            ct = noisy_enc(
                self.scheme, self.params, self.secrets.shares[participant],
                participant, t, m, rng, message_bound=self.message_bound, r=r,
            )
            body_text = body_to_text(ct.body)
        with self._lock:
            slot = self._by_period.setdefault(t, {})
            if participant in slot:
                raise EncryptOnceError(
                    f"participant {participant} already encrypted for period {t!r}"
                )
            slot[participant] = ct
            self._records.append(
                {
                    "scheme": self.scheme,
                    "participant": participant,
                    "period": t.hex(),
                    "body": body_text,
                }
            )
        return ct

    def period_ciphertexts(self, t: bytes) -> list:
        with self._lock:
            slot = self._by_period.get(bytes(t), {})
            return [slot[i] for i in sorted(slot)]

    def aggregate_period(self, t: bytes, *, allow_partial: bool = False):
        cts = self.period_ciphertexts(t)
        if self.scheme == WANG:
            if not allow_partial and len(cts) != self.n_parties:
                raise IncompletePeriodError(
                    f"period {t!r} has {len(cts)}/{self.n_parties} ciphertexts"
                )
            return wang_aggregate(self.params, cts)
        return aggregate(
            self.scheme, self.params, self.secrets.shares[0], cts, self.n_parties,
            allow_partial=allow_partial,
        )

    def decrypt_period(self, t: bytes, bound: int, *, allow_partial: bool = False) -> int:
        V = self.aggregate_period(t, allow_partial=allow_partial)
        if self.scheme == WANG:
            return wang_decrypt_sum(self.params, self.wang_keys.d, V, bound)
        return aggre_dec(
            self.scheme, self.params, self.secrets.recipient_sk, V, bound
        )

    def transcript_lines(self) -> list[str]:
        header = json.dumps({"format": TRANSCRIPT_FORMAT}, sort_keys=True)
        with self._lock:
            records = list(self._records)
        return [header] + [json.dumps(rec, sort_keys=True) for rec in records]


def read_transcript(lines: list[str], params: GroupParams) -> list[NoisyCiphertext]:
    """Reconstruct the ciphertext stream every role can observe on the wire.

    Keys never appear in transcripts; attack routines take the attacking
    role's own key material as explicit arguments.
    """
    if not lines:
        raise ValueError("empty transcript")
    header = json.loads(lines[0])
    if header.get("format") != TRANSCRIPT_FORMAT:
        raise ValueError(f"unsupported transcript format {header.get('format')!r}")
    out = []
    for line in lines[1:]:
        rec = json.loads(line)
        scheme = rec["scheme"]
        period = bytes.fromhex(rec["period"])
        if scheme == WANG:
            x_text, _, y_text = rec["body"].partition("|")
            body = WangCiphertext(body_from_text(x_text), body_from_text(y_text))
        else:
            body = body_from_text(rec["body"])
        out.append(NoisyCiphertext(scheme, rec["participant"], period, body))
    return out
