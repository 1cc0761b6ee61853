"""Executable aggregator-oblivious indistinguishability game.

Per trial the challenger deals fresh shares, answers encryption and
compromise queries, and serves a single challenge: the adversary names a set
of uncompromised users, a period, and per-user message pairs; the challenger
flips b and returns ciphertexts of the b-side messages.  The adversary wins
by guessing b.  Advantage is estimated over many seeded trials, so a run is
exactly reproducible, and every oracle call is auditable.

Query discipline enforced by the challenger (violations abort the trial as
an adversary fault): one challenge per trial, challenge users must be and
stay uncompromised, and no encryption query may collide with a challenge
(participant, period) pair - the encrypt-once ledger covers both orders.

The compromise oracle accepts participant indices, 0 for the aggregator, and
"recipient" for the decryption-key holder; the aggregator-equals-recipient
wiring used by the fhl14 protocol is a config switch that makes compromising
the aggregator also reveal the decryption key.  Group parameters are
generated once per game (publicly known anyway); shares, randomness, and the
challenge bit are fresh per trial.

Trials are independent with disjoint rng streams derived from (seed, trial
index), so they could run in parallel; this driver keeps them serial and the
win counter is the only accumulated state.

The harness can only falsify security: a chance-level advantage here means
these particular strategies fail, not that a scheme is proven AO secure.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from .algebra import GroupParams, gen_params
from .attacks import (
    EQUAL,
    INAPPLICABLE,
    attack_fhl_known_message,
    attack_fixed_gt_attempt,
    attack_llwkr_equality,
    attack_shi_on_g,
)
from .bgn import DEFAULT_MESSAGE_BOUND
from .rng import DetRng, Seed
from .schemes import (
    ALL_SCHEMES,
    FHL14,
    WANG,
    EncryptOnceError,
    ProtocolRun,
    setup_shares,
    wang_keygen,
)

RECIPIENT = "recipient"


class AdversaryFaultError(RuntimeError):
    """The adversary broke the game's query discipline; the trial aborts."""


@dataclass(frozen=True)
class GameConfig:
    scheme: str
    adversary: str
    n_parties: int = 3
    trials: int = 100
    seed: Seed = 0
    message_bound: int = DEFAULT_MESSAGE_BOUND
    compromise_set: tuple | None = None  # None: whatever the strategy declares
    aggregator_holds_bgn_key: bool | None = None  # None: True only for fhl14
    params: GroupParams | None = None  # None: generate from seed


@dataclass(frozen=True)
class GameResult:
    scheme: str
    adversary: str
    trials: int
    wins: int
    faults: int
    advantage: float
    digests: tuple[str, ...]
    audits: tuple = ()


class GameOracle:
    """The adversary's view of one trial: public params plus the query API."""

    def __init__(self, scheme, params, run, secrets, wang_keys, allowed, wiring, rng):
        self.scheme = scheme
        self.params = params
        self.n_parties = run.n_parties
        self.message_bound = run.message_bound
        self._run = run
        self._secrets = secrets
        self._wang_keys = wang_keys
        self._allowed = allowed
        self._wiring = wiring
        self._rng = rng
        self._compromised: set = set()
        self._challenged: set[int] = set()
        self._challenge_done = False
        self.audit: list[str] = []
        self.challenge_log: list[dict] = []
        self.b: int | None = None

    def _fault(self, why: str):
        self.audit.append(f"fault: {why}")
        raise AdversaryFaultError(why)

    def encrypt(self, participant: int, t: bytes, m: int):
        t = bytes(t)
        self.audit.append(f"encrypt i={participant} t={t.hex()} m={m}")
        try:
            return self._run.encrypt(
                participant, t, m, self._rng.fork(b"enc/" + t + b"/%d" % participant)
            )
        except EncryptOnceError:
            self._fault(f"encryption query collides at ({participant}, {t!r})")

    def compromise(self, which):
        self.audit.append(f"compromise {which}")
        if which not in self._allowed:
            self._fault(f"compromise of {which!r} not allowed by config")
        if which in self._challenged:
            self._fault("cannot compromise a challenged user")
        self._compromised.add(which)
        if which == RECIPIENT:
            if self.scheme == WANG:
                return {"d": self._wang_keys.d}
            return {"q": self._secrets.recipient_sk}
        out = {} if self.scheme == WANG else {"s": self._secrets.shares[which]}
        if which == 0 and self._wiring and self.scheme != WANG:
            out["q"] = self._secrets.recipient_sk
        return out

    def challenge(self, users: list[int], t: bytes, pairs: list[tuple[int, int]]):
        t = bytes(t)
        self.audit.append(f"challenge users={list(users)} t={t.hex()} pairs={list(pairs)}")
        if self._challenge_done:
            self._fault("second challenge query")
        if len(users) != len(pairs) or not users:
            self._fault("malformed challenge")
        for i in users:
            if not 1 <= i <= self.n_parties:
                self._fault(f"challenge on non-user {i}")
            if i in self._compromised:
                self._fault(f"challenge on compromised user {i}")
        for m0, m1 in pairs:
            if not (0 <= m0 < self.message_bound and 0 <= m1 < self.message_bound):
                self._fault("challenge plaintext out of range")
        self._challenge_done = True
        self._challenged.update(users)
        self.b = self._rng.fork(b"challenge-bit").coin()
        out = []
        for i, (m0, m1) in zip(users, pairs):
            m = (m0, m1)[self.b]
            rng = self._rng.fork(b"challenge-enc/" + t + b"/%d" % i)
            try:
                ct = self._run.encrypt(i, t, m, rng)
            except EncryptOnceError:
                self._fault(f"challenge collides with encryption query at ({i}, {t!r})")
            self.challenge_log.append(
                {"user": i, "t": t.hex(), "m0": m0, "m1": m1, "m_used": m}
            )
            out.append(ct)
        self.audit.append(f"challenge answered b={self.b}")
        return out


# ---------------------------------------------------------------------------
# strategies


class NullAdversary:
    """Baseline: well-formed challenge, then a coin flip."""

    name = "null"
    needs_compromise: tuple = ()

    def play(self, oracle: GameOracle, rng: DetRng) -> int:
        m0 = rng.randbelow(min(1024, oracle.message_bound))
        m1 = (m0 + 1) % oracle.message_bound
        oracle.challenge([1], b"t-challenge", [(m0, m1)])
        return rng.coin()


class _KnownMessagePairAdversary:
    """Shared shape: learn one ciphertext of m0, challenge with (m0, m1),
    then decide with a plaintext-equality attack.  Falls back to a coin flip
    when the attack cannot run at all (wrong carrier, no usable key)."""

    needs_compromise: tuple = (RECIPIENT,)

    def decide(self, oracle, keys, known, probe):
        raise NotImplementedError

    def play(self, oracle: GameOracle, rng: DetRng) -> int:
        keys = (
            oracle.compromise(RECIPIENT) if RECIPIENT in self.needs_compromise else {}
        )
        bound = min(1024, oracle.message_bound)
        m0 = rng.randbelow(bound - 1)
        m1 = m0 + 1
        known_ct = oracle.encrypt(1, b"t-known", m0)
        chal = oracle.challenge([1], b"t-challenge", [(m0, m1)])[0]
        verdict = self.decide(oracle, keys, (known_ct, m0), chal)
        if verdict is None:
            return rng.coin()
        if verdict.outcome == EQUAL:
            return 0
        if verdict.outcome == INAPPLICABLE:
            if verdict.heuristic is not None:
                return 0 if verdict.heuristic == EQUAL else 1
            return rng.coin()
        return 1


class LlwkrEqualityAdversary(_KnownMessagePairAdversary):
    """Compromises the recipient and compares q-th powers; the llwkr19 blind
    is period-independent, so this decides b outright."""

    name = "llwkr-equality"

    def decide(self, oracle, keys, known, probe):
        if "q" not in keys:
            return None
        return attack_llwkr_equality(oracle.params, keys["q"], known[0], probe)


class FhlKnownMessageAdversary(_KnownMessagePairAdversary):
    """Compromises the recipient and runs the cross-period DDH-tuple test."""

    name = "fhl-known-message"

    def decide(self, oracle, keys, known, probe):
        if "q" not in keys:
            return None
        return attack_fhl_known_message(oracle.params, keys["q"], known, probe)


class ShiOnGAdversary(_KnownMessagePairAdversary):
    """Runs the keyless DDH-tuple test; only bites when ciphertexts sit in G."""

    name = "shi-on-g"
    needs_compromise: tuple = ()

    def decide(self, oracle, keys, known, probe):
        return attack_shi_on_g(oracle.params, known, probe)


class FixedGtAttemptAdversary(_KnownMessagePairAdversary):
    """Replays the fhl14 attack against the G_T scheme; reduced to the
    chance-level direct-equality heuristic."""

    name = "fixed-gt-attempt"

    def decide(self, oracle, keys, known, probe):
        if "q" not in keys:
            return None
        return attack_fixed_gt_attempt(oracle.params, keys["q"], known[0], probe)


def builtin_adversaries() -> dict[str, type]:
    """Catalog of named strategies usable in GameConfig.adversary."""
    classes = [
        NullAdversary,
        LlwkrEqualityAdversary,
        FhlKnownMessageAdversary,
        ShiOnGAdversary,
        FixedGtAttemptAdversary,
    ]
    return {cls.name: cls for cls in classes}


# ---------------------------------------------------------------------------
# the game loop


def run_game(config: GameConfig, *, keep_audit: bool = False) -> GameResult:
    if config.scheme not in ALL_SCHEMES:
        raise ValueError(f"unknown scheme {config.scheme!r}")
    catalog = builtin_adversaries()
    if config.adversary not in catalog:
        raise ValueError(f"unknown adversary {config.adversary!r}")
    strategy_cls = catalog[config.adversary]
    allowed = (
        config.compromise_set
        if config.compromise_set is not None
        else strategy_cls.needs_compromise
    )
    wiring = (
        config.aggregator_holds_bgn_key
        if config.aggregator_holds_bgn_key is not None
        else config.scheme == FHL14
    )
    root = DetRng(config.seed, b"bgnlab/ao-game")
    params = config.params or gen_params(32, 32, root.fork(b"params").randbytes(16))

    wins = faults = 0
    digests = []
    audits = []
    for k in range(config.trials):
        trial_rng = root.fork(b"trial/%d" % k)
        challenger_rng = trial_rng.fork(b"challenger")
        adversary_rng = trial_rng.fork(b"adversary")
        if config.scheme == WANG:
            secrets = None
            wang_keys = wang_keygen(params, b"esp", challenger_rng.fork(b"keys"))
        else:
            secrets = setup_shares(
                config.n_parties, params, challenger_rng.fork(b"shares")
            )
            wang_keys = None
        run = ProtocolRun(
            config.scheme, params, secrets, config.n_parties,
            wang_keys=wang_keys, message_bound=config.message_bound,
        )
        oracle = GameOracle(
            config.scheme, params, run, secrets, wang_keys,
            tuple(allowed), wiring, challenger_rng,
        )
        try:
            guess = strategy_cls().play(oracle, adversary_rng)
            if oracle.b is None:
                raise AdversaryFaultError("adversary finished without a challenge")
            oracle.audit.append(f"guess {guess}")
            if guess == oracle.b:
                wins += 1
        except AdversaryFaultError:
            faults += 1
        digests.append(
            hashlib.sha256(json.dumps(oracle.audit).encode()).hexdigest()[:16]
        )
        if keep_audit:
            # wire traffic in the schemes transcript format, then oracle calls
            lines = ["transcript: " + ln for ln in run.transcript_lines()]
            audits.append(tuple(lines + oracle.audit))

    advantage = abs(wins / config.trials - 0.5) * 2
    return GameResult(
        scheme=config.scheme,
        adversary=config.adversary,
        trials=config.trials,
        wins=wins,
        faults=faults,
        advantage=advantage,
        digests=tuple(digests),
        audits=tuple(audits),
    )
