"""Desk-scale cryptanalysis lab for BGN-based private data aggregation.

Composite-order pairing algebra, the BGN cryptosystem, five aggregation
schemes, the pairing-based privacy attacks that break the curve-group
variants, and an aggregator-oblivious game harness that measures each
attack's advantage.  Parameters are intentionally tiny: nothing here
protects real data.
"""

from .algebra import (
    GT_ONE,
    IDENTITY,
    CurvePoint,
    GroupParams,
    GtElement,
    dlog_bsgs,
    gen_params,
    hash_to_g,
    hash_to_gt,
    pairing,
    params_from_primes,
    params_from_text,
    params_to_text,
    point_add,
    scalar_mul,
    toy_params,
)
from .ao_game import GameConfig, GameResult, builtin_adversaries, run_game
from .attacks import (
    AttackVerdict,
    attack_fhl_known_message,
    attack_fixed_gt_attempt,
    attack_llwkr_equality,
    attack_shi_on_g,
    attack_wang_individual,
    solve_ddh_g,
)
from .bgn import (
    BgnCiphertext,
    BgnKeyPair,
    bgn_add,
    bgn_decrypt,
    bgn_encrypt,
    bgn_keypair,
    bgn_mult_once,
)
from .rng import DetRng
from .schemes import (
    ALL_SCHEMES,
    NoisyCiphertext,
    PartySecrets,
    ProtocolRun,
    WangCiphertext,
    WangKeys,
    aggre_dec,
    aggregate,
    noisy_enc,
    setup_shares,
    wang_aggregate,
    wang_decrypt_sum,
    wang_encrypt,
    wang_keygen,
)

__version__ = "0.1.0"
