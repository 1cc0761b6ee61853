#!/usr/bin/env python3
"""Walk through every attack once and print what each role learns.

Usage: python scripts/demo_breaks.py [seed]
"""

import sys

from bgnlab.algebra import gen_params, scalar_mul
from bgnlab.attacks import (
    attack_fhl_known_message,
    attack_fixed_gt_attempt,
    attack_llwkr_equality,
    attack_shi_on_g,
    attack_wang_individual,
    solve_ddh_g,
)
from bgnlab.rng import DetRng
from bgnlab.schemes import (
    FHL14,
    FIXED_GT,
    LLWKR19,
    SHI_G,
    noisy_enc,
    setup_shares,
    wang_encrypt,
    wang_keygen,
)


def show(title, verdict):
    print(f"\n== {title}")
    print(f"   outcome: {verdict.outcome}"
          + (f" (plaintext {verdict.plaintext})" if verdict.plaintext is not None else "")
          + (f" [heuristic {verdict.heuristic}]" if verdict.heuristic else ""))
    for line in verdict.evidence:
        print(f"   | {line}")
    if verdict.reason:
        print(f"   reason: {verdict.reason}")


def main():
    seed = sys.argv[1] if len(sys.argv) > 1 else "demo"
    rng = DetRng(seed)
    params = gen_params(32, 32, rng.fork("params").randbytes(16))
    q = params.q_sub
    secrets = setup_shares(3, params, rng.fork("shares"))
    s = secrets.shares[1]
    print(f"group: |G| = {params.n_ord} = {params.p_sub} * {params.q_sub}, "
          f"field {params.field_mod.bit_length()} bits")

    a, b = 12345, 67890
    tuple_ok = solve_ddh_g(
        scalar_mul(a, params.g, params), scalar_mul(b, params.g, params),
        scalar_mul(a * b, params.g, params), params,
    )
    print(f"\n== DDH on G is easy: pairing decides (g^a, g^b, g^ab) -> {tuple_ok}")

    keys = wang_keygen(params, b"esp", rng.fork("wang"))
    ct = wang_encrypt(params, keys.W, 1337, rng.fork("wang-enc"))
    show("wang: decryptor reads an individual value",
         attack_wang_individual(params, keys.d, ct, 1 << 16))

    c1 = noisy_enc(LLWKR19, params, s, 1, b"monday", 60, rng.fork("l1"))
    c2 = noisy_enc(LLWKR19, params, s, 1, b"tuesday", 60, rng.fork("l2"))
    show("llwkr19: recipient compares q-th powers across days (same reading)",
         attack_llwkr_equality(params, q, c1, c2))

    k1 = noisy_enc(FHL14, params, s, 1, b"monday", 60, rng.fork("f1"))
    k2 = noisy_enc(FHL14, params, s, 1, b"tuesday", 61, rng.fork("f2"))
    show("fhl14: recipient with one known reading probes another day (differs)",
         attack_fhl_known_message(params, q, (k1, 60), k2))

    g1 = noisy_enc(SHI_G, params, s, 1, b"monday", 60, rng.fork("g1"))
    g2 = noisy_enc(SHI_G, params, s, 1, b"tuesday", 60, rng.fork("g2"))
    show("blinding naively on G: anyone replays the same test without keys",
         attack_shi_on_g(params, (g1, 60), g2))

    x1 = noisy_enc(FIXED_GT, params, s, 1, b"monday", 60, rng.fork("x1"))
    x2 = noisy_enc(FIXED_GT, params, s, 1, b"tuesday", 60, rng.fork("x2"))
    show("fixed-gt: the same attack has nothing to pair with",
         attack_fixed_gt_attempt(params, q, x1, x2))


if __name__ == "__main__":
    main()
