#!/usr/bin/env python3
"""Print the adversary-vs-scheme advantage matrix from seeded AO-game runs.

Usage: python scripts/advantage_table.py [trials] [seed]
The two protocol breaks show advantage 1.0; everything else sits at chance.
"""

import sys
import time

from bgnlab.algebra import gen_params
from bgnlab.ao_game import GameConfig, builtin_adversaries, run_game
from bgnlab.schemes import ALL_SCHEMES


def main():
    trials = int(sys.argv[1]) if len(sys.argv) > 1 else 100
    seed = sys.argv[2] if len(sys.argv) > 2 else "table"
    params = gen_params(32, 32, f"{seed}/params")
    adversaries = sorted(builtin_adversaries())
    col = max(len(s) for s in ALL_SCHEMES) + 2

    print(f"advantage over {trials} trials per cell (seeded, reproducible)\n")
    print(" " * 20 + "".join(s.rjust(col) for s in ALL_SCHEMES))
    t0 = time.time()
    for adv in adversaries:
        cells = []
        for scheme in ALL_SCHEMES:
            result = run_game(GameConfig(
                scheme=scheme, adversary=adv, trials=trials,
                seed=f"{seed}/{adv}/{scheme}", params=params,
            ))
            cells.append(f"{result.advantage:.2f}".rjust(col))
        print(adv.ljust(20) + "".join(cells))
    print(f"\n({time.time() - t0:.1f}s)")


if __name__ == "__main__":
    main()
