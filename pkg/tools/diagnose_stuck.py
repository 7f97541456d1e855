import argparse
import os
import sys

import numpy as np

# ensure project root on path
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from bounds_layer.embedder.cycle_embedder import EmbedConfig, StuckReport, greedy_blue_embed, host_size, stuck_diagnostics
from core.coloring import EdgeColoring
from core.graph import random_tree


def adversarial_host(N, rng, red_density):
    # red edges drawn independently; dense red makes the greedy stall early
    mat = np.where(rng.random((N, N)) < red_density, 0, 1)
    return EdgeColoring(N, 2, mat)


def run_instance(m, t, N, seed, red_density):
    rng = np.random.default_rng(seed)
    g = random_tree(m, rng)
    c = adversarial_host(N, rng, red_density)
    config = EmbedConfig.from_target(g, t, phase1=False, prune=False)
    res = greedy_blue_embed(c, g, config)
    if not isinstance(res, StuckReport):
        return None
    return res, stuck_diagnostics(res, c, config)


if __name__ == '__main__':
    parser = argparse.ArgumentParser(description='Run the greedy embedder on dense red hosts and tabulate the stuck-state checks')
    parser.add_argument('--m', type=int, default=16)
    parser.add_argument('--t', type=int, default=2)
    parser.add_argument('--N', type=int, default=None, help='host side (default: a quarter of host_size(m, t))')
    parser.add_argument('--instances', type=int, default=20)
    parser.add_argument('--red-density', type=float, default=0.9)
    args = parser.parse_args()

    N = args.N or max(2, host_size(args.m, args.t) // 4)
    print(f'Target: random trees with m={args.m}; host K_{N},{N}; red density {args.red_density}')

    tally = {}
    stuck = 0
    for seed in range(args.instances):
        out = run_instance(args.m, args.t, N, seed, args.red_density)
        if out is None:
            print(f'[DIAG] seed {seed}: embedded')
            continue
        rep, diag = out
        stuck += 1
        print(f"[DIAG] seed {seed}: stuck at r={rep.r} |W'|={len(rep.W_prime)} D={rep.D} case={diag['case']} failing={diag['failing_premises']}")
        for name in diag['failing_premises']:
            tally[name] = tally.get(name, 0) + 1
        if not diag['checks']['observation']['holds']:
            print(f'  observation violated at {diag["checks"]["observation"]["violators"][:5]}')

    print(f'\n{stuck}/{args.instances} instances stuck')
    for name, count in sorted(tally.items()):
        print(f'  {name}: failed in {count} stuck states')
    print('\nDiagnostics complete.')
