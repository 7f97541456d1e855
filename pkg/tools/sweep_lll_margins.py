import argparse
import os
import sys

# ensure project root on path
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from bounds_layer.lll.parameters import check_constants, derive_params, geometric_range, implied_host_side, margin_sweep


def first_verified(rows):
    # smallest swept N where both margins are positive
    for row in rows:
        if row['verified']:
            return row['N']
    return None


def sweep(p, q, c1, c2, C4, lo, hi, factor, original=False):
    gate = check_constants(c1, c2, C4)
    print(f"Constants c1={c1} c2={c2} C4={C4}: 2*c2 + C4 = {gate['lhs']} vs c1*c2^2/2 = {gate['rhs']} -> ok={gate['ok']}")
    rows = margin_sweep(p, q, c1, c2, C4, geometric_range(lo, hi, factor), original_conditions=original)
    for row in rows:
        print(f"N={row['N']:.3e}: status={row['status']} cond_a={row['cond_a_margin']} cond_b={row['cond_b_margin']} verified={row['verified']}")
    return rows


if __name__ == '__main__':
    parser = argparse.ArgumentParser(description='Sweep Local Lemma condition margins over a geometric range of N')
    parser.add_argument('--p', type=int, default=4)
    parser.add_argument('--q', type=int, default=4)
    parser.add_argument('--c1', type=float, default=10.0)
    parser.add_argument('--c2', type=float, default=4.0)
    parser.add_argument('--C4', type=float, default=33.0)
    parser.add_argument('--lo', type=int, default=10**6)
    parser.add_argument('--hi', type=int, default=10**14)
    parser.add_argument('--factor', type=float, default=100.0)
    parser.add_argument('--original', action='store_true', help='evaluate the unsimplified conditions')
    args = parser.parse_args()

    rows = sweep(args.p, args.q, args.c1, args.c2, args.C4, args.lo, args.hi, args.factor, args.original)
    N0 = first_verified(rows)
    if N0 is None:
        print('\nNo swept N verifies both conditions')
    else:
        print(f'\nFirst verified N = {N0:.3e}')
        n = derive_params(args.p, args.q, args.c1, args.c2, args.C4, N0).n_int
        print(f"At N={N0:.3e}: n = {n}, so br(G, K_{{n,n}}) > {implied_host_side(args.p, args.q, n, args.c2)}")
