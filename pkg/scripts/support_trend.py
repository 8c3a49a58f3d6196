"""Row-support statistics of LP optima on quantized Gaussians as n grows.

    python3 scripts/support_trend.py --cost neg-abs --ns 50 100 200
"""
import argparse
import sys

from mot.costs import parse_cost
from mot.lp import solve_martingale, support_profile
from mot.measures import gaussian_quantize


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--cost", default="neg-abs", help="neg-abs, pow:4, exp, ...")
    ap.add_argument("--ns", type=int, nargs="+", default=[50, 100, 200])
    ap.add_argument("--nu-atoms", type=int, default=6)
    ap.add_argument("--sd-mu", type=float, default=1.0)
    ap.add_argument("--sd-nu", type=float, default=2.0)
    args = ap.parse_args(argv)

    print(f"{'n':>5} {'value':>12} {'mass<=2':>8} {'mass<=3':>8} {'max atoms':>9}")
    for n in args.ns:
        mu = gaussian_quantize(0.0, args.sd_mu, n)
        nu = gaussian_quantize(0.0, args.sd_nu, args.nu_atoms)
        sol = solve_martingale(mu, nu, parse_cost(args.cost, mu, nu))
        prof = support_profile(sol.plan)
        print(f"{n:>5} {sol.value:>12.6f} {prof.mass_fraction(2):>8.4f} {prof.mass_fraction(3):>8.4f} {max(prof.counts):>9}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
