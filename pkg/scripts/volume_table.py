#!/usr/bin/env python3
"""Tabulate certified counts and volumes for a few projective sets."""

import argparse

from padicgeo.countvol import AlgebraicSet, CountConfig, estimate_volume
from padicgeo.errors import NotStabilized

FIXTURES = [
    ("conic x0x2=x1^2", ["x0*x2 - x1^2"], 1, 2),
    ("line x2=0", ["x2"], 1, 1),
    ("two lines x0x1=0", ["x0*x1"], 1, 2),
    ("two points", ["x2", "x0*x1"], 0, 2),
    ("nodal cubic", ["x2*x1^2 - x0^3 - x0^2*x2"], 1, 3),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--primes", type=int, nargs="*", default=[3, 5])
    ap.add_argument("--max-level", type=int, default=2)
    args = ap.parse_args()

    for p in args.primes:
        print(f"\np = {p}")
        for name, gens, dim, degree in FIXTURES:
            xset = AlgebraicSet.from_strings(2, gens, dim=dim, degree=degree)
            try:
                est = estimate_volume(xset, p, args.max_level, CountConfig(extra_levels=4))
                note = f"stabilized at m0 = {est.stabilization_level}, vol = {est.value}"
            except NotStabilized as exc:
                est = exc.estimate
                lo, hi = est.interval
                note = f"open interval [{lo}, {hi}]"
            seq = ", ".join(
                f"N_{m}={lo}" if lo == hi else f"N_{m} in [{lo},{hi}]"
                for m, lo, hi in est.sequence
            )
            print(f"  {name:<22} {seq:<44} {note}")


if __name__ == "__main__":
    main()
