#!/usr/bin/env python3
"""Desk-scale coincidence experiment: ideal singlet versus damped apparatus.

Runs the optimal coplanar quadruple at several damping levels and compares
the recovered |S| with the ideal 2*sqrt(2) and the historical lab window.
"""
import argparse
import math

from belllab import (
    ExperimentConfig,
    MeasurementSettings,
    canonical_state,
    estimate_S,
    make_unit_vector,
    misalignment_for_damping,
)

INV_SQRT2 = 1.0 / math.sqrt(2.0)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--pairs", type=int, default=2_000_000, help="pairs per orientation pair")
    parser.add_argument("--seed", type=int, default=2026)
    args = parser.parse_args()

    state = canonical_state(INV_SQRT2, -INV_SQRT2)
    settings = MeasurementSettings(
        a=make_unit_vector(0.0, 0.0),
        b=make_unit_vector(math.pi / 4, 0.0),
        a_prime=make_unit_vector(math.pi / 2, 0.0),
        b_prime=make_unit_vector(3 * math.pi / 4, 0.0),
    )

    print(f"pairs per setting: {args.pairs}, seed: {args.seed}")
    print(f"ideal prediction: |S| = 2*sqrt(2) = {2 * math.sqrt(2):.6f}")
    print(f"{'damping':>8} {'sigma':>8} {'|S|':>10} {'stderr':>9} {'|S|/2sqrt2':>11}")
    for damping in (1.0, 0.99, 0.97, 0.955, 0.90, 0.80):
        sigma = misalignment_for_damping(damping)
        est = estimate_S(
            ExperimentConfig(
                state=state,
                settings=settings,
                n_pairs=args.pairs,
                misalignment_sigma=sigma,
                seed=args.seed,
            )
        )
        ratio = abs(est.s_value) / (2 * math.sqrt(2))
        print(
            f"{damping:8.3f} {sigma:8.4f} {abs(est.s_value):10.5f} "
            f"{est.std_error:9.5f} {ratio:11.5f}"
        )
    print("\nthe damping 0.955 row lands in the 2.70 +- 0.05 window of the")
    print("historical two-channel-polarizer measurement")


if __name__ == "__main__":
    main()
