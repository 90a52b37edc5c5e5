"""Sextuple bookkeeping: exact cancellations and the two classifications.

A sextuple is two blocks of three on-shell frequencies.  The signed block
sums (of squared moduli and of transverse components) are computed with
compensated summation, so permuted blocks cancel to the last bit.  On top
of that sit two trichotomies: paired / transversal / neither, and
robust / narrow / neither.
"""
import collections

from decolab import phase
from decolab.scale import derive

SEED = 7
S = derive(256.0)


def exact_cancellations():
    print("paired blocks, 500 draws: worst |mu6| and |grad| "
          "(both must be exactly zero):")
    worst_mu = worst_g = 0.0
    for rep in range(500):
        s = phase.sample_sextuple(S, SEED, rep, "paired")
        worst_mu = max(worst_mu, phase.mu6(s))
        g = phase.grad_xprime(s)
        worst_g = max(worst_g, abs(g[0]), abs(g[1]))
    print(f"  worst mu6 = {worst_mu!r}, worst gradient component = {worst_g!r}")


def coverage_table():
    print("\nclassification coverage, 200 draws per sampler kind:")
    for kind in ("generic", "paired", "perturbed", "clustered5"):
        tp = collections.Counter()
        rn = collections.Counter()
        baskets = collections.Counter()
        for rep in range(200):
            s = phase.sample_sextuple(S, SEED, rep, kind)
            baskets[phase.classify_basket(s)] += 1
            tp[phase.tp_dichotomy(s).label] += 1
            rn[phase.rn_classify(s, None).label] += 1
        print(f"  {kind:10s} baskets {dict(baskets)}")
        print(f"  {'':10s} pairing  {dict(tp)}")
        print(f"  {'':10s} density  {dict(rn)}")


def witness_example():
    s = phase.sample_sextuple(S, SEED, 0, "paired")
    res = phase.tp_dichotomy(s)
    print(f"\none paired draw in detail: label {res.label!r}, witness "
          f"{res.witness} (block-2 partner of each block-1 index)")
    print(f"  thresholds: angular {res.angular_threshold:.2e}, radial "
          f"{res.radial_threshold:.2e}, gradient {res.grad_threshold:.2e}")
    sizes = phase.single_linkage_sizes(s.directions(), S.alpha)
    print(f"  alpha-linkage cluster sizes of its six directions: {sizes}")


def main():
    exact_cancellations()
    coverage_table()
    witness_example()


if __name__ == "__main__":
    main()
