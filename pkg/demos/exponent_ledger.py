"""Walk through the exact-rational exponent ledger.

Every contribution to the audited balance is a (lambda-exponent, D-exponent)
pair of fractions; this script prints the block tables, re-derives each
frozen checkpoint, and shows how the composed kernel bound and the narrow
cascade are assembled step by step.  Nothing here is floating point.
"""
from fractions import Fraction

from decolab import ledger
from decolab.scale import effective_lambda_exponent


def show_scenarios():
    for name, sc in ledger.scenarios().items():
        lam, d = ledger.sum_exponents(sc)
        eff = effective_lambda_exponent(lam, d)
        print(f"\nscenario {name!r} (driving: {sc.driving})")
        for b in sc.blocks:
            print(f"  {b.name:36s} lam^{str(b.lam_exp):>8s}  D^{b.d_exp}")
        print(f"  total: lam^{lam} * D^{d}  =  lam^{eff} effectively")


def show_checkpoints():
    rows = ledger.checkpoint_table()
    bad = [r for r in rows if not r.match]
    print(f"\n{len(rows)} checkpoints re-derived, {len(bad)} mismatches")
    for r in rows:
        mark = "ok " if r.match else "BAD"
        print(f"  [{mark}] {r.name:34s} {str(r.derived_lam):>10s} "
              f"{'' if r.derived_d is None else str(r.derived_d):>6s}")


def show_kernel_composition():
    k = ledger.kernel_derivation(6, 6)
    print("\nkernel bound, composed from counted integrations by parts:")
    for label, lam, d in k.steps:
        print(f"  {label:16s} lam^{str(lam):>6s}  D^{d}")
    print(f"  subtotal before the squared-operator refinement: "
          f"lam^{k.schur_raw_lam} * D^{k.schur_raw_d}")
    print(f"  final: lam^{k.lam_exp} * D^{k.d_exp}")


def show_narrow_cascade():
    n = ledger.narrow_derivation(2)
    print("\ntwo-step radius cascade:")
    print(f"  radius exponents: {[str(q) for q in n.radius_exponents]}")
    print(f"  local total {n.local_exp}, global share {n.global_exp}")
    print(f"  angular-window logs (must be positive): "
          f"{[str(g) for g in n.angular_logs]}")


def main():
    show_scenarios()
    show_checkpoints()
    show_kernel_composition()
    show_narrow_cascade()
    spare = {k: str(v) for k, v in ledger.UNUSED_EXPONENTS.items()}
    print(f"\nrecorded but never summed: {spare}")
    print(f"policy: {ledger.EPSILON_POLICY}")
    assert all(isinstance(v, Fraction)
               for _, v in ledger.UNUSED_EXPONENTS.items())


if __name__ == "__main__":
    main()
