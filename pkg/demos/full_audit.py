"""Run the entire experiment registry and print one verdict line each.

This is the whole laboratory in one pass: every registered experiment at
its default scale and sample count, with PASS / FAIL / OBSERVATIONAL
verdicts and wall times.  Exit status is nonzero if anything fails, so the
script doubles as a smoke gate.
"""
import sys
import time

from decolab import lab


def main():
    t0 = time.perf_counter()
    failures = 0
    for name in lab.experiment_names():
        rep = lab.run_experiment(name)
        for v in rep.verdicts:
            mark = {"PASS": "+", "FAIL": "!", "OBSERVATIONAL": "~"}[v.status]
            detail = f"  ({v.detail})" if v.detail else ""
            print(f" {mark} {name:22s} {v.name:32s} {v.status}{detail}")
            failures += v.status == lab.FAIL
    print(f"\n{len(lab.experiment_names())} experiments in "
          f"{time.perf_counter() - t0:.1f} s, {failures} failures")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
