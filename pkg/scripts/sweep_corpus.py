"""Compare every construction against the machine oracle over the corpus.

    python scripts/sweep_corpus.py [--max-steps 40] [--workers 1]
"""
import argparse
import time
from pathlib import Path

from tpvsim.constructions import compare, round_trip
from tpvsim.dsl import parse_machine, parse_system
from tpvsim.search import SearchBudget

CORPUS = Path(__file__).resolve().parent.parent / "corpus"
GENERAL = ["p1", "halt0", "branch2", "transfer", "trap", "doubling"]
BLIND = ["pairs", "bsub", "babort"]
# the polarized construction branches widely, so it gets a smaller budget
PLAN = [("thm1", GENERAL, 1.0), ("thm2", BLIND, 1.0), ("thm5", GENERAL, 0.3)]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-steps", type=int, default=40)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    print(f"{'construction':12} {'machine':10} {'N':>3} {'ok':>5} {'results':>7} {'states':>8} {'secs':>6}")
    failures = 0
    for construction, names, scale in PLAN:
        n = max(1, int(args.max_steps * scale))
        for name in names:
            p = parse_machine((CORPUS / "machines" / f"{name}.rm").read_text())
            t = time.perf_counter()
            c = compare(construction, p, SearchBudget(n, n), workers=args.workers)
            failures += not c.ok
            print(f"{construction:12} {name:10} {n:3d} {str(c.ok):>5} {len(c.system.vectors):7d} "
                  f"{c.system.diagnostics['states_visited']:8d} {time.perf_counter() - t:6.2f}")
    for f in sorted((CORPUS / "systems").glob("*.tpv")):
        s_res, m_res = round_trip(parse_system(f.read_text()), SearchBudget(60, 12))
        ok = s_res.as_set() == m_res.as_set() and s_res.complete and m_res.complete
        failures += not ok
        print(f"{'thm4':12} {f.stem:10} {'':3} {str(ok):>5} {len(s_res.vectors):7d} "
              f"{m_res.diagnostics['states_visited']:8d}")
    raise SystemExit(1 if failures else 0)


if __name__ == "__main__":
    main()
