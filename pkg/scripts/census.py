"""Enumerate dihedral-like loops by order and cross-check the catalog against brute force.

For each even order up to ``--max-order`` this prints the number of parameter
triples, the number of isomorphism classes predicted by conjugacy of alpha,
the number found by pairwise table search, and the elapsed time.

    python scripts/census.py --max-order 24
"""

from __future__ import annotations

import argparse
import time
from dataclasses import dataclass

from dihlike.dihloop import dih_construct, dihedral_like_params
from dihlike.isoaut import catalog
from dihlike.loopcore import find_isomorphism


@dataclass(frozen=True)
class CensusConfig:
    max_order: int = 24
    brute: bool = True


def brute_classes(order: int) -> int:
    reps = []
    for P in dihedral_like_params(order):
        Q = dih_construct(P)
        if all(find_isomorphism(Q, R) is None for R in reps):
            reps.append(Q)
    return len(reps)


def run(cfg: CensusConfig) -> bool:
    entries = catalog(cfg.max_order)
    ok = True
    print(f"{'order':>5} {'triples':>8} {'classes':>8} {'brute':>6} {'secs':>7}")
    for order in range(2, cfg.max_order + 1, 2):
        t0 = time.perf_counter()
        triples = len(dihedral_like_params(order))
        predicted = sum(1 for e in entries if e.order == order)
        found = brute_classes(order) if cfg.brute else None
        ok = ok and (found is None or found == predicted)
        shown = "-" if found is None else str(found)
        print(f"{order:>5} {triples:>8} {predicted:>8} {shown:>6} {time.perf_counter() - t0:>7.2f}")
    print(f"total classes: {len(entries)}; {'agree' if ok else 'MISMATCH'}")
    return ok


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--max-order", type=int, default=CensusConfig.max_order)
    p.add_argument("--no-brute", action="store_true", help="skip the pairwise table search")
    a = p.parse_args()
    raise SystemExit(0 if run(CensusConfig(a.max_order, not a.no_brute)) else 1)


if __name__ == "__main__":
    main()
