"""Report automorphism, isomorphism and inner-mapping data for the named instances.

Each instance is checked by the closed forms and by table-level brute force;
the script exits non-zero if any pair of numbers disagrees.

    python scripts/named_examples.py
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass, field

from dihlike.abelian import parse_group, parse_morphism
from dihlike.dihloop import DihParams, dih_construct
from dihlike.isoaut import aut_report, aut_structure_report, inn_structure, iso_report
from dihlike.loopcore import inn_group, lr_inn_group


@dataclass(frozen=True)
class Instance:
    m: int
    group: str
    alpha: str
    beta: str | None = None

    def params(self, alpha: str | None = None) -> DihParams:
        G = parse_group(self.group)
        return DihParams(self.m, G, parse_morphism(alpha or self.alpha, G))


@dataclass(frozen=True)
class ExamplesConfig:
    instances: tuple[Instance, ...] = field(
        default_factory=lambda: (
            Instance(12, "Z4", "(3)"),
            Instance(6, "Z2xZ4", "(1,2);(0,1)", beta="(1,2);(0,3)"),
            Instance(2, "Z5", "(4)"),
            Instance(2, "Z5", "id"),
        )
    )


def inspect(inst: Instance) -> tuple[dict, bool]:
    P = inst.params()
    Q = dih_construct(P)
    rep = aut_report(P)
    s = inn_structure(P.m, P.G, P.alpha)
    st = aut_structure_report(P.m, P.G, P.alpha)
    out = {
        "loop": str(P),
        "aut": [rep["aut_order_formula"], rep["par_count"], rep["aut_order_brute"]],
        "inn": [inn_group(Q).order, len(s.full_inner)],
        "inn_lr": [lr_inn_group(Q).order, len(s.left_inner)],
        "structure": [st.case, st.verified],
    }
    ok = len(set(out["aut"])) == 1 and len(set(out["inn"])) == 1 and len(set(out["inn_lr"])) == 1
    ok = ok and rep["witnesses_verified"] and st.verified is not False
    if inst.beta is not None:
        iso = iso_report(P, inst.params(inst.beta))
        out["iso"] = [iso["par_count"], iso["iso_count_brute"]]
        ok = ok and iso["witnesses_verified"] and out["iso"][0] == out["iso"][1]
    return out, ok


def main() -> None:
    all_ok = True
    for inst in ExamplesConfig().instances:
        out, ok = inspect(inst)
        all_ok = all_ok and ok
        print(json.dumps(out), "ok" if ok else "MISMATCH")
    sys.exit(0 if all_ok else 1)


if __name__ == "__main__":
    main()
