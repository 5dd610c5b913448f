"""Volume-filling check on a grid of (a, b) with a >= 9, plus a control below RF.

    python scripts/verify_grid.py --a-den 4 --b-den 4 --out verify.json
"""

import argparse
import json
from dataclasses import asdict, dataclass
from fractions import Fraction

from capcalc.obstruction import rf
from capcalc.reduction import Outcome, reduce_at_point, verify_volume_fills


@dataclass
class GridConfig:
    a_lo: int = 9
    a_hi: int = 16
    a_den: int = 4
    b_den: int = 4
    max_moves: int = 50
    jobs: int = 1
    out: str = "verify.json"


def main(cfg: GridConfig):
    a_samples = [Fraction(cfg.a_lo) + Fraction(i, cfg.a_den) for i in range((cfg.a_hi - cfg.a_lo) * cfg.a_den + 1)]
    b_samples = [1 + Fraction(j, cfg.b_den) for j in range(cfg.b_den + 1)]
    rep = verify_volume_fills(a_samples, b_samples, cfg.max_moves, cfg.jobs)
    with open(cfg.out, "w", encoding="utf-8") as fh:
        json.dump(rep.to_dict(), fh, indent=1)
    print(f"{len(rep.points)} points, {len(rep.failures)} failures, max moves {rep.max_moves}")

    b, a = Fraction(8, 5), Fraction(8001, 1000)
    ctrl = reduce_at_point(a, b)
    print(f"control a={a} < RF({b})={float(rf(b)):.6f}: {ctrl.outcome.value} after {ctrl.moves} moves")
    return 0 if rep.all_success and ctrl.outcome is not Outcome.SUCCESS else 2


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, value in asdict(GridConfig()).items():
        p.add_argument("--" + name.replace("_", "-"), type=type(value), default=value)
    raise SystemExit(main(GridConfig(**vars(p.parse_args()))))
