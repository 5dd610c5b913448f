"""Tabulate RF(b) on (1.24, 2] and optionally plot it.

    python scripts/rf_curve.py --steps 760 --out rf_curve.csv --plot rf_curve.png
"""

import argparse
from dataclasses import asdict, dataclass

from capcalc.cli import emit_rf_curve, write_rf_curve
from capcalc.exactnum import parse_rational


@dataclass
class CurveConfig:
    b_from: str = "31/25"
    b_to: str = "2"
    steps: int = 760
    out: str = "rf_curve.csv"
    plot: str = ""


def main(cfg: CurveConfig):
    rows = emit_rf_curve(parse_rational(cfg.b_from), parse_rational(cfg.b_to), cfg.steps)
    fmt = "json" if cfg.out.endswith(".json") else "csv"
    with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
        fh.write(write_rf_curve(rows, fmt))
    known = [r for r in rows if r.rf is not None]
    print(f"{len(rows)} rows ({len(rows) - len(known)} unknown) -> {cfg.out}")
    print(f"endpoint b = 2: RF = {float(rows[-1].rf):.9f}")
    if cfg.plot:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        fig, ax = plt.subplots(figsize=(7, 4))
        # Break the line at each interval change so the jumps stay visible.
        segment = []
        for r in rows:
            if segment and (r.rf is None or r.n != segment[-1].n):
                ax.plot([float(s.b) for s in segment], [float(s.rf) for s in segment], "k-", lw=1)
                segment = []
            if r.rf is not None:
                segment.append(r)
        if segment:
            ax.plot([float(s.b) for s in segment], [float(s.rf) for s in segment], "k-", lw=1)
        ax.set_xlabel("b")
        ax.set_ylabel("RF(b)")
        fig.tight_layout()
        fig.savefig(cfg.plot, dpi=150)
        print(f"plot -> {cfg.plot}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, value in asdict(CurveConfig()).items():
        p.add_argument("--" + name.replace("_", "-"), type=type(value), default=value)
    main(CurveConfig(**vars(p.parse_args())))
