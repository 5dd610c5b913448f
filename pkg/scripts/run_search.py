"""Run the center search and write the JSON certificate.

    python scripts/run_search.py --q-max 11 --e-max 40 --jobs 4 --out search.json
"""

import argparse
import json
import logging
import os
import time
from dataclasses import asdict, dataclass
from fractions import Fraction

from capcalc.exactnum import format_rational
from capcalc.search import SearchConfig, certify_no_obstruction


@dataclass
class RunConfig:
    q_max: int = 11
    e_max: int = 40
    jobs: int = int(os.environ.get("CAPCALC_JOBS", "1"))
    checkpoint: str | None = "search.ckpt.json"
    out: str = "search.json"


def main(cfg: RunConfig):
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(message)s")
    log = logging.getLogger("run_search")
    log.info("config %s", asdict(cfg))

    def progress(done: int, total: int, a: Fraction):
        log.info("%3d/%d  a = %s", done, total, format_rational(a))

    t0 = time.perf_counter()
    report = certify_no_obstruction(
        SearchConfig(q_max=cfg.q_max, e_max=cfg.e_max), progress, cfg.jobs, cfg.checkpoint
    )
    with open(cfg.out, "w", encoding="utf-8") as fh:
        json.dump(report.to_dict(), fh, indent=1)
    log.info(
        "%d centers, %d pairs, %d tails, %d obstructive, %.1fs -> %s",
        len(report.centers_checked),
        report.pairs_checked,
        report.classes_generated,
        len(report.obstructive_found),
        time.perf_counter() - t0,
        cfg.out,
    )
    if cfg.checkpoint and os.path.exists(cfg.checkpoint):
        os.remove(cfg.checkpoint)
    return 0 if report.certified else 2


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    defaults = RunConfig()
    for name, value in asdict(defaults).items():
        p.add_argument("--" + name.replace("_", "-"), type=type(value) if value is not None else str, default=value)
    raise SystemExit(main(RunConfig(**vars(p.parse_args()))))
