"""Write every reference table as CSV, one file per table id."""

import argparse
import time
from pathlib import Path

from odesurface.cli import render
from odesurface.quadrature import QuadConfig
from odesurface.tables import TABLE_IDS, reproduce


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="results", type=Path)
    ap.add_argument("--tables", nargs="*", default=list(TABLE_IDS), choices=TABLE_IDS)
    ap.add_argument("--threads", type=int, default=QuadConfig().threads)
    args = ap.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)
    cfg = QuadConfig(threads=args.threads)
    for table in args.tables:
        t0 = time.perf_counter()
        rows = reproduce(table, cfg)
        path = args.out_dir / f"{table}.csv"
        path.write_text(render(rows, "csv"))
        worst = max((v for r in rows for k, v in r.items() if k.startswith("dev_") and v == v), default=0.0)
        print(f"{table}: {len(rows)} rows, max deviation {worst:.3g}, {time.perf_counter() - t0:.1f}s -> {path}")


if __name__ == "__main__":
    main()
