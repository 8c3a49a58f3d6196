"""Run every named experiment and write one JSON report per experiment.

    python3 scripts/reproduce_all.py --out results/ [--config scripts/mot.toml] [--quick]
"""
import argparse
import inspect
import sys
import time
from pathlib import Path

from mot.config import load_config
from mot.experiments import EXPERIMENTS

# smaller sizes for a fast smoke run; the structure thresholds need n >= 100
QUICK = {
    "gauss-curtain": {"n": 60},
    "three-point": {"n": 10, "grid_x": 21, "grid_y": 301},
    "abs-structure": {"ns": [40, 80]},
}


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--out", default="results")
    ap.add_argument("--config")
    ap.add_argument("--quick", action="store_true", help="small instances (the reports will not match the defaults)")
    ap.add_argument("--only", action="append", choices=sorted(EXPERIMENTS))
    args = ap.parse_args(argv)

    cfg = load_config(args.config)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    failed = []
    for name in args.only or sorted(EXPERIMENTS):
        fn = EXPERIMENTS[name]
        params = cfg.params(name, QUICK.get(name) if args.quick else None)
        if "tolerances" in inspect.signature(fn).parameters:
            params["tolerances"] = cfg.tolerances
        t0 = time.perf_counter()
        result = fn(**params)
        report, csv = result if isinstance(result, tuple) else (result, None)
        (out / f"{name}.json").write_text(report.to_json())
        if csv is not None:
            (out / f"{name}-maps.csv").write_text(csv)
        status = "PASS" if report.passed else "FAIL"
        print(f"{name:16s} {status}  {time.perf_counter() - t0:6.1f}s")
        if not report.passed:
            failed.append(name)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
