import argparse
from typing import Any, Dict, Optional

import numba

from pagani.core.config import settings
from pagani.core.exceptions import ValidationException

def addIntegratorOptions(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--tau-abs", type=float, default=None, dest="tauAbs",
                        help="Absolute error tolerance (default: 1e-20).")
    parser.add_argument("--max-regions", type=int, default=None, dest="maxRegions",
                        help="Upper bound on simultaneously live regions.")
    parser.add_argument("--it-max", type=int, default=None, dest="itMax", help="Iteration limit.")
    parser.add_argument("--no-rel-filter", action="store_true", dest="noRelFilter",
                        help="Disable relative-error filtering (for sign-changing integrands).")
    parser.add_argument("--threads", type=int, default=None, help="Worker threads for region evaluation.")


def integratorOverrides(args: argparse.Namespace) -> Dict[str, Any]:
    overrides: Dict[str, Any] = {
        "tauAbs": args.tauAbs,
        "maxRegions": args.maxRegions,
        "itMax": args.itMax,
        "debugChecks": True if args.debugChecks else None,
    }
    if args.noRelFilter:
        overrides["relFilteringEnabled"] = False
    return overrides


def applyThreads(threads: Optional[int]) -> None:
    # PAGANI_NUM_THREADS applies when --threads is absent
    if threads is None:
        threads = settings.numThreads
    if threads is None:
        return
    if not 1 <= threads <= numba.config.NUMBA_NUM_THREADS:
        raise ValidationException(
            f"--threads must lie in 1..{numba.config.NUMBA_NUM_THREADS}, got {threads}."
        )
    numba.set_num_threads(threads)
