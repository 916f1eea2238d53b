import argparse
import logging
import os
from typing import List

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from pagani.core.exceptions import EXIT_OK, MalformedResultFileException  # noqa: E402
from pagani.models.integration_models import BenchRecord, IntegrationStatus  # noqa: E402
from pagani.services.result_store import resultStore  # noqa: E402

logger = logging.getLogger(__name__)

ERROR_PLOT = "true_rel_err_vs_digits.png"
REGIONS_PLOT = "regions_vs_digits.png"
# log axes cannot show an exact answer
ERROR_FLOOR = 1e-17

def register(subparsers) -> None:
    parser = subparsers.add_parser("plot", help="Render accuracy and region-count plots from a bench CSV.")
    parser.add_argument("csvPath", metavar="CSV", help="CSV written by the bench command.")
    parser.add_argument("--out", default="plots", help="Output directory.")
    parser.set_defaults(handler=plotCommand)


def _scatterByStatus(axes, records: List[BenchRecord], values: List[float]) -> None:
    for converged, marker, label in ((True, "o", "Converged"), (False, "x", "not converged")):
        points = [
            (record.digits, value) for record, value in zip(records, values)
            if (record.status == IntegrationStatus.CONVERGED) == converged
        ]
        if points:
            xs, ys = zip(*points)
            axes.scatter(xs, ys, marker=marker, label=label)


def renderPlots(records: List[BenchRecord], outDirectory: str) -> List[str]:
    errorPath = os.path.join(outDirectory, ERROR_PLOT)
    figure, axes = plt.subplots(figsize=(6, 4))
    _scatterByStatus(axes, records, [max(record.trueRelErr, ERROR_FLOOR) for record in records])
    digits = sorted({record.digits for record in records})
    axes.plot(digits, [10.0**-d for d in digits], "k:", label="tau_rel")
    axes.set_yscale("log")
    axes.set_xlabel("digits of precision, log10(1/tau_rel)")
    axes.set_ylabel("true relative error")
    axes.legend()
    figure.tight_layout()
    figure.savefig(errorPath)
    plt.close(figure)

    regionsPath = os.path.join(outDirectory, REGIONS_PLOT)
    figure, axes = plt.subplots(figsize=(6, 4))
    _scatterByStatus(axes, records, [float(record.regionsGenerated) for record in records])
    axes.set_yscale("log")
    axes.set_xlabel("digits of precision, log10(1/tau_rel)")
    axes.set_ylabel("regions generated")
    axes.legend()
    figure.tight_layout()
    figure.savefig(regionsPath)
    plt.close(figure)
    return [errorPath, regionsPath]


async def plotCommand(args: argparse.Namespace) -> int:
    records = await resultStore.readRecords(args.csvPath, BenchRecord)
    if not records:
        raise MalformedResultFileException(args.csvPath, "the file holds no records")
    outDirectory = await resultStore.ensureDirectory(args.out)
    for path in renderPlots(records, outDirectory):
        logger.info("Wrote %s", path)
    return EXIT_OK
