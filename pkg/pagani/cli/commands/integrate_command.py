import argparse
import sys

from pagani.core.exceptions import EXIT_FAILURE, EXIT_OK
from pagani.models.integration_models import BenchRecord, IntegrationStatus
from pagani.services import benchmark_runner, integrands
from pagani.services.result_store import recordsToCsv
from pagani.cli.commands.options import addIntegratorOptions, applyThreads, integratorOverrides

DEFAULT_TAU_REL = 1e-3

def register(subparsers) -> None:
    parser = subparsers.add_parser("integrate", help="Integrate one suite function and print a CSV row.")
    parser.add_argument("integrandId", metavar="ID", help="Integrand identifier f1..f8.")
    parser.add_argument("dim", metavar="DIM", type=int, help="Dimension.")
    parser.add_argument("tauRelPositional", metavar="TAU_REL", type=float, nargs="?", default=None)
    parser.add_argument("--tau-rel", type=float, default=None, dest="tauRel", help="Relative tolerance (default: 1e-3).")
    addIntegratorOptions(parser)
    parser.set_defaults(handler=integrateCommand)


async def integrateCommand(args: argparse.Namespace) -> int:
    tauRel = args.tauRel if args.tauRel is not None else args.tauRelPositional
    tauRel = DEFAULT_TAU_REL if tauRel is None else tauRel
    spec = integrands.getSpec(args.integrandId, args.dim)
    config = benchmark_runner.configFor(spec, tauRel, **integratorOverrides(args))
    applyThreads(args.threads)

    record = benchmark_runner.runPagani(spec, config)
    sys.stdout.write(recordsToCsv([record], BenchRecord))
    sys.stdout.flush()
    if record.status == IntegrationStatus.CONVERGED and record.trueRelErr <= tauRel:
        return EXIT_OK
    return EXIT_FAILURE
