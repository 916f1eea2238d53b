import argparse

from pagani.core.exceptions import EXIT_OK
from pagani.models.integration_models import CompareRecord
from pagani.services import benchmark_runner
from pagani.services.result_store import resultStore
from pagani.cli.commands.options import addIntegratorOptions, applyThreads, integratorOverrides

def register(subparsers) -> None:
    parser = subparsers.add_parser("compare", help="Run PAGANI and the sequential reference side by side.")
    parser.add_argument("--subset", default="desk", help="'standard', 'desk', '' or a comma list of id:dim.")
    parser.add_argument("--tau-rel", type=float, default=1e-3, dest="tauRel", help="Relative tolerance.")
    parser.add_argument("--out", default="compare.csv", help="Output CSV path.")
    addIntegratorOptions(parser)
    parser.set_defaults(handler=compareCommand)


async def compareCommand(args: argparse.Namespace) -> int:
    specs = benchmark_runner.parseSubset(args.subset)
    applyThreads(args.threads)
    records = benchmark_runner.runCompare(specs, args.tauRel, **integratorOverrides(args))
    await resultStore.writeRecords(args.out, records, CompareRecord)
    return EXIT_OK
