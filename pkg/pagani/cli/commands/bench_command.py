import argparse

from pagani.core.exceptions import EXIT_OK
from pagani.models.integration_models import BenchRecord
from pagani.services import benchmark_runner
from pagani.services.result_store import resultStore
from pagani.cli.commands.options import addIntegratorOptions, applyThreads, integratorOverrides

def register(subparsers) -> None:
    parser = subparsers.add_parser("bench", help="Sweep tolerances 1e-3 * 5^-k over a subset of the suite.")
    parser.add_argument("--subset", default="standard", help="'standard', 'desk', '' or a comma list of id:dim.")
    parser.add_argument("--k-max", type=int, default=3, dest="kMax", help="Last tolerance index k (0..10).")
    parser.add_argument("--out", default="bench.csv", help="Output CSV path.")
    addIntegratorOptions(parser)
    parser.set_defaults(handler=benchCommand)


async def benchCommand(args: argparse.Namespace) -> int:
    benchmark_runner.toleranceSequence(args.kMax)
    specs = benchmark_runner.parseSubset(args.subset)
    applyThreads(args.threads)
    records = benchmark_runner.runBench(specs, args.kMax, **integratorOverrides(args))
    await resultStore.writeRecords(args.out, records, BenchRecord)
    return EXIT_OK
