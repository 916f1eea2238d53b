import argparse

from pagani.cli.commands import bench_command, compare_command, integrate_command, plot_command

def buildParser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pagani",
        description="Breadth-first adaptive cubature with a sequential reference integrator and benchmark harness.",
    )
    parser.add_argument("--log-level", default=None, dest="logLevel", help="Logging level (default: INFO).")
    parser.add_argument("--debug-checks", action="store_true", dest="debugChecks",
                        help="Assert conservation invariants on every iteration.")
    subparsers = parser.add_subparsers(dest="command", required=True)

    integrate_command.register(subparsers)
    bench_command.register(subparsers)
    compare_command.register(subparsers)
    plot_command.register(subparsers)
    return parser
