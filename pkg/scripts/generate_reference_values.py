"""Regenerate pagani/services/golden_values.py.

f7 comes from the exact expansion in pagani.services.integrands. f8 has no
closed form for d > 1; it is integrated with a tensor Gauss-Legendre rule whose
node count grows until two successive levels agree. The integrand is symmetric
in its arguments, so only node multisets are visited, each weighted by its
multinomial count.
"""
import argparse
import asyncio
import itertools
import logging
import math
from collections import Counter
from typing import Dict, Sequence

import numpy as np

from pagani.core.exceptions import InternalErrorException
from pagani.core.logging_config import configureLogging
from pagani.services.integrands import boxElevenExact
from pagani.services.result_store import ResultStore

logger = logging.getLogger("generate_reference_values")

DIMENSIONS = (1, 2, 3, 8)
AGREEMENT = 1e-10
START_NODES = 8
NODE_STEP = 4
MAX_NODES = 40

def symmetricTensorQuadrature(power: float, dim: int, nodes: int) -> float:
    abscissae, weights = np.polynomial.legendre.leggauss(nodes)
    x = 0.5 * (abscissae + 1.0)
    w = 0.5 * weights
    terms = []
    for combo in itertools.combinations_with_replacement(range(nodes), dim):
        multiplicity = math.factorial(dim)
        for repeat in Counter(combo).values():
            multiplicity //= math.factorial(repeat)
        radius = math.fsum(x[i] ** 2 for i in combo)
        weight = math.prod(w[i] for i in combo)
        terms.append(multiplicity * weight * radius**power)
    return math.fsum(terms)


def converge(power: float, dim: int) -> float:
    previous = symmetricTensorQuadrature(power, dim, START_NODES)
    for nodes in range(START_NODES + NODE_STEP, MAX_NODES + 1, NODE_STEP):
        current = symmetricTensorQuadrature(power, dim, nodes)
        gap = abs(current - previous) / abs(current)
        logger.info("power=%g dim=%d nodes=%d value=%.17g gap=%.2e", power, dim, nodes, current, gap)
        if gap <= AGREEMENT:
            return current
        previous = current
    raise InternalErrorException(f"Gauss-Legendre levels did not agree to {AGREEMENT} for dim={dim}.")


def renderModule(f7Values: Dict[int, float], f8Values: Dict[int, float]) -> str:
    def block(name: str, values: Dict[int, float], dims: Sequence[int]) -> str:
        lines = [f"{name} = {{"] + [f"    {d}: {values[d]!r}," for d in dims] + ["}"]
        return "\n".join(lines)

    header = (
        "# Generated by scripts/generate_reference_values.py; do not edit by hand.\n"
        "# f7: exact multinomial expansion of (sum x_i^2)^11, each monomial integrated exactly.\n"
        "# f8: tensor-product Gauss-Legendre over the symmetric point multisets, resolution\n"
        "#     raised until successive levels agree to 1e-10 relative.\n"
    )
    return header + "\n" + block("F7_BOX_VALUES", f7Values, DIMENSIONS) + "\n\n" + block(
        "F8_BOX_VALUES", f8Values, DIMENSIONS
    ) + "\n"


async def main(outPath: str) -> None:
    f7Values = {dim: float(boxElevenExact(dim)) for dim in DIMENSIONS}
    # 1D is exact: integral of x^15 on [0, 1]
    f8Values = {1: 1.0 / 16.0}
    for dim in DIMENSIONS[1:]:
        f8Values[dim] = converge(7.5, dim)
    store = ResultStore(baseDirectory=".")
    path = await store.writeText(outPath, renderModule(f7Values, f8Values))
    logger.info("Wrote %s", path)


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="pagani/services/golden_values.py")
    args = parser.parse_args()
    configureLogging("INFO")
    asyncio.run(main(args.out))
