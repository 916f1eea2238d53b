from typing import Dict, Protocol, Type

import numpy as np

from pagani.core.exceptions import ValidationException

def twoLevelRefine(
    estimates: np.ndarray,
    rawErrors: np.ndarray,
    parentEstimates: np.ndarray,
    parentErrors: np.ndarray,
    floor: float = 0.125,
) -> np.ndarray:
    """Shrink each child's error by how well the sibling pair reproduces the parent.

    The factor is |V_parent - (V_j + V_s)| / (E_j + E_s) clamped to [floor, 1].
    Pairs with zero or non-finite error mass keep their raw errors.
    """
    count = estimates.shape[0]
    if not (rawErrors.shape[0] == parentEstimates.shape[0] == parentErrors.shape[0] == count):
        raise ValidationException("Two-level refinement needs equally sized estimate and error arrays.")
    if count % 2:
        raise ValidationException(f"Two-level refinement needs sibling pairs, got {count} regions.")

    sibling = np.arange(count) ^ 1
    delta = np.abs(parentEstimates - (estimates + estimates[sibling]))
    pairError = rawErrors + rawErrors[sibling]
    usable = (pairError > 0) & np.isfinite(pairError) & np.isfinite(delta)

    ratio = np.ones(count)
    np.divide(delta, pairError, out=ratio, where=usable)
    return np.where(usable, rawErrors * np.clip(ratio, floor, 1.0), rawErrors)


class ErrorRefiner(Protocol):
    def refine(
        self, estimates: np.ndarray, rawErrors: np.ndarray, parentEstimates: np.ndarray, parentErrors: np.ndarray
    ) -> np.ndarray:
        ...


class ClampedTwoLevelRefiner:
    def __init__(self, floor: float = 0.125):
        self.floor = floor

    def refine(
        self, estimates: np.ndarray, rawErrors: np.ndarray, parentEstimates: np.ndarray, parentErrors: np.ndarray
    ) -> np.ndarray:
        return twoLevelRefine(estimates, rawErrors, parentEstimates, parentErrors, self.floor)


class IdentityRefiner:
    def refine(
        self, estimates: np.ndarray, rawErrors: np.ndarray, parentEstimates: np.ndarray, parentErrors: np.ndarray
    ) -> np.ndarray:
        return rawErrors.copy()


REFINERS: Dict[str, Type] = {
    "clamped": ClampedTwoLevelRefiner,
    "identity": IdentityRefiner,
}

def buildRefiner(name: str, floor: float) -> ErrorRefiner:
    if name not in REFINERS:
        raise ValidationException(f"Unknown error refiner '{name}'. Known: {', '.join(REFINERS)}.")
    if name == "clamped":
        return ClampedTwoLevelRefiner(floor)
    return REFINERS[name]()
