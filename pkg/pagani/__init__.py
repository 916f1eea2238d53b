from pagani.models.integration_models import IntegrationResult, IntegrationStatus, IntegratorConfig
from pagani.models.region_models import Bounds
from pagani.services.pagani_driver import integrate
from pagani.services.reference_integrator import integrateSequential

__all__ = [
    "Bounds",
    "IntegrationResult",
    "IntegrationStatus",
    "IntegratorConfig",
    "integrate",
    "integrateSequential",
]
