from typing import Literal, Optional

from pydantic_settings import BaseSettings, SettingsConfigDict

class Settings(BaseSettings):
    tauAbs: float = 1e-20
    itMax: int = 100
    maxRegions: int = 2**22
    initTarget: int = 2**14
    maxDimension: int = 16 # rule point count grows like 2^n
    refinementFloor: float = 0.125
    refinerName: Literal["clamped", "identity"] = "clamped"
    directionChangeLimit: int = 4
    attemptLimit: int = 40
    referenceMaxEvals: int = 10**7
    numThreads: Optional[int] = None
    debugChecks: bool = False
    logLevel: str = "INFO"
    resultsDirectory: str = "."

    model_config = SettingsConfigDict(env_file=".env", env_prefix="PAGANI_", extra="ignore")

settings = Settings()
