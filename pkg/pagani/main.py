import asyncio
import logging
import sys
import traceback
from typing import List, Optional

from pagani.cli.router import buildParser
from pagani.core.config import settings
from pagani.core.exceptions import BasePaganiException, InternalErrorException
from pagani.core.logging_config import configureLogging

logger = logging.getLogger(__name__)

def paganiExceptionHandler(exc: BasePaganiException) -> int:
    sys.stderr.write(exc.toResponse().model_dump_json(exclude_none=True) + "\n")
    return exc.exitCode


def genericExceptionHandler(exc: Exception) -> int:
    serverError = InternalErrorException(message="An unexpected internal error occurred.")
    serverError.errorType = type(exc).__name__
    if settings.debugChecks:
        serverError.stack = traceback.format_exception(type(exc), exc, exc.__traceback__)
    logger.exception("Unhandled error")
    return paganiExceptionHandler(serverError)


def main(argv: Optional[List[str]] = None) -> int:
    args = buildParser().parse_args(argv)
    configureLogging(args.logLevel or settings.logLevel)
    try:
        return asyncio.run(args.handler(args))
    except BasePaganiException as exc:
        return paganiExceptionHandler(exc)
    except Exception as exc:
        return genericExceptionHandler(exc)


if __name__ == "__main__":
    sys.exit(main())
