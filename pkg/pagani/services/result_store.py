import csv
import io
import logging
import os
from enum import Enum
from typing import List, Sequence, Type, TypeVar

import aiofiles
import aiofiles.os as aios
from pydantic import BaseModel, ValidationError

from pagani.core.config import settings
from pagani.core.exceptions import MalformedResultFileException, StorageException, ValidationException
from pagani.models.integration_models import BenchRecord

logger = logging.getLogger(__name__)

RecordT = TypeVar("RecordT", bound=BaseModel)

def _formatValue(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, float):
        return repr(value)
    return str(value)


def csvHeader(recordType: Type[BaseModel]) -> List[str]:
    return [field.alias or name for name, field in recordType.model_fields.items()]


def recordsToCsv(records: Sequence[BaseModel], recordType: Type[BaseModel] = BenchRecord) -> str:
    # columns keep model field order; the header is written even with no rows
    header = csvHeader(recordType)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for record in records:
        row = record.model_dump(by_alias=True)
        writer.writerow([_formatValue(row[column]) for column in header])
    return buffer.getvalue()


def csvToRecords(text: str, recordType: Type[RecordT], source: str = "<memory>") -> List[RecordT]:
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None:
        raise MalformedResultFileException(source, "the file is empty")
    missing = [column for column in csvHeader(recordType) if column not in reader.fieldnames]
    if missing:
        raise MalformedResultFileException(source, f"missing columns {', '.join(missing)}")
    records = []
    for lineNumber, row in enumerate(reader, start=2):
        try:
            records.append(recordType.model_validate(row))
        except ValidationError as e:
            raise MalformedResultFileException(source, f"line {lineNumber}: {e.errors()[0]['msg']}")
    return records


class ResultStore:
    def __init__(self, baseDirectory: str):
        self.baseDirectory = baseDirectory

    def _resolvePath(self, relativeOrAbsolutePath: str) -> str:
        if os.path.isabs(relativeOrAbsolutePath):
            return relativeOrAbsolutePath

        fullPath = os.path.abspath(os.path.join(self.baseDirectory, relativeOrAbsolutePath))
        if not fullPath.startswith(os.path.abspath(self.baseDirectory)):
            raise ValidationException(f"Path traversal attempt detected for relative path: {relativeOrAbsolutePath}")
        return fullPath

    async def ensureDirectory(self, path: str) -> str:
        resolvedPath = self._resolvePath(path)
        try:
            if not await aios.path.exists(resolvedPath):
                await aios.makedirs(resolvedPath, exist_ok=True)
        except OSError as e:
            raise StorageException(f"Failed to create directory {resolvedPath}: {e}")
        return resolvedPath

    async def writeText(self, path: str, content: str) -> str:
        resolvedPath = self._resolvePath(path)
        try:
            parentDir = os.path.dirname(resolvedPath)
            if parentDir and not await aios.path.exists(parentDir):
                await aios.makedirs(parentDir, exist_ok=True)
            async with aiofiles.open(resolvedPath, mode="w", encoding="utf-8", newline="") as f:
                await f.write(content)
        except OSError as e:
            raise StorageException(f"Failed to write {resolvedPath}: {e}")
        return resolvedPath

    async def readText(self, path: str) -> str:
        resolvedPath = self._resolvePath(path)
        try:
            async with aiofiles.open(resolvedPath, mode="r", encoding="utf-8", newline="") as f:
                return await f.read()
        except FileNotFoundError:
            raise MalformedResultFileException(resolvedPath, "the file does not exist")
        except OSError as e:
            raise StorageException(f"Failed to read {resolvedPath}: {e}")

    async def writeRecords(
        self, path: str, records: Sequence[BaseModel], recordType: Type[BaseModel] = BenchRecord
    ) -> str:
        resolvedPath = await self.writeText(path, recordsToCsv(records, recordType))
        logger.info("Wrote %d records to %s", len(records), resolvedPath)
        return resolvedPath

    async def readRecords(self, path: str, recordType: Type[RecordT] = BenchRecord) -> List[RecordT]:
        text = await self.readText(path)
        return csvToRecords(text, recordType, source=self._resolvePath(path))


resultStore = ResultStore(baseDirectory=settings.resultsDirectory)
