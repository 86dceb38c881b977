import csv
import io
import json
import os
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Literal, Mapping

from loguru import logger
from pydantic import BaseModel

from schemas import ExperimentSettings
from services.errors import InvalidInputError

try:
    import aiofiles
except ImportError:
    aiofiles = None

BASE_DIR = Path(__file__).resolve().parent
SETTINGS_FILE = "settings.json"

OutputFormat = Literal["csv", "json"]


def resolve_path(path: str | os.PathLike, base: Path = BASE_DIR) -> Path:
    p = Path(path)
    return p if p.is_absolute() else (base / p)


def rational_to_json(value: Fraction) -> dict[str, str]:
    return {"numerator": str(value.numerator), "denominator": str(value.denominator)}


async def read_file_async(path: str | os.PathLike) -> dict | None:
    p = resolve_path(path)
    if not p.exists():
        return None
    try:
        if aiofiles is None:
            with p.open("r", encoding="utf-8") as f:
                return json.load(f)
        async with aiofiles.open(p, "r", encoding="utf-8") as f:
            raw = await f.read()
        return json.loads(raw)
    except json.JSONDecodeError as e:
        logger.error(f"[read_file_async] Некорректный JSON в {p}: {e}")
        return None


async def save_text_async(path: str | os.PathLike, text: str, base: Path = BASE_DIR) -> Path:
    """Атомарная запись: сначала .tmp, затем os.replace."""
    p = resolve_path(path, base)
    p.parent.mkdir(parents=True, exist_ok=True)
    tmp = p.with_suffix(p.suffix + ".tmp")
    if aiofiles is None:
        with tmp.open("w", encoding="utf-8", newline="") as f:
            f.write(text)
    else:
        async with aiofiles.open(tmp, "w", encoding="utf-8", newline="") as f:
            await f.write(text)
    os.replace(tmp, p)
    logger.debug(f"[save_text_async] записано {len(text)} символов в {p}")
    return p


async def save_file_async(path: str | os.PathLike, data, base: Path = BASE_DIR) -> Path:
    return await save_text_async(path, json.dumps(data, ensure_ascii=False, indent=4), base)


async def load_settings_async(path: str | os.PathLike = SETTINGS_FILE) -> ExperimentSettings:
    raw = await read_file_async(path)
    if raw is None:
        logger.debug(f"Файл настроек {path} не найден, используются значения по умолчанию")
        return ExperimentSettings()
    return ExperimentSettings.model_validate(raw)


# --- ФОРМАТЫ ВЫВОДА ---


def _plain(records: Iterable[BaseModel | Mapping]) -> list[dict]:
    return [r.model_dump() if isinstance(r, BaseModel) else dict(r) for r in records]


def render_csv(
    records: Iterable[BaseModel | Mapping], fieldnames: list[str] | None = None, metadata: Mapping | None = None
) -> str:
    """Строка заголовка, затем записи. Метаданные, если заданы, идут строками `# key=value` перед заголовком."""
    rows = _plain(records)
    if fieldnames is None:
        if not rows:
            raise InvalidInputError("Нет записей и не задан заголовок CSV")
        fieldnames = list(rows[0])
    buffer = io.StringIO()
    for key, value in (metadata or {}).items():
        buffer.write(f"# {key}={'' if value is None else value}\n")
    writer = csv.DictWriter(buffer, fieldnames=fieldnames, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({key: "" if row.get(key) is None else row[key] for key in fieldnames})
    return buffer.getvalue()


def render_json(metadata: Mapping, records: Iterable[BaseModel | Mapping]) -> str:
    """Один объект метаданных и массив записей."""
    return json.dumps({"metadata": dict(metadata), "records": _plain(records)}, ensure_ascii=False, indent=4)


def render(
    metadata: Mapping,
    records: Iterable[BaseModel | Mapping],
    fmt: OutputFormat,
    fieldnames: list[str] | None = None,
    annotate: bool = False,
) -> str:
    if fmt == "csv":
        return render_csv(records, fieldnames, metadata if annotate else None)
    if fmt == "json":
        return render_json(metadata, records)
    raise InvalidInputError(f"Неизвестный формат вывода: {fmt}")


def format_from_path(path: str | os.PathLike, default: OutputFormat = "csv") -> OutputFormat:
    suffix = Path(path).suffix.lower()
    if suffix == ".json":
        return "json"
    if suffix == ".csv":
        return "csv"
    return default


async def save_records_async(
    path: str | os.PathLike,
    metadata: Mapping,
    records: Iterable[BaseModel | Mapping],
    fmt: OutputFormat | None = None,
    base: Path | None = None,
    annotate: bool = False,
) -> Path:
    fmt = fmt or format_from_path(path)
    records = list(records)
    text = render(metadata, records, fmt, annotate=annotate)
    p = await save_text_async(path, text, base or Path.cwd())
    logger.info(f"Сохранено {len(records)} записей ({fmt}) в {p}")
    return p
