import gzip
import hashlib
import io
import json
import unicodedata
from concurrent.futures import ThreadPoolExecutor
from logging.config import dictConfig
from pathlib import Path
from typing import Any

import yaml


def setup_logging(config: Path | None):
    if config is None:
        return

    with open(config, "r") as stream:
        config = yaml.load(stream, Loader=yaml.FullLoader)

    dictConfig(config)


def normalize_tag(raw: str) -> str:
    """
    NFC-normalized, case-folded tag with one leading '#' removed.

    Accents are kept: "ledébat" and "ledebat" stay distinct tags.
    """
    tag = unicodedata.normalize("NFC", raw.strip()).casefold()
    if tag.startswith("#"):
        tag = tag[1:]

    return tag.strip()


def open_text(path: Path, mode: str = "r") -> io.TextIOBase:
    """
    Opens UTF-8 text file, transparently (de)compressing `*.gz`.

    Undecodable bytes come through as lone surrogates instead of raising.
    """
    options = {"encoding": "utf-8", "errors": "surrogateescape", "newline": ""}
    if path.suffix == ".gz":
        return gzip.open(path, mode + "t", **options)

    return open(path, mode, **options)


def canonical_json(data: Any) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


def sha256_hex(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def parallel_map(func, items, workers: int = 1) -> list:
    """Order-preserving map over a bounded thread pool"""
    items = list(items)
    if workers <= 1 or len(items) < 2:
        return [func(item) for item in items]

    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(func, items))
