from functools import lru_cache
from pathlib import Path

from pydantic_settings import BaseSettings

from spikelv import constants as const


class Settings(BaseSettings):
    spikelv__main__logging_cfg: Path | None = None
    spikelv__main__out_dir: Path = Path("out")
    spikelv__main__seed: int = 0
    spikelv__main__workers: int = 4
    spikelv__main__formats: str = "csv,json"
    spikelv__classes__edges: str = ",".join(
        map(str, const.DEFAULT_CLASS_EDGES)
    )
    spikelv__report__activity_bin: int = 60
    spikelv__report__lv_bin: float = 0.1
    spikelv__report__bins_per_decade: int = 5
    spikelv__synth__max_expected: int = const.MAX_EXPECTED_EVENTS


@lru_cache()
def get_settings():
    return Settings()
