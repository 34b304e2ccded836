from pathlib import Path

from spikelv import constants as const

__all__ = [
    "zipf_path",
    "popularity_pdf_path",
    "intervals_path",
    "multiplicity_path",
    "lv_scatter_path",
    "lv_pdf_path",
    "class_summary_path",
    "splithalf_path",
    "splithalf_pairs_path",
    "activity_path",
    "report_path",
    "ingest_path",
]


def zipf_path(out_dir: Path) -> Path:
    return out_dir / const.ZIPF_CSV


def popularity_pdf_path(out_dir: Path) -> Path:
    return out_dir / const.POPULARITY_PDF_CSV


def intervals_path(out_dir: Path, label: str) -> Path:
    return out_dir / f"intervals_{label}.csv"


def multiplicity_path(out_dir: Path, label: str) -> Path:
    return out_dir / f"multiplicity_{label}.csv"


def lv_scatter_path(out_dir: Path, null: bool = False) -> Path:
    if null:
        return out_dir / const.LV_SCATTER_NULL_CSV

    return out_dir / const.LV_SCATTER_CSV


def lv_pdf_path(out_dir: Path, label: str, null: bool = False) -> Path:
    """
    Per-class L_V density of real trains, or of null trains when `null`.
    """
    if null:
        return out_dir / f"lv_pdf_null_{label}.csv"

    return out_dir / f"lv_pdf_{label}.csv"


def class_summary_path(out_dir: Path, null: bool = False) -> Path:
    if null:
        return out_dir / const.CLASS_SUMMARY_NULL_CSV

    return out_dir / const.CLASS_SUMMARY_REAL_CSV


def splithalf_path(out_dir: Path) -> Path:
    return out_dir / const.SPLITHALF_CSV


def splithalf_pairs_path(out_dir: Path) -> Path:
    return out_dir / const.SPLITHALF_PAIRS_CSV


def activity_path(out_dir: Path) -> Path:
    return out_dir / const.ACTIVITY_CSV


def report_path(out_dir: Path) -> Path:
    return out_dir / const.REPORT_JSON


def ingest_path(out_dir: Path) -> Path:
    return out_dir / const.INGEST_JSON
