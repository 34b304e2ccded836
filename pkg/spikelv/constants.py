TOOL = "spikelv"
GENERATOR_ID = "numpy.Philox4x64-10"
SUBSEED_HASH = "sha256"
SUBSEED_SEP = "\x1f"

DEFAULT_CLASS_EDGES = (1, 2, 5, 50, 500, 5000, 25000, 100_000)

# per-class interval histogram bin widths, seconds
HIGH_P_BIN = 480  # 8 minutes
MODERATE_P_BIN = 5400  # 1.5 hours
LOW_P_BIN = 7200  # 2 hours
MODERATE_P_FROM = 5
HIGH_P_FROM = 25_000

POISSON_LV = 1.0
LV_MAX = 3.0
MIN_LV_SPIKES = 3
MIN_SPLIT_SPIKES = 6

# flags carried by aggregates instead of raising
EMPTY = "empty"
TOO_FEW = "too_few"
ZERO_VARIANCE = "zero_variance"

MAX_EVENT_TIME = 2**63 - 1  # int64
MAX_EXPECTED_EVENTS = 100_000_000

COMMENT = "#"
SEP = "\t"

ZIPF_CSV = "zipf.csv"
POPULARITY_PDF_CSV = "popularity_pdf.csv"
LV_SCATTER_CSV = "lv_scatter.csv"
LV_SCATTER_NULL_CSV = "lv_scatter_null.csv"
CLASS_SUMMARY_REAL_CSV = "class_summary_real.csv"
CLASS_SUMMARY_NULL_CSV = "class_summary_null.csv"
SPLITHALF_CSV = "splithalf.csv"
SPLITHALF_PAIRS_CSV = "splithalf_pairs.csv"
ACTIVITY_CSV = "activity.csv"
REPORT_JSON = "report.json"
INGEST_JSON = "ingest.json"
NULL_EVENTS = "null_events.tsv"
NULL_SIDECAR = "null_events.json"
SYNTH_EVENTS = "synth_events.tsv"
SYNTH_SIDECAR = "synth_events.json"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3
