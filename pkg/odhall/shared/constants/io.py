"""File-format and exit-code constants."""

SNAPSHOT_MAGIC = b"ODHL"
SNAPSHOT_FORMAT_VERSION = 1
# magic, version, model tag, n, L, t, gamma, b, field count
SNAPSHOT_HEADER_FORMAT = "<4sIBIddddB"
SNAPSHOT_DTYPE = "<c16"
SNAPSHOT_SUFFIX = ".odhl"

MODEL_TAGS = {"oldroyd": 1, "hallmhd": 2}

SERIES_FILENAME = "series.csv"
CONFIG_COPY_FILENAME = "config.ini"
FLOAT_FORMAT = ".17g"

CSV_COLUMNS = (
    "t",
    "l2_rho",
    "l2_u",
    "l2_extra",
    "h1_grad",
    "E0",
    "E1",
    "D0",
    "D1",
    "besov_m1",
    "besov_mhalf",
    "lowfreq_S",
    "lowfreq_S0",
    "s_radius",
    "n_tracker",
    "m_tracker",
)

# Process exit codes
EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_BLOW_UP = 2
EXIT_USAGE = 64
EXIT_IO = 74

# Besov column tracked by M for each supported index sigma_M
M_TRACKER_COLUMNS = {1.0: "besov_m1", 0.5: "besov_mhalf"}
DERIVED_COLUMNS = ("l2_rho_u", "l2_all")


def snapshot_filename(t: float) -> str:
    """File name of the snapshot taken at time t."""
    return f"snap_{t:.6f}{SNAPSHOT_SUFFIX}"
