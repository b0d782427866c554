"""Historical regressions that fill unknown design parameters.

Exported:
    - HistoricalDatabase, load_database: bundled or user CSV tables
    - RegressionModel, fit, train, predict, predict_log: log-space power laws
      and Gaussian processes
    - fill_unknowns, FillEntry, FillResult: the default regression set
"""

from .database import HistoricalDatabase, load_database, training_arrays
from .fill import FillEntry, FillResult, fill_report_table, fill_unknowns, seed_mtow
from .models import MODES, Prediction, RegressionModel, fit, predict, predict_log, train

__all__ = [
    "MODES",
    "FillEntry",
    "FillResult",
    "HistoricalDatabase",
    "Prediction",
    "RegressionModel",
    "fill_report_table",
    "fill_unknowns",
    "fit",
    "load_database",
    "predict",
    "predict_log",
    "seed_mtow",
    "train",
    "training_arrays",
]
