"""
wzbarnes: exact WZ-pair verification and high-precision Barnes integrals
Reproduces Ramanujan-type series for 1/pi and 1/pi^2, including the divergent ones
"""

__version__ = "1.0.0"

from .errors import WZBError
from .exact import AffineForm, BiPoly, RationalFunction
from .hyperterm import HyperTerm, WZPair, dual, term_ratio, wz_verify
from .mpnum import Precision
from .barnes import IntegrandSpec, eval_integral, choose_contour, integrate, residue_series_left, series_right
from .series import PFQSpec, WeightedSeries, pfq, weighted_series_eval
from .paperlib import Report, registry, reproduce, reproduce_all
from .run_log import RunLog, get_run_log
from .report_table import ReportTable

__all__ = [
    "WZBError",
    "AffineForm",
    "BiPoly",
    "RationalFunction",
    "HyperTerm",
    "WZPair",
    "dual",
    "term_ratio",
    "wz_verify",
    "Precision",
    "IntegrandSpec",
    "eval_integral",
    "choose_contour",
    "integrate",
    "residue_series_left",
    "series_right",
    "PFQSpec",
    "WeightedSeries",
    "pfq",
    "weighted_series_eval",
    "Report",
    "registry",
    "reproduce",
    "reproduce_all",
    "RunLog",
    "get_run_log",
    "ReportTable",
]
