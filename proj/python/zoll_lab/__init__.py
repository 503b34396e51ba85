"""Python front end for the zoll-lab core."""

import json

from . import _zoll_lab
from ._zoll_lab import ParseError, ZollError, __version__, config_hash, model_spectrum, region_area, suite_names

__all__ = [
    "ParseError",
    "ZollError",
    "__version__",
    "config_hash",
    "detect_zoll",
    "g1",
    "g2T",
    "model_spectrum",
    "region_area",
    "run_suite",
    "suite_names",
]


def run_suite(name, config_text="", out=""):
    """Run a named suite and return the report as a dict. Writes artifacts when `out` is set."""
    return json.loads(_zoll_lab.run_suite_json(name, config_text, str(out)))


def detect_zoll(spectrum):
    return json.loads(_zoll_lab.detect_zoll_json(list(spectrum)))


def g1(model, region, lambda_max):
    return json.loads(_zoll_lab.g1_json(model, region, float(lambda_max)))


def g2T(model, observable, T, base=24, directions=32):
    return json.loads(_zoll_lab.g2T_json(model, observable, float(T), base, directions))
