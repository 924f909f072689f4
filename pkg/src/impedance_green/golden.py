"""Frozen golden vectors for the special-function layer.

Records are JSON lines ``{"fn", "two_lambda", "z", "value", "tol"}`` with
complex numbers stored as ``[re, im]``. The shipped file was produced by
``scripts/make_golden.py`` from a 60-digit mpmath evaluation.
"""
import json
from importlib import resources

from .special import bessel_k, exp_integral_e1

GOLDEN_FILE = "golden_special.jsonl"


def load_golden(path=None):
    """Read golden records from ``path`` or from the packaged data file."""
    if path is None:
        text = resources.files("impedance_green").joinpath("data", GOLDEN_FILE).read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def evaluate_record(rec, backend=None) -> complex:
    """Evaluate the function named by ``rec`` at its abscissa."""
    z = complex(*rec["z"])
    if rec["fn"] == "K":
        return complex(bessel_k(int(rec["two_lambda"]), z, backend=backend))
    if rec["fn"] == "E1":
        return complex(exp_integral_e1(z, backend=backend))
    raise ValueError(f"unknown golden function {rec['fn']!r}")
