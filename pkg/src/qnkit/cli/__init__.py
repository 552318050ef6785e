"""Batch front end: model files in, tables/CSV/JSON out."""

from .main import main
from .render import render
from .runner import ResultDocument, RunOptions, run, sweep_points
from .schema import (
    ModelDocument,
    ParseError,
    SchemaError,
    ValidationError,
    load_model,
    parse_model,
)

__all__ = [
    "ModelDocument",
    "ParseError",
    "ResultDocument",
    "RunOptions",
    "SchemaError",
    "ValidationError",
    "load_model",
    "main",
    "parse_model",
    "render",
    "run",
    "sweep_points",
]
