"""Explicit-state workbench for finite multi-agent possible-world models."""

from importlib import resources

from .errors import *  # noqa: F401,F403
from .kernels import BACKEND
from .logic import Evaluator, parse
from .model import Model, from_dict, load

__version__ = "0.1.0"


def fixture(name: str) -> Model:
    """Load one of the shipped story models, e.g. ``fixture("cards")``."""
    return load(fixture_path(name))


def fixture_path(name: str):
    return resources.files(__package__) / "fixtures" / f"{name}.json"


__all__ = ["Model", "load", "from_dict", "fixture", "fixture_path", "parse", "Evaluator",
           "BACKEND", "__version__"]
