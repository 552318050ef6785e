"""Markov chains, single-station queues and product-form queueing networks."""

from . import markov, networks, stations
from .errors import QnError

__version__ = "0.1.0"

__all__ = ["markov", "networks", "stations", "QnError", "__version__"]
