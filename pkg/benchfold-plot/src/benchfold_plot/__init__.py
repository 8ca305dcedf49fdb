"""Figure renderer for the benchmark-multiverse pipeline's output files."""

from .figures import FIGURE_KINDS
from .readers import PlotDataError

__version__ = "0.1.0"

__all__ = ["FIGURE_KINDS", "PlotDataError"]
