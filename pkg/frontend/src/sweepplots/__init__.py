from .table import Curve, SweepTable, TableError, load_sweep_csv
from .render import render

__all__ = ["Curve", "SweepTable", "TableError", "load_sweep_csv", "render"]
__version__ = "0.1.0"
