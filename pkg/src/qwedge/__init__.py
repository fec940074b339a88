"""Exact q-series workbench: correlation identities, characters, quasimodular fits."""

from .reports import Report
from .series import QSeries, SeriesError

__all__ = ["QSeries", "Report", "SeriesError"]
