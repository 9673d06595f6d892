"""wronski - numerical checks of reality theorems for Wronski maps."""

from wronski.checks import CheckResult, Outcome
from wronski.config import DEFAULT_SETTINGS, Settings, load_settings
from wronski.errors import WronskiError
from wronski.polycore import Polynomial, RootMultiset, classify_real, from_roots, roots
from wronski.quasiexp import Mode, QuasiExpSpace, discrete_wronskian, wronskian

__all__ = [
    "CheckResult",
    "Outcome",
    "DEFAULT_SETTINGS",
    "Settings",
    "load_settings",
    "WronskiError",
    "Polynomial",
    "RootMultiset",
    "classify_real",
    "from_roots",
    "roots",
    "Mode",
    "QuasiExpSpace",
    "discrete_wronskian",
    "wronskian",
]
__version__ = "0.1.0"
