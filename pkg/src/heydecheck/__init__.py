"""heydecheck - exact verification of Heyde-type characterization identities on a-adic solenoids."""

try:
    from heydecheck._version import __version__
except ImportError:
    __version__ = "0.0.0+dev"

from heydecheck.models.groups import DualElement, Host, PrimeProfile

__all__ = [
    "__version__",
    "DualElement",
    "Host",
    "PrimeProfile",
]
