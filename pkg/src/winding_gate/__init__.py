"""Holomorphic extendibility of boundary data on circle domains, decided by a
winding-number gate."""
from .errors import CertificateError, InputError, NumericalError, WindingGateError

__version__ = "0.1.0"

__all__ = ["CertificateError", "InputError", "NumericalError", "WindingGateError", "__version__"]
