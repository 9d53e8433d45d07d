"""Exact tropical Tevelev degrees of Hirzebruch surfaces and the projective plane."""
from __future__ import annotations

from .formula import labelled_degree, predicted_counts, trop_tev, trop_tev_p2
from .model import ContactData, InvalidContactData, load_instance, validate

__version__ = "0.1.0"

__all__ = [
    "ContactData",
    "InvalidContactData",
    "labelled_degree",
    "load_instance",
    "predicted_counts",
    "trop_tev",
    "trop_tev_p2",
    "validate",
    "__version__",
]
