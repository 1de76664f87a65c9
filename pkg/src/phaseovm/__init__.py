"""Operator-valued measures over phase-space regions in a truncated Fock basis."""

__version__ = "0.1.0"
