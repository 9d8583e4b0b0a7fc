"""Invariantes exatos de root data sobre Z_ell e do passo de destorcao."""

__version__ = "0.1.0"
