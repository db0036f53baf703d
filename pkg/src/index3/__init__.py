"""Index-3 blocking sets in PG(2,q): construction, verification and classification."""

__version__ = "0.1.0"
