"""Proof theory of omitting types: closure hierarchy, ranks and the theories behind them."""

__version__ = "0.1.0"
