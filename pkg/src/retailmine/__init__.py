"""Retail transaction analytics: itemsets, rules, sequential patterns, forecasting."""

__version__ = "0.1.0"
