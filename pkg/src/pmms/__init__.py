"""Predictive mobility management simulator for 802.11 handoff studies."""

__version__ = "0.1.0"
