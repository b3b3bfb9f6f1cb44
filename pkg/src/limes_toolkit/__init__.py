"""This module defines the limes_toolkit public interface."""

__version__ = "0.1.0"
