"""Static cost analysis for and-parallel logic programs."""

__version__ = "0.1.0"
