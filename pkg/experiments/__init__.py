"""
Experiments Package
Acceptance experiments for the cylquant framework
"""

__version__ = "1.0.0"
