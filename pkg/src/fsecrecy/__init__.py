"""Secrecy metrics over Fisher-Snedecor F fading wiretap channels."""
__version__ = "0.1.0"
