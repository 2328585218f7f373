"""Configuration package for the SARLINK beacon toolkit."""

from .settings import SarlinkSettings

__all__ = ['SarlinkSettings']
