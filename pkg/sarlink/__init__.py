"""SARLINK: COSPAS-SARSAT 406 MHz beacon encoder, decoder, fuzzer and spoof monitor."""

__version__ = "0.1.0"
