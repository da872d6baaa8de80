"""bertinilab: smooth-curve statistics on Hirzebruch surfaces over finite fields."""

__version__ = "0.1.0"
