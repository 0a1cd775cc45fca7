"""Support-function toolkit for convex bodies and set-valued selections."""

__version__ = "0.1.0"
