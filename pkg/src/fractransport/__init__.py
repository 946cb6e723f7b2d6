"""Fractional diffusion-advection transport: propagators, solutions and checks."""

__version__ = "0.1.0"
