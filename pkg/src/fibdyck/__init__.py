"""Fibonacci-Dyck shift: periodic orbits, multipliers, rewriting injections,
zeta functions and an embedding test for subshifts of finite type."""

__version__ = "0.1.0"
