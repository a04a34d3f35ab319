"""Eigenvalue solvers for rational and arbitrary damping positions."""
