"""Restricted Schrödinger operators."""

from .assembly import DirichletMatrix, assemble_dirichlet, free_heat_diagonal

__all__ = ["DirichletMatrix", "assemble_dirichlet", "free_heat_diagonal"]
