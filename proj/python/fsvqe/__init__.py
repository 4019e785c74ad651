"""Folded-spectrum VQE: Python access to the C++ core."""

from ._fsvqe import Error, __version__, fold, fsvqe, group_count, groups, hamiltonian, pes, spectrum

__all__ = ["Error", "__version__", "fold", "fsvqe", "group_count", "groups", "hamiltonian", "pes", "spectrum"]
