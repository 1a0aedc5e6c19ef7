"""Pseudo-random sign-matrix ensembles built from dual BCH codes.

The pipeline: :mod:`.gf2m` provides GF(2^m) arithmetic, :mod:`.codes`
builds BCH codes and samples their duals, :mod:`.ensembles` packs
codewords into symmetric / rectangular sign matrices, :mod:`.spectral`
computes spectra and distribution distances, :mod:`.laws` evaluates the
semicircle and Marchenko-Pastur limits, :mod:`.independence` verifies the
r-independence guarantee, and :mod:`.cli` drives batch experiments.
"""

__version__ = "0.1.0"

from . import codes, ensembles, gf2m, independence, laws, spectral  # noqa: F401
