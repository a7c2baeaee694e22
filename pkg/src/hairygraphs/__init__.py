"""Exact-arithmetic engine for the stable Johnson cokernel.

Subpackages cover exact rational linear algebra, symplectic tensor
harmonics, free Lie algebra tree calculus, hairy Lie graph complexes with
the contraction operator beta, dihedral coinvariants, and the symmetric
group / Weyl dimension bookkeeping used to cross-check the top graded
piece of the cokernel.
"""

__version__ = "0.1.0"
