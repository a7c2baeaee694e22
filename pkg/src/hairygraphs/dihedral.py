"""Dihedral action on tensor positions, coinvariants, Burnside counts.

The group D_{2d} acts on length-d words by rotating and reversing positions;
reflections may carry a sign character eps.  Coinvariants are the quotient
by span{w - eps(g) g.w}; in characteristic zero that span is the kernel of
the twisted averaging projector, so each signed orbit contributes one class,
except orbits containing their own negative, which die.  Canonical class
representatives are the lexicographically minimal orbit members with the
accumulated sign.

The action preserves the letter content of a word, so the harmonic
restriction is computed per torus-weight block.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .symplectic import SymplecticSpace


class DihedralGroup:
    """Rotations and reflections of d tensor positions, reflections signed.

    Elements are pairs (position map p, is_reflection) with
    (g.w)[i] = w[p[i]].  Group axioms are verified on construction.
    """

    def __init__(self, d: int, eps: int = 1):
        if d < 1:
            raise ValueError("word length must be positive")
        if eps not in (1, -1):
            raise ValueError("eps must be +1 or -1")
        self.d = d
        self.eps = eps
        rotations = [tuple((i - k) % d for i in range(d)) for k in range(d)]
        reversal = tuple(d - 1 - i for i in range(d))
        reflections = [tuple(reversal[p[i]] for i in range(d)) for p in rotations]
        self.elements = [(p, False) for p in rotations] + \
                        [(p, True) for p in reflections]
        self._verify_group()

    def _verify_group(self):
        assert len(self.elements) == 2 * self.d
        rot_maps = {p for p, r in self.elements if not r}
        assert len(rot_maps) == self.d, "rotations must be distinct"
        table = {(p, r) for p, r in self.elements}
        for p1, r1 in self.elements:
            for p2, r2 in self.elements:
                comp = tuple(p1[p2[i]] for i in range(self.d))
                assert (comp, r1 != r2) in table, "closure violated"

    def character(self, element) -> int:
        _, refl = element
        return self.eps if refl else 1

    def cycle_count(self, element) -> int:
        """Cycles of the position map, derived from the permutation itself."""
        p, _ = element
        seen = [False] * self.d
        cycles = 0
        for i in range(self.d):
            if not seen[i]:
                cycles += 1
                j = i
                while not seen[j]:
                    seen[j] = True
                    j = p[j]
        return cycles

    def __repr__(self):
        return f"DihedralGroup(d={self.d}, eps={self.eps:+d})"


def act(gp: DihedralGroup, element, word: tuple):
    """(image word, sign): rotations shift right, reflections reverse (x eps)."""
    if len(word) != gp.d:
        raise ValueError(f"word length {len(word)} != {gp.d}")
    p, _ = element
    return tuple(word[p[i]] for i in range(gp.d)), gp.character(element)


def signed_orbit(gp: DihedralGroup, word: tuple):
    return [act(gp, el, word) for el in gp.elements]


def canonical_class(gp: DihedralGroup, word: tuple):
    """(canonical word, sign) for the signed orbit, or None for a zero class."""
    best = None
    best_sign = None
    zero = False
    for w, s in signed_orbit(gp, word):
        if best is None or w < best:
            best, best_sign = w, s
            zero = False
        elif w == best and s != best_sign:
            zero = True
    return None if zero else (best, best_sign)


def reduce_to_classes(gp: DihedralGroup, word_sum: dict) -> dict:
    """Push a formal word sum into canonical coinvariant class coordinates."""
    out = {}
    for w, c in word_sum.items():
        cc = canonical_class(gp, tuple(w))
        if cc is None:
            continue
        rep, sign = cc
        s = out.get(rep, Fraction(0)) + sign * Fraction(c)
        if s:
            out[rep] = s
        elif rep in out:
            del out[rep]
    return out


def reduce_cyclic(d: int, word_sum: dict) -> dict:
    """Same reduction for the rotation subgroup only (no reflections)."""
    out = {}
    for w, c in word_sum.items():
        w = tuple(w)
        rep = min(w[k:] + w[:k] for k in range(d)) if d else w
        s = out.get(rep, Fraction(0)) + Fraction(c)
        if s:
            out[rep] = s
        elif rep in out:
            del out[rep]
    return out


class CoinvariantSpace:
    """(V^(x)d)_{D_2d} or its harmonic restriction, with class bookkeeping."""

    def __init__(self, n: int, d: int, eps: int, classes, dim: int, detail=""):
        self.n = n
        self.d = d
        self.eps = eps
        self.classes = classes  # canonical representatives of the plain quotient
        self.dim = dim
        self.detail = detail

    def __repr__(self):
        kind = self.detail or "plain"
        return (f"CoinvariantSpace(n={self.n}, d={self.d}, eps={self.eps:+d}, "
                f"dim={self.dim}, {kind})")


def coinvariant_space(n: int, d: int, eps: int, restrict_harmonic: bool = False,
                      space: SymplecticSpace | None = None) -> CoinvariantSpace:
    """Coinvariants of the length-d word space of an n-dim space under D_2d.

    With restrict_harmonic=True, n must be 2g of the given symplectic space
    and the reported dimension is that of the image of V^<d> in the quotient,
    i.e. [V^<d>]_{D_2d}.
    """
    from itertools import product

    gp = DihedralGroup(d, eps)
    classes = []
    seen = set()
    for w in product(range(n), repeat=d):
        cc = canonical_class(gp, w)
        if cc is None:
            continue
        rep, _ = cc
        if rep not in seen:
            seen.add(rep)
            classes.append(rep)
    if not restrict_harmonic:
        return CoinvariantSpace(n, d, eps, classes, len(classes))
    if space is None or space.dim != n:
        raise ValueError("harmonic restriction needs the symplectic space")
    dim = _harmonic_coinvariant_dim(space, d, eps)
    return CoinvariantSpace(n, d, eps, classes, dim, detail="harmonic")


@lru_cache(maxsize=None)
def _harmonic_coinvariant_dim(space: SymplecticSpace, d: int, eps: int) -> int:
    """dim of the image of V^<d> in the dihedral quotient, per weight block.

    dim image = rank(relations + harmonics) - rank(relations): the relation
    span is the kernel of the twisted averaging projector, so intersecting
    with the G-stable harmonic subspace computes its own coinvariants.
    """
    from .linalg import RowBasis
    from .symplectic import _harmonic_block, all_weights

    gp = DihedralGroup(d, eps)
    total = 0
    for wt in all_weights(space.g, d):
        words, index, ker = _harmonic_block(space.g, d, wt)
        if not ker.dim:
            continue
        rel = RowBasis()
        for w in words:
            for el in gp.elements:
                img, sign = act(gp, el, w)
                row = {index[w]: Fraction(1)}
                row[index[img]] = row.get(index[img], Fraction(0)) - sign
                row = {k: v for k, v in row.items() if v}
                if row:
                    rel.add(row)
        rel_rank = rel.rank
        for h in ker.basis:
            rel.add(h)
        total += rel.rank - rel_rank
    return total


def burnside_dim(n: int, d: int, eps: int) -> int:
    """(1/2d) sum over D_2d of eps(g) * n^cycles(g); must be an integer."""
    if n < 1 or d < 1:
        raise ValueError("n and d must be positive")
    gp = DihedralGroup(d, eps)
    total = 0
    for el in gp.elements:
        total += gp.character(el) * n ** gp.cycle_count(el)
    q, r = divmod(total, 2 * d)
    if r:
        raise ArithmeticError(
            f"Burnside average {total}/{2 * d} is not an integer "
            f"(n={n}, d={d}, eps={eps}); implementation bug")
    return q


def class_table(n: int, d: int, eps: int):
    """Canonical class representatives for small (n, d), for CLI display."""
    return list(coinvariant_space(n, d, eps).classes)
