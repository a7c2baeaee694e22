"""Symplectic vector space, tensor words, contractions and harmonics.

Letters are indexed 0..2g-1 with 2k = a_{k+1} and 2k+1 = b_{k+1}; the
pairing is omega(a_k, b_k) = 1 = -omega(b_k, a_k), all other basis pairs 0.
Tensors are stored as sparse rational combinations of letter words, so all
spaces stay finite dimensional with canonical bases and multilinearity takes
care of general vectors.

The harmonic subspace of length-d words is the intersection of the kernels
of all pairwise contractions; the projection onto it is taken along the span
of omega-insertions, with the directness of that decomposition checked at
runtime (it can only fail outside the stable range, and then we want to know).

Everything here is graded by the symplectic torus weight of a word (count of
a_k minus count of b_k per index k); contractions and insertions preserve
the weight, which keeps each linear solve small.
"""

from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache
from itertools import combinations


class StableRangeError(RuntimeError):
    """Raised when V^<d> + span(omega insertions) fails to be direct."""

    def __init__(self, g: int, d: int, message: str):
        super().__init__(f"stable range violated at g={g}, d={d}: {message}")
        self.g = g
        self.d = d


class SymplecticSpace:
    """Dimension-2g symplectic vector space with basis a_1..a_g, b_1..b_g."""

    def __init__(self, g: int):
        if g < 1:
            raise ValueError("genus must be positive")
        self.g = g
        self.dim = 2 * g

    def label_name(self, letter: int) -> str:
        k, parity = divmod(letter, 2)
        return f"{'ab'[parity]}{k + 1}"

    def letter_of(self, name: str) -> int:
        kind, idx = name[0], int(name[1:])
        if kind not in "ab" or not 1 <= idx <= self.g:
            raise ValueError(f"unknown basis label {name!r}")
        return 2 * (idx - 1) + (0 if kind == "a" else 1)

    def omega(self, x: int, y: int) -> int:
        if x // 2 != y // 2:
            return 0
        if x + 1 == y:
            return 1  # omega(a_k, b_k)
        if y + 1 == x:
            return -1
        return 0

    def letters(self):
        return range(self.dim)

    def a(self, k: int) -> int:
        return 2 * (k - 1)

    def b(self, k: int) -> int:
        return 2 * (k - 1) + 1

    def pairing_matrix_rank(self) -> int:
        from .linalg import SparseMatrix, rank

        m = SparseMatrix(self.dim, self.dim, {
            (x, y): self.omega(x, y)
            for x in self.letters() for y in self.letters()
            if self.omega(x, y)
        })
        return rank(m)

    def __eq__(self, other):
        return isinstance(other, SymplecticSpace) and other.g == self.g

    def __hash__(self):
        return hash(("SymplecticSpace", self.g))

    def __repr__(self):
        return f"SymplecticSpace(g={self.g})"


def weight(word: tuple) -> tuple:
    """Torus weight of a word: per-index a-count minus b-count."""
    if not word:
        return ()
    g = max(word) // 2 + 1
    w = [0] * g
    for letter in word:
        k, parity = divmod(letter, 2)
        w[k] += 1 if parity == 0 else -1
    return tuple(w)


def padded_weight(word: tuple, g: int) -> tuple:
    w = [0] * g
    for letter in word:
        k, parity = divmod(letter, 2)
        w[k] += 1 if parity == 0 else -1
    return tuple(w)


class TensorVector:
    """Sparse rational combination of length-d words over the basis letters."""

    def __init__(self, space: SymplecticSpace, d: int, coeffs=None):
        self.space = space
        self.d = d
        self.coeffs = {}
        for word, c in (coeffs or {}).items():
            if len(word) != d:
                raise ValueError(f"word {word} has length {len(word)}, expected {d}")
            f = Fraction(c)
            if f:
                self.coeffs[tuple(word)] = f

    def __add__(self, other: "TensorVector") -> "TensorVector":
        assert other.space == self.space and other.d == self.d
        out = dict(self.coeffs)
        for w, c in other.coeffs.items():
            s = out.get(w, Fraction(0)) + c
            if s:
                out[w] = s
            elif w in out:
                del out[w]
        return TensorVector(self.space, self.d, out)

    def __sub__(self, other):
        return self + (-1) * other

    def __rmul__(self, scalar) -> "TensorVector":
        s = Fraction(scalar)
        if not s:
            return TensorVector(self.space, self.d)
        return TensorVector(self.space, self.d,
                            {w: s * c for w, c in self.coeffs.items()})

    def __neg__(self):
        return (-1) * self

    def __eq__(self, other):
        return (isinstance(other, TensorVector) and other.space == self.space
                and other.d == self.d and other.coeffs == self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def permute_positions(self, perm) -> "TensorVector":
        """Apply a position permutation: output position i gets w[perm[i]]."""
        out = {}
        for w, c in self.coeffs.items():
            nw = tuple(w[perm[i]] for i in range(self.d))
            out[nw] = out.get(nw, Fraction(0)) + c
        return TensorVector(self.space, self.d, out)

    def to_json(self) -> str:
        terms = [
            {"word": [self.space.label_name(x) for x in w], "coeff": str(c)}
            for w, c in sorted(self.coeffs.items())
        ]
        return json.dumps({"g": self.space.g, "d": self.d, "terms": terms})

    @classmethod
    def from_json(cls, text: str) -> "TensorVector":
        data = json.loads(text)
        space = SymplecticSpace(data["g"])
        coeffs = {}
        for term in data["terms"]:
            word = tuple(space.letter_of(x) for x in term["word"])
            coeffs[word] = coeffs.get(word, Fraction(0)) + Fraction(term["coeff"])
        return cls(space, data["d"], coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "TensorVector(0)"
        bits = []
        for w, c in sorted(self.coeffs.items())[:6]:
            name = "".join(self.space.label_name(x) for x in w) or "()"
            bits.append(f"{c}*{name}")
        more = "..." if len(self.coeffs) > 6 else ""
        return "TensorVector(" + " + ".join(bits) + more + ")"


def word_vector(space: SymplecticSpace, word) -> TensorVector:
    return TensorVector(space, len(word), {tuple(word): 1})


def contract(v: TensorVector, i: int, j: int) -> TensorVector:
    """Pairwise contraction c_ij (1-based positions, i < j)."""
    if not 1 <= i < j <= v.d:
        raise ValueError(f"positions ({i},{j}) out of range for d={v.d}")
    omega = v.space.omega
    out = {}
    for w, c in v.coeffs.items():
        o = omega(w[i - 1], w[j - 1])
        if o:
            nw = w[:i - 1] + w[i:j - 1] + w[j:]
            s = out.get(nw, Fraction(0)) + o * c
            if s:
                out[nw] = s
            elif nw in out:
                del out[nw]
    return TensorVector(v.space, v.d - 2, out)


def insert_omega(v: TensorVector, i: int, j: int) -> TensorVector:
    """Insert the canonical form sum_k (a_k b_k - b_k a_k) at positions (i, j).

    Positions are 1-based slots of the output word, which has length d + 2.
    """
    d_out = v.d + 2
    if not 1 <= i < j <= d_out:
        raise ValueError(f"positions ({i},{j}) out of range for output length {d_out}")
    out = {}
    for w, c in v.coeffs.items():
        for k in range(v.space.g):
            for x, y, sign in ((2 * k, 2 * k + 1, 1), (2 * k + 1, 2 * k, -1)):
                nw = list(w)
                nw.insert(i - 1, x)
                nw.insert(j - 1, y)
                nw = tuple(nw)
                s = out.get(nw, Fraction(0)) + sign * c
                if s:
                    out[nw] = s
                elif nw in out:
                    del out[nw]
    return TensorVector(v.space, d_out, out)


def _letter_counts_for_weight(g: int, d: int, wt: tuple):
    """Yield (a-count, b-count) per index realizing the weight with d letters."""

    def rec(k, remaining):
        if k == g:
            if remaining == 0:
                yield []
            return
        lo = abs(wt[k])
        for m in range(lo, remaining + 1, 2):
            na = (m + wt[k]) // 2
            for rest in rec(k + 1, remaining - m):
                yield [(na, m - na)] + rest

    yield from rec(0, d)


def _multiset_words(letters: list):
    """All distinct arrangements of a letter multiset, lexicographic."""
    counts = {}
    for x in letters:
        counts[x] = counts.get(x, 0) + 1
    keys = sorted(counts)
    n = len(letters)
    out = []

    def rec(prefix):
        if len(prefix) == n:
            out.append(tuple(prefix))
            return
        for x in keys:
            if counts[x]:
                counts[x] -= 1
                prefix.append(x)
                rec(prefix)
                prefix.pop()
                counts[x] += 1

    rec([])
    return out


def words_of_weight(space: SymplecticSpace, d: int, wt: tuple):
    """All length-d words with the given torus weight, lexicographic order."""
    out = []
    for cnt in _letter_counts_for_weight(space.g, d, wt):
        letters = []
        for k, (na, nb) in enumerate(cnt):
            letters += [2 * k] * na + [2 * k + 1] * nb
        out.extend(_multiset_words(letters))
    return sorted(out)


def all_weights(g: int, d: int):
    """All torus weights realized by length-d words, sorted."""
    out = set()

    def rec(k, remaining, acc):
        if k == g:
            if remaining == 0:
                out.add(tuple(acc))
            return
        for m in range(remaining + 1):
            for na in range(m + 1):
                acc.append(2 * na - m)
                rec(k + 1, remaining - m, acc)
                acc.pop()

    rec(0, d, [])
    return sorted(out)


@lru_cache(maxsize=None)
def _weight_block(g: int, d: int, wt: tuple):
    space = SymplecticSpace(g)
    words = words_of_weight(space, d, wt)
    index = {w: i for i, w in enumerate(words)}
    return words, index


@lru_cache(maxsize=None)
def _harmonic_block(g: int, d: int, wt: tuple):
    """Kernel of all pairwise contractions inside one weight block.

    Returns (words, index, Subspace over the block coordinates).
    """
    from .linalg import SparseMatrix, Subspace, kernel_basis

    space = SymplecticSpace(g)
    words, index = _weight_block(g, d, wt)
    if d < 2:
        basis = [{i: Fraction(1)} for i in range(len(words))]
        return words, index, Subspace(len(words), basis, _trusted=True)
    rows = {}
    for src, w in enumerate(words):
        for i, j in combinations(range(d), 2):
            o = space.omega(w[i], w[j])
            if o:
                target = (i, j, w[:i] + w[i + 1:j] + w[j + 1:])
                rows.setdefault(target, {})[src] = o
    mat = SparseMatrix.from_rows(len(words), [rows[k] for k in sorted(rows)])
    return words, index, kernel_basis(mat)


@lru_cache(maxsize=None)
def _insertion_block(g: int, d: int, wt: tuple):
    """Span of omega-insertions intersected with one weight block (as rows)."""
    from .linalg import RowBasis

    space = SymplecticSpace(g)
    words, index = _weight_block(g, d, wt)
    rb = RowBasis()
    basis_rows = []
    if d >= 2:
        shorter = words_of_weight(space, d - 2, wt)
        for u in shorter:
            base = TensorVector(space, d - 2, {u: 1})
            for i, j in combinations(range(1, d + 1), 2):
                ins = insert_omega(base, i, j)
                row = {index[w]: c for w, c in ins.coeffs.items()}
                if rb.add(row):
                    basis_rows.append(row)
    return basis_rows


class HarmonicBasis:
    """Exact basis of V^<d> = intersection of kernels of all contractions."""

    def __init__(self, space: SymplecticSpace, d: int):
        self.space = space
        self.d = d
        wts = all_weights(space.g, d)
        self.blocks = {}
        self.dim = 0
        for wt in wts:
            words, index, ker = _harmonic_block(space.g, d, wt)
            self.blocks[wt] = (words, index, ker)
            self.dim += ker.dim

    def vectors(self):
        """Basis as TensorVectors, weight blocks in sorted order."""
        out = []
        for wt in sorted(self.blocks):
            words, _, ker = self.blocks[wt]
            for vec in ker.basis:
                out.append(TensorVector(self.space, self.d,
                                        {words[i]: c for i, c in vec.items()}))
        return out

    def contains(self, v: TensorVector) -> bool:
        return project_pi(v) == v


def harmonic_subspace(space: SymplecticSpace, d: int) -> HarmonicBasis:
    """Exact basis of the intersection of the kernels of all contractions."""
    if d < 0:
        raise ValueError("d must be nonnegative")
    return HarmonicBasis(space, d)


@lru_cache(maxsize=None)
def _pi_solver(g: int, d: int, wt: tuple):
    """Echelonized [harmonic | insertion] system for one weight block.

    Returns (words, index, pivots, n, h_dim) where rows carry unit tags at
    columns >= n: tags < n+h_dim identify harmonic coordinates.
    """
    from .linalg import _combine, _to_int_row

    words, index, ker = _harmonic_block(g, d, wt)
    ins_rows = _insertion_block(g, d, wt)
    n = len(words)
    h_dim = ker.dim
    if h_dim + len(ins_rows) != n:
        raise StableRangeError(
            g, d,
            f"dim V^<d> ({h_dim}) + dim insertions ({len(ins_rows)}) != "
            f"block dim ({n}) at weight {wt}")
    pivots = {}
    tag = 0
    for row_src in list(ker.basis) + ins_rows:
        row = dict(row_src)
        row[n + tag] = Fraction(1)
        tag += 1
        row = _to_int_row(row)
        while True:
            ambient = [c for c in row if c < n]
            if not ambient:
                raise StableRangeError(
                    g, d, f"harmonic/insertion spans overlap at weight {wt}")
            lead = min(ambient)
            if lead not in pivots:
                pivots[lead] = row
                break
            row = _combine(row, pivots[lead], lead)
    return words, index, pivots, n, h_dim


def project_pi(v: TensorVector) -> TensorVector:
    """Projection onto V^<d> along the span of all omega-insertions."""
    if v.d < 2:
        return v
    space = v.space
    by_weight = {}
    for w, c in v.coeffs.items():
        by_weight.setdefault(padded_weight(w, space.g), {})[w] = c
    harm_coords = {}
    total = TensorVector(space, v.d)
    for wt, chunk in sorted(by_weight.items()):
        words, index, pivots, n, h_dim = _pi_solver(space.g, v.d, wt)
        work = {index[w]: Fraction(c) for w, c in chunk.items()}
        while True:
            ambient = [c for c in work if c < n and work[c]]
            if not ambient:
                break
            lead = min(ambient)
            piv = pivots[lead]
            factor = work[lead] / piv[lead]
            for c, val in piv.items():
                s = work.get(c, Fraction(0)) - factor * val
                if s:
                    work[c] = s
                elif c in work:
                    del work[c]
        # tags < h_dim are harmonic coordinates (with a minus from reduction)
        _, _, ker = _harmonic_block(space.g, v.d, wt)
        out = {}
        for c, val in work.items():
            t = c - n
            if t < h_dim and val:
                for col, bv in ker.basis[t].items():
                    out[col] = out.get(col, Fraction(0)) - val * bv
        total = total + TensorVector(
            space, v.d, {words[i]: c for i, c in out.items() if c})
    return total
