"""Free Lie algebra on the symplectic letters, Lyndon calculus, tree space.

Lie elements are stored in the Lyndon basis (alphabet order a1 < b1 < a2 <
...), with brackets computed through the tensor algebra: the standard
bracketing of a Lyndon word embeds as the word itself plus lexicographically
larger terms, so conversion back from a Lie element of the tensor algebra is
a triangular elimination on leading words.  That also gives a built-in check
that intermediate results really are Lie elements.

Tree elements live in V (x) L_{d+1}.  The degree-d tree space T_d is the
kernel of x (x) u -> [x, u]; equivalently the derivations killing the
symplectic form, which is why it is closed under the derivation bracket
used by `br`.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .symplectic import SymplecticSpace, TensorVector


# ---------------------------------------------------------------------------
# Lyndon words


@lru_cache(maxsize=None)
def lyndon_words(n_letters: int, k: int) -> tuple:
    """All Lyndon words of length k over 0..n_letters-1 (Duval), sorted."""
    out = []
    w = [-1]
    while w:
        w[-1] += 1
        m = len(w)
        if m == k:
            out.append(tuple(w))
        while len(w) < k:
            w.append(w[-m])
        while w and w[-1] == n_letters - 1:
            w.pop()
    return tuple(sorted(out))


@lru_cache(maxsize=None)
def is_lyndon(word: tuple) -> bool:
    if not word:
        return False
    n = len(word)
    for i in range(1, n):
        if word[i:] + word[:i] <= word:
            return False
    return True


@lru_cache(maxsize=None)
def standard_bracketing(word: tuple):
    """Right-normed standard bracketing of a Lyndon word as nested tuples.

    For |w| > 1, split at the longest proper Lyndon suffix.
    """
    if len(word) == 1:
        return word[0]
    for i in range(1, len(word)):
        if is_lyndon(word[i:]):
            return (standard_bracketing(word[:i]), standard_bracketing(word[i:]))
    raise AssertionError(f"{word} is not Lyndon")


def _concat_product(a: dict, b: dict) -> dict:
    out = {}
    for wa, ca in a.items():
        for wb, cb in b.items():
            w = wa + wb
            s = out.get(w, 0) + ca * cb
            if s:
                out[w] = s
            elif w in out:
                del out[w]
    return out


def _tensor_bracket(a: dict, b: dict) -> dict:
    ab = _concat_product(a, b)
    ba = _concat_product(b, a)
    for w, c in ba.items():
        s = ab.get(w, 0) - c
        if s:
            ab[w] = s
        elif w in ab:
            del ab[w]
    return ab


def _expr_to_tensor(expr) -> dict:
    if isinstance(expr, int):
        return {(expr,): 1}
    if isinstance(expr, tuple) and len(expr) == 2:
        return _tensor_bracket(_expr_to_tensor(expr[0]), _expr_to_tensor(expr[1]))
    raise ValueError(f"malformed bracket expression: {expr!r}")


@lru_cache(maxsize=None)
def embed_lyndon(word: tuple) -> tuple:
    """Tensor expansion of the standard bracketing, as sorted (word, int) pairs.

    Leading (lexicographically minimal) term is `word` itself with
    coefficient 1; that triangularity drives `lie_from_tensor`.
    """
    t = _expr_to_tensor(standard_bracketing(word))
    assert min(t) == word and t[word] == 1
    return tuple(sorted(t.items()))


class LiePoly:
    """Element of L_k(V) in the Lyndon basis."""

    def __init__(self, space: SymplecticSpace, k: int, coeffs=None):
        self.space = space
        self.k = k
        self.coeffs = {}
        for w, c in (coeffs or {}).items():
            f = Fraction(c)
            if not f:
                continue
            if len(w) != k:
                raise ValueError(f"word {w} has wrong degree")
            if not is_lyndon(tuple(w)):
                raise ValueError(f"{w} is not a Lyndon word")
            self.coeffs[tuple(w)] = f

    def __add__(self, other):
        out = dict(self.coeffs)
        for w, c in other.coeffs.items():
            s = out.get(w, Fraction(0)) + c
            if s:
                out[w] = s
            elif w in out:
                del out[w]
        return LiePoly(self.space, self.k, out)

    def __rmul__(self, scalar):
        s = Fraction(scalar)
        return LiePoly(self.space, self.k,
                       {w: s * c for w, c in self.coeffs.items()} if s else {})

    def __sub__(self, other):
        return self + (-1) * other

    def __eq__(self, other):
        return (isinstance(other, LiePoly) and other.k == self.k
                and other.coeffs == self.coeffs)

    def is_zero(self):
        return not self.coeffs

    def to_tensor(self) -> dict:
        out = {}
        for w, c in self.coeffs.items():
            for tw, tc in embed_lyndon(w):
                s = out.get(tw, Fraction(0)) + c * tc
                if s:
                    out[tw] = s
                elif tw in out:
                    del out[tw]
        return out

    def __repr__(self):
        if not self.coeffs:
            return "LiePoly(0)"
        names = []
        for w, c in sorted(self.coeffs.items())[:5]:
            names.append(f"{c}*{''.join(self.space.label_name(x) for x in w)}")
        return "LiePoly(" + " + ".join(names) + (")" if len(self.coeffs) <= 5 else " ...)")


def lie_from_tensor(space: SymplecticSpace, tensor: dict, k: int) -> LiePoly:
    """Convert a Lie element of the tensor algebra back to the Lyndon basis."""
    work = {w: Fraction(c) for w, c in tensor.items() if c}
    out = {}
    while work:
        w = min(work)
        if not is_lyndon(w):
            raise ValueError(
                f"tensor element is not a Lie element (leading word {w})")
        c = work[w]
        out[w] = c
        for tw, tc in embed_lyndon(w):
            s = work.get(tw, Fraction(0)) - c * tc
            if s:
                work[tw] = s
            elif tw in work:
                del work[tw]
    return LiePoly(space, k, out)


def lie_normal_form(space: SymplecticSpace, expr) -> LiePoly:
    """Unique Lyndon-basis form of a nested-tuple bracket expression.

    Letters are ints (or basis label names); `(p, q)` denotes the bracket.
    """

    def convert(e):
        if isinstance(e, str):
            return space.letter_of(e)
        if isinstance(e, int):
            if not 0 <= e < space.dim:
                raise ValueError(f"letter {e} outside alphabet of size {space.dim}")
            return e
        if isinstance(e, tuple) and len(e) == 2:
            return (convert(e[0]), convert(e[1]))
        raise ValueError(f"malformed bracket expression: {e!r}")

    expr = convert(expr)

    def degree(e):
        return 1 if isinstance(e, int) else degree(e[0]) + degree(e[1])

    k = degree(expr)
    return lie_from_tensor(space, _expr_to_tensor(expr), k)


def _mobius(n: int) -> int:
    result, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    if n > 1:
        result = -result
    return result


def lie_dim(space: SymplecticSpace, k: int) -> int:
    """Witt necklace formula: (1/k) sum_{m|k} mu(m) (2g)^(k/m)."""
    if k < 1:
        raise ValueError("degree must be >= 1")
    n = space.dim
    total = sum(_mobius(m) * n ** (k // m) for m in range(1, k + 1) if k % m == 0)
    assert total % k == 0
    return total // k


def embed_tensor(u: LiePoly) -> TensorVector:
    """Canonical embedding L_k -> V^(x)k via [x, y] -> xy - yx."""
    return TensorVector(u.space, u.k, u.to_tensor())


# ---------------------------------------------------------------------------
# Tree elements: V (x) L_{d+1}


class TreeElement:
    """Element of V (x) L_{d+1}, stored as (letter, Lyndon word) -> coeff."""

    def __init__(self, space: SymplecticSpace, d: int, coeffs=None):
        self.space = space
        self.d = d
        self.coeffs = {}
        for (x, w), c in (coeffs or {}).items():
            f = Fraction(c)
            if not f:
                continue
            if len(w) != d + 1:
                raise ValueError(f"Lie factor {w} has degree {len(w)}, "
                                 f"expected {d + 1}")
            self.coeffs[(x, tuple(w))] = f

    def __add__(self, other):
        assert other.d == self.d
        out = dict(self.coeffs)
        for key, c in other.coeffs.items():
            s = out.get(key, Fraction(0)) + c
            if s:
                out[key] = s
            elif key in out:
                del out[key]
        return TreeElement(self.space, self.d, out)

    def __sub__(self, other):
        return self + (-1) * other

    def __rmul__(self, scalar):
        s = Fraction(scalar)
        return TreeElement(self.space, self.d,
                           {k: s * c for k, c in self.coeffs.items()} if s else {})

    def __eq__(self, other):
        return (isinstance(other, TreeElement) and other.d == self.d
                and other.coeffs == self.coeffs)

    def is_zero(self):
        return not self.coeffs

    def terms(self):
        """[(coeff, letter, LiePoly)] split by the V factor."""
        by_letter = {}
        for (x, w), c in self.coeffs.items():
            by_letter.setdefault(x, {})[w] = c
        return [(x, LiePoly(self.space, self.d + 1, ws))
                for x, ws in sorted(by_letter.items())]

    def content(self):
        """Letter-count vectors appearing in this element."""
        out = set()
        for (x, w) in self.coeffs:
            cnt = [0] * self.space.dim
            cnt[x] += 1
            for y in w:
                cnt[y] += 1
            out.add(tuple(cnt))
        return out

    def __repr__(self):
        bits = []
        for (x, w), c in sorted(self.coeffs.items())[:5]:
            bits.append(f"{c}*{self.space.label_name(x)}(x)"
                        f"{''.join(self.space.label_name(y) for y in w)}")
        tail = " ...)" if len(self.coeffs) > 5 else ")"
        return "TreeElement(" + " + ".join(bits) + tail if bits else "TreeElement(0)"


def bracket_map(t: TreeElement) -> LiePoly:
    """x (x) u -> [x, u], extended linearly; T_d is its kernel."""
    space = t.space
    tensor = {}
    for (x, w), c in t.coeffs.items():
        for tw, tc in embed_lyndon(w):
            for word, sign in (((x,) + tw, 1), (tw + (x,), -1)):
                s = tensor.get(word, Fraction(0)) + sign * c * tc
                if s:
                    tensor[word] = s
                elif word in tensor:
                    del tensor[word]
    return lie_from_tensor(space, tensor, t.d + 2)


def tripod(space: SymplecticSpace, x: int, y: int, z: int) -> TreeElement:
    """x(x)[y,z] + y(x)[z,x] + z(x)[x,y]; alternating, kernel of bracket_map."""
    out = TreeElement(space, 1)
    for p, q, r in ((x, y, z), (y, z, x), (z, x, y)):
        u = lie_normal_form(space, (q, r))
        out = out + TreeElement(space, 1, {(p, w): c for w, c in u.coeffs.items()})
    return out


def basis_tripods(space: SymplecticSpace):
    """Tripods on strictly increasing letter triples (the nonzero ones)."""
    from itertools import combinations

    return [tripod(space, x, y, z)
            for x, y, z in combinations(range(space.dim), 3)]


# ---------------------------------------------------------------------------
# Derivations (tensor-valued on letters) and the bracket br


class Derivation:
    """Derivation of the tensor algebra given by tensor values on letters.

    `degree` matches the tree-element degree: letters map to length
    degree + 1 tensors, so word lengths rise by `degree`.
    """

    def __init__(self, space: SymplecticSpace, degree: int, values: dict):
        self.space = space
        self.degree = degree
        self.values = values  # letter -> tensor dict

    def apply_tensor(self, tensor: dict) -> dict:
        out = {}
        for w, c in tensor.items():
            for i, letter in enumerate(w):
                val = self.values.get(letter)
                if not val:
                    continue
                pre, post = w[:i], w[i + 1:]
                for vw, vc in val.items():
                    nw = pre + vw + post
                    s = out.get(nw, Fraction(0)) + c * vc
                    if s:
                        out[nw] = s
                    elif nw in out:
                        del out[nw]
        return out


def tree_to_derivation(t: TreeElement) -> Derivation:
    """x (x) u acts as y -> omega(x, y) u on letters."""
    space = t.space
    values = {y: {} for y in space.letters()}
    for (x, w), c in t.coeffs.items():
        emb = embed_lyndon(w)
        for y in space.letters():
            o = space.omega(x, y)
            if o:
                tgt = values[y]
                for tw, tc in emb:
                    s = tgt.get(tw, Fraction(0)) + o * c * tc
                    if s:
                        tgt[tw] = s
                    elif tw in tgt:
                        del tgt[tw]
    return Derivation(space, t.d, {y: v for y, v in values.items() if v})


def derivation_to_tree(D: Derivation) -> TreeElement:
    """Inverse of tree_to_derivation: sum_k a_k (x) D(b_k) - b_k (x) D(a_k)."""
    space = D.space
    coeffs = {}
    for k in range(space.g):
        for x, sign in ((2 * k, 1), (2 * k + 1, -1)):
            partner = x + 1 if sign == 1 else x - 1
            val = D.values.get(partner)
            if not val:
                continue
            poly = lie_from_tensor(space, val, D.degree + 1)
            for w, c in poly.coeffs.items():
                key = (x, w)
                s = coeffs.get(key, Fraction(0)) + sign * c
                if s:
                    coeffs[key] = s
                elif key in coeffs:
                    del coeffs[key]
    return TreeElement(space, D.degree, coeffs)


def derivation_bracket(t1: TreeElement, t2: TreeElement) -> TreeElement:
    """Commutator of the associated derivations, converted back."""
    space = t1.space
    d1, d2 = tree_to_derivation(t1), tree_to_derivation(t2)
    values = {}
    for y in space.letters():
        v = {}
        for src, dst, sign in ((d2, d1, 1), (d1, d2, -1)):
            base = src.values.get(y)
            if not base:
                continue
            for w, c in dst.apply_tensor(base).items():
                s = v.get(w, Fraction(0)) + sign * c
                if s:
                    v[w] = s
                elif w in v:
                    del v[w]
        if v:
            values[y] = v
    return derivation_to_tree(
        Derivation(space, d1.degree + d2.degree, values))


def br(factors: list) -> TreeElement:
    """Left-iterated derivation bracket [[t1,t2],t3],...  of T_1 elements.

    Each factor must lie in T_1 (checked via bracket_map); the output lies in
    T_d, which is asserted.
    """
    if not factors:
        raise ValueError("br needs at least one factor")
    for i, t in enumerate(factors):
        if t.d != 1:
            raise ValueError(f"factor {i} has degree {t.d}, expected 1")
        if not bracket_map(t).is_zero():
            raise ValueError(f"factor {i} is not in T_1")
    acc = factors[0]
    for t in factors[1:]:
        acc = derivation_bracket(acc, t)
    assert bracket_map(acc).is_zero(), "br output escaped the tree space"
    return acc


# ---------------------------------------------------------------------------
# The tree space T_d as an explicit kernel


def _letter_contents(n_letters: int, total: int):
    out = []

    def rec(k, remaining, acc):
        if k == n_letters - 1:
            acc.append(remaining)
            out.append(tuple(acc))
            acc.pop()
            return
        for m in range(remaining + 1):
            acc.append(m)
            rec(k + 1, remaining - m, acc)
            acc.pop()

    rec(0, total, [])
    return out


@lru_cache(maxsize=None)
def _lyndon_by_content(n_letters: int, k: int):
    buckets = {}
    for w in lyndon_words(n_letters, k):
        cnt = [0] * n_letters
        for x in w:
            cnt[x] += 1
        buckets.setdefault(tuple(cnt), []).append(w)
    return buckets


def word_content(n_letters: int, letters) -> tuple:
    cnt = [0] * n_letters
    for x in letters:
        cnt[x] += 1
    return tuple(cnt)


@lru_cache(maxsize=None)
def _t_space_block(g: int, d: int, content: tuple):
    """Kernel of bracket_map on the (letter, Lyndon) pairs of one content."""
    from .linalg import SparseMatrix, kernel_basis

    space = SymplecticSpace(g)
    n = space.dim
    pairs = []
    for x in range(n):
        if content[x] == 0:
            continue
        sub = list(content)
        sub[x] -= 1
        for w in _lyndon_by_content(n, d + 1).get(tuple(sub), ()):
            pairs.append((x, w))
    if not pairs:
        return (), None
    pair_index = {p: i for i, p in enumerate(pairs)}
    targets = {w: i for i, w in
               enumerate(_lyndon_by_content(n, d + 2).get(content, ()))}
    rows = [dict() for _ in targets]
    for j, (x, w) in enumerate(pairs):
        poly = bracket_map(TreeElement(space, d, {(x, w): 1}))
        for tw, c in poly.coeffs.items():
            rows[targets[tw]][j] = c
    ker = kernel_basis(SparseMatrix.from_rows(len(pairs), rows))
    return tuple(pairs), ker


class TSpaceBasis:
    """Basis of T_d(V) = ker(bracket_map), organized by letter content."""

    def __init__(self, space: SymplecticSpace, d: int):
        self.space = space
        self.d = d
        self.blocks = {}
        self.dim = 0
        for content in _letter_contents(space.dim, d + 2):
            pairs, ker = _t_space_block(space.g, d, content)
            if ker is not None and ker.dim:
                self.blocks[content] = (pairs, ker)
                self.dim += ker.dim

    def vectors(self):
        out = []
        for content in sorted(self.blocks):
            pairs, ker = self.blocks[content]
            for vec in ker.basis:
                out.append(TreeElement(
                    self.space, self.d,
                    {pairs[i]: c for i, c in vec.items()}))
        return out

    def contains(self, t: TreeElement) -> bool:
        return bracket_map(t).is_zero()


def t_space_basis(space: SymplecticSpace, d: int) -> TSpaceBasis:
    """Exact basis of T_d(V) inside V (x) L_{d+1}.

    At d = 1 the span of all tripods is checked against the kernel; a
    mismatch would mean the tree-space identification fails at this (d, g)
    and is reported rather than silently accepted.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    basis = TSpaceBasis(space, d)
    if d == 1:
        from .linalg import RowBasis

        rb = RowBasis()
        keys = sorted({key for t in basis_tripods(space) for key in t.coeffs})
        key_index = {k: i for i, k in enumerate(keys)}
        for t in basis_tripods(space):
            rb.add({key_index[k]: c for k, c in t.coeffs.items()})
        if rb.rank != basis.dim:
            raise RuntimeError(
                f"tripod span (dim {rb.rank}) differs from ker(bracket_map) "
                f"(dim {basis.dim}) at g={space.g}: tree-space realization "
                f"is not valid here")
    return basis
