"""Tuples, positive arrays and the index sets built from them.

Characters are stored as exponents of the fixed generator g of F_q^×, so the
array (ε; s) is ``Array(s=(s_1, ..., s_n), e=(e_1, ..., e_n))`` with
ε_i = g^{e_i}.  Exponents are kept reduced mod q - 1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .errors import MalformedInput, NotApplicable, ResourceLimit

WEIGHT_LIMIT = 14


@dataclass(frozen=True)
class Array:
    s: tuple
    e: tuple

    def __post_init__(self):
        if len(self.s) != len(self.e):
            raise MalformedInput("tuple and character vector have different depths")

    @property
    def weight(self):
        return sum(self.s)

    @property
    def depth(self):
        return len(self.s)

    def chi(self, q):
        """Exponent of the character ∏ ε_i."""
        return sum(self.e) % (q - 1)

    def head(self):
        return Array(self.s[:1], self.e[:1])

    def tail(self):
        return Array(self.s[1:], self.e[1:])

    def prepend(self, s, e):
        return Array((s,) + self.s, (e,) + self.e)

    def concat(self, other):
        return Array(self.s + other.s, self.e + other.e)

    def is_trivial(self):
        return not any(self.e)

    def key(self):
        return (self.s, self.e)

    def __lt__(self, other):
        return self.key() < other.key()

    def __str__(self):
        return format_array(self)

    def __repr__(self):
        return f"Array({format_array(self)})"


EMPTY = Array((), ())


def make_array(s, e=None, q=None):
    s = tuple(int(x) for x in s)
    if any(x < 1 for x in s):
        raise MalformedInput(f"entries must be positive: {s}")
    if e is None:
        e = (0,) * len(s)
    e = tuple(int(x) for x in e)
    if q is not None:
        e = tuple(x % (q - 1) for x in e)
    return Array(s, e)


def format_array(a: Array) -> str:
    return ",".join(map(str, a.s)) + ";" + ",".join(map(str, a.e))


def format_tuple(s) -> str:
    return ",".join(map(str, s))


def parse_array(text: str, q=None) -> Array:
    text = text.strip().strip("()")
    if text in ("", ";"):
        return EMPTY
    if ";" in text:
        s_txt, e_txt = text.split(";", 1)
    else:
        s_txt, e_txt = text, ""
    try:
        s = [int(x) for x in s_txt.split(",") if x.strip()]
        e = [int(x) for x in e_txt.split(",") if x.strip()] if e_txt.strip() else [0] * len(s)
    except ValueError as exc:
        raise MalformedInput(f"cannot parse array {text!r}") from exc
    if len(s) != len(e):
        raise MalformedInput(f"array {text!r}: depth mismatch")
    return make_array(s, e, q)


def parse_tuple(text: str) -> tuple:
    text = text.strip().strip("()")
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise MalformedInput(f"cannot parse tuple {text!r}") from exc


# -- orders and transforms

def initial_tuple(s, q):
    out = []
    for x in s:
        if x > q:
            break
        out.append(x)
    return tuple(out)


def t_transform(s, i):
    s = tuple(s) + (0,) * max(0, i - len(s))
    return (sum(s[:i]),) + s[i:]


def init_precedes(a, b):
    """The order ≺ on initial tuples (lexicographic; a proper prefix is smaller)."""
    return tuple(a) < tuple(b)


def _padded(a: Array, n):
    return a.s + (0,) * (n - a.depth), a.e + (0,) * (n - a.depth)


def array_add(a: Array, b: Array, q) -> Array:
    n = max(a.depth, b.depth)
    sa, ea = _padded(a, n)
    sb, eb = _padded(b, n)
    return Array(tuple(x + y for x, y in zip(sa, sb)),
                 tuple((x + y) % (q - 1) for x, y in zip(ea, eb)))


def array_leq(a: Array, b: Array, q) -> bool:
    if a.chi(q) != b.chi(q) or a.weight != b.weight:
        return False
    n = max(a.depth, b.depth)
    sa, _ = _padded(a, n)
    sb, _ = _padded(b, n)
    pa = pb = 0
    for x, y in zip(sa, sb):
        pa += x
        pb += y
        if pa > pb:
            return False
    return True


def tuple_leq(s, t):
    """Partial-sum domination for tuples of equal weight."""
    if sum(s) != sum(t):
        return False
    n = max(len(s), len(t))
    s = tuple(s) + (0,) * (n - len(s))
    t = tuple(t) + (0,) * (n - len(t))
    return all(x <= y for x, y in zip(itertools.accumulate(s), itertools.accumulate(t)))


def is_k_admissible(s, k, q) -> bool:
    s = tuple(s)
    padded = s + (0,) * max(0, k - len(s))
    if any(x > q for x in padded[:k]):
        return False
    r = len(s)
    if 1 <= r <= k and s[-1] == q and all(x <= q for x in s[:-1]):
        return False
    return True


def in_AT(s, q) -> bool:
    return len(s) > 0 and all(x <= q for x in s[:-1]) and s[-1] < q


# -- enumerations

def _guard(w):
    if w > WEIGHT_LIMIT:
        raise ResourceLimit(f"weight {w} exceeds the enumeration limit {WEIGHT_LIMIT}")


@lru_cache(maxsize=None)
def compositions(w, max_part=None):
    """All compositions of w in lexicographic order."""
    if w == 0:
        return ((),)
    out = []
    top = w if max_part is None else min(w, max_part)
    for first in range(1, top + 1):
        for rest in compositions(w - first, max_part):
            out.append((first,) + rest)
    return tuple(sorted(out))


def enum_J(w, q):
    _guard(w)
    return [s for s in compositions(w) if in_AT(s, q)]


def enum_Jprime(w, q):
    _guard(w)
    return [s for s in compositions(w) if all(x % q for x in s)]


def iota(s, q):
    if any(x % q == 0 for x in s):
        raise NotApplicable(f"iota needs entries prime to q: {s}")
    out = []
    for x in s:
        h, r = divmod(x, q)
        out.extend([q] * h)
        out.append(r)
    return tuple(out)


def _blocks(s, q):
    """Split a J_w tuple into runs (q, ..., q, r) with r < q."""
    if not in_AT(s, q):
        raise NotApplicable(f"{s} is not in J_w")
    blocks, start = [], 0
    for i, x in enumerate(s):
        if x < q:
            blocks.append((start, i))
            start = i + 1
    return blocks


def iota_inverse(s, q):
    return tuple(sum(s[a:b + 1]) for a, b in _blocks(s, q))


def _char_vectors(n, q):
    return itertools.product(range(q - 1), repeat=n)


def _with_chars(tuples, q):
    out = []
    for s in tuples:
        for e in _char_vectors(len(s), q):
            out.append(Array(s, e))
    return out


def enum_AT(w, q):
    return _with_chars(enum_J(w, q), q)


def enum_AS(w, q):
    return _with_chars(enum_Jprime(w, q), q)


enum_AJ = enum_AS


def enum_S(w, q):
    return [Array(s, (0,) * len(s)) for s in enum_Jprime(w, q)]


def enum_AT_trivial(w, q):
    return [Array(s, (0,) * len(s)) for s in enum_J(w, q)]


def enum_AJ1(w, q):
    out = []
    for s in enum_J(w, q):
        free = [i for i, x in enumerate(s) if x != q]
        for sub in _char_vectors(len(free), q):
            e = [0] * len(s)
            for i, x in zip(free, sub):
                e[i] = x
            out.append(Array(s, tuple(e)))
    return out


def phi(a: Array, q) -> Array:
    if any(x % q == 0 for x in a.s):
        raise NotApplicable(f"phi needs entries prime to q: {a}")
    s, e = [], []
    for x, c in zip(a.s, a.e):
        h, r = divmod(x, q)
        s.extend([q] * h + [r])
        e.extend([0] * h + [c])
    return Array(tuple(s), tuple(e))


def collapse(b: Array, q) -> Array:
    """AT_w -> AS_w: merge each run (q, ..., q, r), multiplying its characters.

    On AJ¹_w this is the inverse of :func:`phi`.
    """
    s, e = [], []
    for lo, hi in _blocks(b.s, q):
        s.append(sum(b.s[lo:hi + 1]))
        e.append(sum(b.e[lo:hi + 1]) % (q - 1))
    return Array(tuple(s), tuple(e))


def phi_inverse(b: Array, q) -> Array:
    if any(x == q and c for x, c in zip(b.s, b.e)):
        raise NotApplicable(f"{b} has a nontrivial character on an entry equal to q")
    return collapse(b, q)


def all_arrays(w, q, max_entry=None, max_depth=None):
    """Every array of weight w (entries <= max_entry, depth <= max_depth)."""
    _guard(w)
    out = []
    for s in compositions(w, max_entry):
        if max_depth is None or len(s) <= max_depth:
            out.extend(Array(s, e) for e in _char_vectors(len(s), q))
    return out


# -- counting sequences

@lru_cache(maxsize=None)
def count_d(w, q):
    if w == 0:
        return 1
    if w < q:
        return 2 ** (w - 1)
    if w == q:
        return 2 ** (q - 1) - 1
    return sum(count_d(w - i, q) for i in range(1, q + 1))


@lru_cache(maxsize=None)
def count_s(w, q):
    if w < q:
        return (q - 1) * q ** (w - 1)
    if w == q:
        return (q - 1) * (q ** (w - 1) - 1)
    return (q - 1) * sum(count_s(w - i, q) for i in range(1, q)) + count_s(w - q, q)


@lru_cache(maxsize=None)
def count_t(w, q):
    if w <= q:
        return count_s(w, q)
    return (q - 1) * sum(count_t(w - i, q) for i in range(1, q + 1))
