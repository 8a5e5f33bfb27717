"""Vertex names: binary trees of signed keys with l/r descent.

A key is a nonzero int; a negative value is the opposite-signed copy of the
same key.  Canonical names are built from :class:`Leaf` and :class:`Join` and
compare by their serialized form, so ``==`` is syntactic equality of normal
forms.  Raw terms (:class:`Atom`, :class:`Dot`, :class:`Or`) are the
unnormalised syntax accepted by :func:`normalize`.
"""

from __future__ import annotations

from typing import Iterable, Mapping

SUFFIX_CHARS = frozenset("lr")


class MalformedName(ValueError):
    """Malformed name or suffix."""


def _check_suffix(t: str) -> str:
    if not set(t) <= SUFFIX_CHARS:
        raise MalformedName(f"suffix {t!r} may only contain 'l' and 'r'")
    return t


class Name:
    """Canonical name.  Subclasses are immutable and interned by text."""

    __slots__ = ("_text", "_hash")

    def __eq__(self, other):
        return isinstance(other, Name) and self._text == other._text

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self._text < other._text

    def __str__(self):
        return self._text

    def __repr__(self):
        return f"name({self._text!r})"


class Leaf(Name):
    __slots__ = ("key", "suffix")

    def __init__(self, key: int, suffix: str = ""):
        if not isinstance(key, int) or key == 0:
            raise MalformedName(f"key must be a nonzero int, got {key!r}")
        self.key = key
        self.suffix = _check_suffix(suffix)
        self._text = f"{key}.{suffix}" if suffix else str(key)
        self._hash = hash(self._text)


class Join(Name):
    __slots__ = ("left", "right")

    def __init__(self, left: Name, right: Name):
        self.left = left
        self.right = right
        self._text = f"({left._text}|{right._text})"
        self._hash = hash(self._text)


# raw syntax ---------------------------------------------------------------

class Atom:
    __slots__ = ("key",)

    def __init__(self, key: int):
        self.key = key

    def __eq__(self, other):
        return isinstance(other, Atom) and other.key == self.key

    def __hash__(self):
        return hash(("atom", self.key))

    def __repr__(self):
        return str(self.key)


class Dot:
    __slots__ = ("term", "suffix")

    def __init__(self, term, suffix: str):
        self.term = term
        self.suffix = _check_suffix(suffix)

    def __eq__(self, other):
        return isinstance(other, Dot) and (other.term, other.suffix) == (self.term, self.suffix)

    def __hash__(self):
        return hash(("dot", self.term, self.suffix))

    def __repr__(self):
        return f"{self.term!r}.{self.suffix or 'ε'}"


class Or:
    __slots__ = ("left", "right")

    def __init__(self, left, right):
        self.left = left
        self.right = right

    def __eq__(self, other):
        return isinstance(other, Or) and (other.left, other.right) == (self.left, self.right)

    def __hash__(self):
        return hash(("or", self.left, self.right))

    def __repr__(self):
        return f"({self.left!r}|{self.right!r})"


def term_size(term) -> int:
    if isinstance(term, (Atom, Leaf)):
        return 1
    if isinstance(term, Dot):
        return 1 + term_size(term.term)
    if isinstance(term, (Or, Join)):
        return 1 + term_size(term.left) + term_size(term.right)
    raise TypeError(term)


# canonical construction ----------------------------------------------------

def join(u: Name, v: Name) -> Name:
    """Canonical ``u ∨ v``; sibling leaves collapse to their parent."""
    if (isinstance(u, Leaf) and isinstance(v, Leaf) and u.key == v.key
            and u.suffix[-1:] == "l" and v.suffix[-1:] == "r"
            and u.suffix[:-1] == v.suffix[:-1]):
        return Leaf(u.key, u.suffix[:-1])
    return Join(u, v)


def descend(u: Name, t: str) -> Name:
    """``u.t`` in canonical form."""
    _check_suffix(t)
    for i, c in enumerate(t):
        if isinstance(u, Join):
            u = u.left if c == "l" else u.right
        else:
            return Leaf(u.key, u.suffix + t[i:])
    return u


def normalize(term) -> Name:
    """Canonical form of a raw term (idempotent on canonical names)."""
    if isinstance(term, Name):
        if isinstance(term, Join):
            return join(normalize(term.left), normalize(term.right))
        return term
    if isinstance(term, Atom):
        return Leaf(term.key)
    if isinstance(term, Dot):
        return descend(normalize(term.term), term.suffix)
    if isinstance(term, Or):
        return join(normalize(term.left), normalize(term.right))
    raise TypeError(f"not a name term: {term!r}")


def negate(u: Name) -> Name:
    """Flip the sign of every key."""
    if isinstance(u, Leaf):
        return Leaf(-u.key, u.suffix)
    return Join(negate(u.left), negate(u.right))


def leaves(u: Name) -> list[Leaf]:
    out = []
    stack = [u]
    while stack:
        x = stack.pop()
        if isinstance(x, Leaf):
            out.append(x)
        else:
            stack.append(x.right)
            stack.append(x.left)
    return out


def keys_of(u: Name) -> set[int]:
    return {leaf.key for leaf in leaves(u)}


# regions ------------------------------------------------------------------

Region = tuple  # (signed key, suffix)


def regions(names: Iterable[Name]) -> frozenset:
    """Canonical antichain of leaf cylinders covered by ``names``.

    Cylinders inside others are dropped and complete sibling pairs are merged
    until nothing changes, so two name sets cover the same regions exactly
    when their results are equal.
    """
    by_key: dict[int, set[str]] = {}
    for u in names:
        for leaf in leaves(u):
            by_key.setdefault(leaf.key, set()).add(leaf.suffix)
    out = set()
    for k, sufs in by_key.items():
        for t in _antichain(sufs):
            out.add((k, t))
    return frozenset(out)


def _antichain(sufs: set[str]) -> set[str]:
    cur = set(sufs)
    while True:
        cur = {t for t in cur if not any(t[:i] in cur for i in range(len(t)))}
        merged = set()
        for t in cur:
            if t.endswith("l") and t[:-1] + "r" in cur:
                merged.add(t[:-1])
        if not merged:
            return cur
        cur |= merged


def comparable(s: str, t: str) -> bool:
    return s.startswith(t) or t.startswith(s)


def corresponds(V: Iterable[Name], W: Iterable[Name]) -> bool:
    """True when the two name sets cover the same regions."""
    return regions(V) == regions(W)


def overlaps(V: Iterable[Name], W: Iterable[Name]) -> bool:
    """True when some region of ``V`` meets some region of ``W``."""
    rv = regions(V)
    if not rv:
        return False
    by_key: dict[int, list[str]] = {}
    for k, t in rv:
        by_key.setdefault(k, []).append(t)
    for k, t in regions(W):
        for s in by_key.get(k, ()):
            if comparable(s, t):
                return True
    return False


def in_closure(u: Name, V: Iterable[Name]) -> bool:
    """``u`` can be rebuilt from descendants of ``V`` by joins."""
    rv = regions(V)
    for leaf in leaves(u):
        if not any((leaf.key, leaf.suffix[:i]) in rv for i in range(len(leaf.suffix) + 1)):
            return False
    return True


# renamings ----------------------------------------------------------------

class Renaming:
    """Finite-support permutation of key ids, extended to signed keys."""

    __slots__ = ("_map",)

    def __init__(self, mapping: Mapping[int, int] | None = None):
        m = {int(a): int(b) for a, b in (mapping or {}).items() if a != b}
        if any(a <= 0 or b <= 0 for a, b in m.items()):
            raise ValueError("renamings act on positive key ids")
        if sorted(m) != sorted(m.values()):
            raise ValueError(f"not a permutation: {m}")
        self._map = m

    @classmethod
    def swap(cls, a: int, b: int) -> "Renaming":
        return cls({a: b, b: a})

    def key(self, k: int) -> int:
        a = self._map.get(abs(k), abs(k))
        return a if k > 0 else -a

    def __call__(self, u: Name) -> Name:
        if isinstance(u, Leaf):
            return Leaf(self.key(u.key), u.suffix)
        return Join(self(u.left), self(u.right))

    def inverse(self) -> "Renaming":
        return Renaming({b: a for a, b in self._map.items()})

    def then(self, other: "Renaming") -> "Renaming":
        """``other ∘ self``."""
        ks = set(self._map) | set(other._map)
        return Renaming({k: other.key(self.key(k)) for k in ks})

    @property
    def support(self) -> frozenset:
        return frozenset(self._map)

    def __eq__(self, other):
        return isinstance(other, Renaming) and self._map == other._map

    def __hash__(self):
        return hash(frozenset(self._map.items()))

    def __repr__(self):
        return f"Renaming({self._map})"


def name(text: str) -> Name:
    """Parse and normalise a name literal such as ``'((3.l|8.rl)|-2)'``."""
    from .formats import parse_name
    return parse_name(text)
