"""Free groups and free products of free groups.

A letter is a nonzero int: generator ``i`` (0-based, numbered across all
factors) is ``i + 1`` and its inverse is ``-(i + 1)``.  Text form uses the
declared generator names, lowercase for a generator and uppercase for its
inverse, separated by spaces: ``"a A b"``.
"""

from __future__ import annotations

import string
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple, Sequence

from .errors import BoundTooSmall, MissingImage, UnknownGenerator


class Generator(NamedTuple):
    basis_index: int
    sign: int
    factor: int = 0


def free_reduce(letters: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def letter_key(x: int) -> int:
    """Total order on letters: a < A < b < B < ..."""
    return 2 * (x - 1) if x > 0 else 2 * (-x - 1) + 1


@dataclass(frozen=True)
class Word:
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        if not isinstance(self.letters, tuple):
            object.__setattr__(self, "letters", tuple(self.letters))

    @classmethod
    def of(cls, letters: Iterable[int]) -> "Word":
        return cls(free_reduce(letters))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return product(self, other)

    def __invert__(self) -> "Word":
        return inverse(self)

    def __pow__(self, k: int) -> "Word":
        base = self if k >= 0 else inverse(self)
        out = Word()
        for _ in range(abs(k)):
            out = product(out, base)
        return out

    def shortlex_key(self):
        return (len(self.letters), tuple(letter_key(x) for x in self.letters))

    def generators_used(self) -> frozenset[int]:
        return frozenset(abs(x) - 1 for x in self.letters)

    def is_reduced(self) -> bool:
        return all(a != -b for a, b in zip(self.letters, self.letters[1:]))


IDENTITY = Word()


def product(w1: Word, w2: Word) -> Word:
    a, b = w1.letters, w2.letters
    i = 0
    n = min(len(a), len(b))
    while i < n and a[len(a) - 1 - i] == -b[i]:
        i += 1
    return Word(a[: len(a) - i] + b[i:])


def inverse(w: Word) -> Word:
    return Word(tuple(-x for x in reversed(w.letters)))


def conjugate(w: Word, g: Word) -> Word:
    """g^-1 w g."""
    return product(product(inverse(g), w), g)


@dataclass(frozen=True)
class Alphabet:
    """Generator declaration: named generators grouped into free factors."""

    factors: tuple[tuple[str, ...], ...]
    _lookup: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        factors = tuple(tuple(f) for f in self.factors)
        object.__setattr__(self, "factors", factors)
        lookup: dict[str, int] = {}
        idx = 0
        for factor in factors:
            for name in factor:
                if not name or name != name.lower() or name.upper() == name:
                    raise UnknownGenerator(f"bad generator name {name!r}: needs a lowercase letter")
                if any(c.isspace() for c in name):
                    raise UnknownGenerator(f"bad generator name {name!r}")
                if name in lookup or name.upper() in lookup:
                    raise UnknownGenerator(f"duplicate generator name {name!r}")
                lookup[name] = idx + 1
                lookup[name.upper()] = -(idx + 1)
                idx += 1
        object.__setattr__(self, "_lookup", lookup)

    @classmethod
    def free(cls, rank: int) -> "Alphabet":
        """Single free factor; names a, b, c, ... (x1, x2, ... past 26)."""
        if rank <= 26:
            names = tuple(string.ascii_lowercase[:rank])
        else:
            names = tuple(f"x{i + 1}" for i in range(rank))
        return cls((names,))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for f in self.factors for n in f)

    @property
    def rank(self) -> int:
        return sum(len(f) for f in self.factors)

    def letters(self) -> list[int]:
        """All letters in shortlex order: a, A, b, B, ..."""
        return sorted((s * (i + 1) for i in range(self.rank) for s in (1, -1)), key=letter_key)

    def generator(self, letter: int) -> Generator:
        i = abs(letter) - 1
        if letter == 0 or i >= self.rank:
            raise UnknownGenerator(f"letter {letter} outside declared rank {self.rank}")
        for f, factor in enumerate(self.factors):
            if i < len(factor):
                return Generator(i, 1 if letter > 0 else -1, f)
            i -= len(factor)
        raise AssertionError("unreachable")

    def factor_of(self, letter: int) -> int:
        return self.generator(letter).factor

    def index(self, name: str) -> int:
        """Generator index of a lowercase name."""
        try:
            x = self._lookup[name]
        except KeyError:
            raise UnknownGenerator(f"unknown generator {name!r}") from None
        if x < 0:
            raise UnknownGenerator(f"{name!r} names an inverse, not a generator")
        return x - 1

    def letter(self, token: str) -> int:
        try:
            return self._lookup[token]
        except KeyError:
            raise UnknownGenerator(f"unknown letter {token!r}") from None

    def reduce(self, letters: Iterable[int]) -> Word:
        letters = list(letters)
        for x in letters:
            self.generator(x)
        return Word.of(letters)

    def parse(self, text: str) -> Word:
        return self.reduce(self.letter(tok) for tok in text.split())

    def format(self, w: Word) -> str:
        names = self.names
        out = []
        for x in w.letters:
            name = names[abs(x) - 1]
            out.append(name if x > 0 else name.upper())
        return " ".join(out)

    def blocks(self, w: Word) -> list[tuple[int, Word]]:
        """Maximal same-factor blocks of a reduced word (free-product normal form)."""
        out: list[tuple[int, list[int]]] = []
        for x in w.letters:
            f = self.factor_of(x)
            if out and out[-1][0] == f:
                out[-1][1].append(x)
            else:
                out.append((f, [x]))
        return [(f, Word(tuple(b))) for f, b in out]

    def to_json(self):
        return [list(f) for f in self.factors]

    @classmethod
    def from_json(cls, data) -> "Alphabet":
        return cls(tuple(tuple(f) for f in data))


def reduce(letters: Iterable[int], rank: int | None = None) -> Word:
    """Freely reduce a letter sequence, checking letters against ``rank``."""
    letters = list(letters)
    if rank is not None:
        for x in letters:
            if x == 0 or abs(x) > rank:
                raise UnknownGenerator(f"letter {x} outside declared rank {rank}")
    return Word.of(letters)


def iter_reduced_words(rank: int, max_length: int, min_length: int = 0) -> Iterator[Word]:
    """All reduced words over ``rank`` generators, in shortlex order."""
    letters = sorted((s * (i + 1) for i in range(rank) for s in (1, -1)), key=letter_key)
    layer: list[tuple[int, ...]] = [()]
    for length in range(max_length + 1):
        if length >= min_length:
            for w in layer:
                yield Word(w)
        if length == max_length:
            break
        layer = [w + (x,) for w in layer for x in letters if not w or w[-1] != -x]


def ball_size(rank: int, radius: int) -> int:
    if radius < 0:
        return 0
    if rank == 0:
        return 1
    if rank == 1:
        return 2 * radius + 1
    return 1 + 2 * rank * ((2 * rank - 1) ** radius - 1) // (2 * rank - 2)


def evaluate(word_in_gens: Word, gens: Sequence[Word]) -> Word:
    """Substitute ``gens[i]`` for generator ``i`` of an abstract word."""
    out = IDENTITY
    for x in word_in_gens.letters:
        g = gens[abs(x) - 1]
        out = product(out, g if x > 0 else inverse(g))
    return out


def coset_rep(w: Word, gens: frozenset[int]) -> Word:
    """Shortest element of the left coset w<S> for a free-factor subgroup <S>.

    ``gens`` holds generator indices.  Stripping the trailing S-block of the
    reduced word gives the unique minimal-length (hence shortlex-minimal)
    representative.
    """
    letters = w.letters
    k = len(letters)
    while k and abs(letters[k - 1]) - 1 in gens:
        k -= 1
    return Word(letters[:k])


@dataclass(frozen=True)
class Endomorphism:
    """Map generator index -> image word, extended multiplicatively."""

    images: dict[int, Word]

    def __hash__(self):
        return hash(tuple(sorted((k, v.letters) for k, v in self.images.items())))

    def __post_init__(self):
        for k, v in self.images.items():
            if not v.is_reduced():
                raise ValueError(f"image of generator {k} is not reduced")

    @classmethod
    def from_names(cls, alphabet: Alphabet, images: dict[str, str], target: Alphabet | None = None) -> "Endomorphism":
        target = target or alphabet
        out = {alphabet.index(k): target.parse(v) for k, v in images.items()}
        missing = set(range(alphabet.rank)) - set(out)
        if missing:
            raise MissingImage(f"no image for generators {sorted(missing)}")
        return cls(out)

    def apply(self, w: Word) -> Word:
        return apply_endomorphism(self, w)


def apply_endomorphism(e: Endomorphism, w: Word) -> Word:
    out: list[int] = []
    for x in w.letters:
        try:
            img = e.images[abs(x) - 1].letters
        except KeyError:
            raise MissingImage(f"no image for generator {abs(x) - 1}") from None
        if x < 0:
            img = tuple(-y for y in reversed(img))
        for y in img:
            if out and out[-1] == -y:
                out.pop()
            else:
                out.append(y)
    return Word(tuple(out))


@dataclass
class IntersectionReport:
    verdict: str  # CONSISTENT or VIOLATED
    witnesses: list[tuple[Word, Word, Word]]  # (g, q, g^-1 q g)
    samples: int
    conjugators: int
    kernel_contains_p: bool
    injective_on_sample: bool

    @property
    def consistent(self) -> bool:
        return self.verdict == "CONSISTENT"


def _cancel(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    # product of reduced letter tuples
    k, n = 0, min(len(a), len(b))
    la = len(a)
    while k < n and a[la - 1 - k] == -b[k]:
        k += 1
    return a[: la - k] + b[k:]


def verify_trivial_intersection(
    p_gens: Sequence[Word],
    q_gens: Sequence[Word],
    retraction: Endomorphism,
    conjugators: Sequence[Word],
    word_bound: int,
    max_witnesses: int = 10,
) -> IntersectionReport:
    """Bounded search for nontrivial elements of P ∩ g^-1 Q g.

    P is assumed to lie in the kernel of ``retraction`` (checked on its
    generators).  Every nontrivial reduced word of length <= ``word_bound``
    in the Q generators is sampled; a pair (g, q) is a witness when
    g^-1 q g is killed by the retraction.  The retraction is a homomorphism,
    so the image of g^-1 q g is computed as f(g)^-1 f(q) f(g) over the
    distinct values of f(q) and f(g).
    """
    if word_bound < 1 or not q_gens or not conjugators:
        raise BoundTooSmall("empty sample space: need word_bound >= 1, Q generators and conjugators")

    kernel_ok = all(not apply_endomorphism(retraction, p) for p in p_gens)
    q_images = [apply_endomorphism(retraction, q) for q in q_gens]

    # DFS over reduced Q-words, carrying q and f(q) incrementally.
    samples: list[tuple[Word, Word]] = []
    rank = len(q_gens)
    letters = sorted((s * (i + 1) for i in range(rank) for s in (1, -1)), key=letter_key)
    stack: list[tuple[int, Word, Word, int]] = [(0, IDENTITY, IDENTITY, 0)]
    while stack:
        last, q, fq, depth = stack.pop()
        if depth == word_bound:
            continue
        for x in reversed(letters):
            if x == -last:
                continue
            g = q_gens[abs(x) - 1]
            img = q_images[abs(x) - 1]
            if x < 0:
                g, img = inverse(g), inverse(img)
            nq, nfq = product(q, g), product(fq, img)
            samples.append((nq, nfq))
            stack.append((x, nq, nfq, depth + 1))
    samples.sort(key=lambda s: s[0].shortlex_key())

    seen: dict[Word, Word] = {}
    injective = True
    for q, fq in samples:
        if not fq or (fq in seen and seen[fq] != q):
            injective = False
        seen.setdefault(fq, q)

    by_image_g: dict[Word, Word] = {}
    for g in conjugators:
        by_image_g.setdefault(apply_endomorphism(retraction, g), g)
    by_image_q: dict[Word, Word] = {}
    for q, fq in samples:
        if q:
            by_image_q.setdefault(fq, q)

    witnesses = []
    q_items = [(fq.letters, q) for fq, q in by_image_q.items()]
    for fg, g in by_image_g.items():
        a = inverse(fg).letters
        b = fg.letters
        for fq, q in q_items:
            if not _cancel(_cancel(a, fq), b):
                witnesses.append((g, q, conjugate(q, g)))
                if len(witnesses) >= max_witnesses:
                    break
        if len(witnesses) >= max_witnesses:
            break

    return IntersectionReport(
        verdict="VIOLATED" if witnesses else "CONSISTENT",
        witnesses=witnesses,
        samples=len(samples),
        conjugators=len(conjugators),
        kernel_contains_p=kernel_ok,
        injective_on_sample=injective,
    )


@dataclass(frozen=True)
class Subgroup:
    """Subgroup given by generating words.

    Free-factor subgroups (every generator a single positive basis letter)
    support exact membership and coset representatives; other generating
    sets (cyclic subgroups, Nielsen-transformed bases) support element
    enumeration only.
    """

    generators: tuple[Word, ...]

    def __post_init__(self):
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        for w in gens:
            if not w or not w.is_reduced():
                raise ValueError("subgroup generators must be reduced and nontrivial")

    @classmethod
    def free_factor(cls, gens: Iterable[int]) -> "Subgroup":
        return cls(tuple(Word((i + 1,)) for i in sorted(set(gens))))

    @classmethod
    def parse(cls, alphabet: Alphabet, words: Iterable[str]) -> "Subgroup":
        return cls(tuple(alphabet.parse(w) for w in words))

    @property
    def is_free_factor(self) -> bool:
        return all(len(w) == 1 and w.letters[0] > 0 for w in self.generators) and len(
            set(self.generators)
        ) == len(self.generators)

    @property
    def letters(self) -> frozenset[int]:
        """Generator indices of a free-factor subgroup."""
        if not self.is_free_factor:
            raise ValueError("not a free-factor subgroup")
        return frozenset(w.letters[0] - 1 for w in self.generators)

    def contains(self, w: Word) -> bool:
        return w.generators_used() <= self.letters

    def coset_rep(self, w: Word) -> Word:
        return coset_rep(w, self.letters)

    def elements(self, max_length: int) -> list[Word]:
        """Elements of G-length <= max_length, in shortlex order.

        Branches are pruned once the G-length exceeds ``max_length``; this
        is exhaustive when lengths grow along reduced words in the
        generators (free-factor and cyclic subgroups).
        """
        if self.is_free_factor:
            letters = sorted(self.letters)
            out = []
            for w in iter_reduced_words(len(letters), max_length):
                out.append(Word(tuple((letters[abs(x) - 1] + 1) * (1 if x > 0 else -1) for x in w.letters)))
            return sorted(out, key=Word.shortlex_key)
        gens = list(self.generators) + [inverse(w) for w in self.generators]
        seen = {IDENTITY}
        frontier = [IDENTITY]
        while frontier:
            nxt = []
            for h in frontier:
                for s in gens:
                    x = product(h, s)
                    if len(x) <= max_length and x not in seen:
                        seen.add(x)
                        nxt.append(x)
            frontier = nxt
        return sorted(seen, key=Word.shortlex_key)
