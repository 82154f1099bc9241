"""Freely reduced words over a finite alphabet and the word metric.

A word is a tuple of nonzero signed generator indices: ``+i`` is the i-th
generator (1-based), ``-i`` its inverse.  All public functions keep words
freely reduced, so tuple equality is group-element equality in the free
group.

The text grammar maps generator ``i`` to the lowercase letter
``chr(ord('a') + i - 1)`` and its inverse to the uppercase letter, e.g.
``"abA"`` is a * b * a^-1.

Shortlex order: shorter words first; within a length, letters compare as
a < A < b < B < ... (generator before its inverse).
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence, Tuple

from .errors import AlphabetMismatchError, DomainError

Word = Tuple[int, ...]

IDENTITY: Word = ()


def reduce_word(letters: Sequence[int]) -> Word:
    """Freely reduce a letter sequence (cancel adjacent x x^-1 pairs)."""
    out: list[int] = []
    for x in letters:
        if x == 0:
            raise DomainError("letter 0 is not a valid signed generator index")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def multiply(a: Word, b: Word) -> Word:
    """Product of freely reduced words, freely reduced."""
    out = list(a)
    for x in b:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def inverse(a: Word) -> Word:
    return tuple(-x for x in reversed(a))


def conjugate(g: Word, a: Word) -> Word:
    """g^-1 * a * g."""
    return multiply(multiply(inverse(g), a), g)


def word_length(a: Word) -> int:
    return len(a)


def max_generator(a: Word) -> int:
    return max((abs(x) for x in a), default=0)


def check_alphabet(a: Word, alphabet_size: int) -> None:
    if max_generator(a) > alphabet_size:
        raise AlphabetMismatchError(
            f"word {word_to_str(a)} uses generators beyond alphabet of size {alphabet_size}"
        )


def letter_order(x: int) -> int:
    """Position of a signed letter in the order a < A < b < B < ..."""
    return 2 * (abs(x) - 1) + (0 if x > 0 else 1)


def shortlex_key(a: Word):
    return (len(a), tuple(letter_order(x) for x in a))


def ball_size(alphabet_size: int, radius: int) -> int:
    """Number of freely reduced words of length <= radius."""
    n = alphabet_size
    total = 1
    count = 2 * n
    for _ in range(radius):
        total += count
        count *= 2 * n - 1
    return total


def enumerate_ball(alphabet_size: int, radius: int) -> Iterator[Word]:
    """Yield every freely reduced word of length <= radius in shortlex order.

    Depth-first per length, so memory stays O(radius).
    """
    if radius < 0:
        raise DomainError("radius must be >= 0")
    letters = sorted(
        [i for i in range(1, alphabet_size + 1)] + [-i for i in range(1, alphabet_size + 1)],
        key=letter_order,
    )

    def extend(prefix: list[int], remaining: int) -> Iterator[Word]:
        if remaining == 0:
            yield tuple(prefix)
            return
        last = prefix[-1] if prefix else 0
        for x in letters:
            if x == -last:
                continue
            prefix.append(x)
            yield from extend(prefix, remaining - 1)
            prefix.pop()

    for k in range(radius + 1):
        yield from extend([], k)


def parse_word(text: str, alphabet_size: int | None = None) -> Word:
    """Parse the letter grammar: a-z generators, A-Z inverses.

    The whole strings ``"e"`` and ``"1"`` denote the identity; inside a
    longer word the letter e is the fifth generator as usual.
    """
    stripped = "".join(text.split())
    if stripped in ("e", "1", ""):
        return IDENTITY
    letters = []
    for ch in stripped:
        if "a" <= ch <= "z":
            letters.append(ord(ch) - ord("a") + 1)
        elif "A" <= ch <= "Z":
            letters.append(-(ord(ch) - ord("A") + 1))
        else:
            raise DomainError(f"invalid word character {ch!r}")
    w = reduce_word(letters)
    if alphabet_size is not None:
        check_alphabet(w, alphabet_size)
    return w


def word_to_str(a: Word) -> str:
    if not a:
        return "e"
    chars = []
    for x in a:
        if abs(x) > 26:
            raise DomainError("letter grammar only covers alphabets up to size 26")
        base = ord("a") if x > 0 else ord("A")
        chars.append(chr(base + abs(x) - 1))
    return "".join(chars)


def cyclic_reduction(a: Word) -> tuple[Word, Word]:
    """Split a as p * core * p^-1 with core cyclically reduced.

    Returns (p, core).
    """
    i, j = 0, len(a)
    while j - i >= 2 and a[i] == -a[j - 1]:
        i += 1
        j -= 1
    return a[:i], a[i:j]


def primitive_root(core: Word) -> Word:
    """Smallest z with core = z^k, for a nonempty cyclically reduced core."""
    m = len(core)
    if m == 0:
        raise DomainError("identity has no primitive root")
    for d in range(1, m + 1):
        if m % d != 0:
            continue
        z = core[:d]
        if z * (m // d) == core:
            return z
    return core


def cyclic_rotations(core: Word) -> Iterable[tuple[int, Word]]:
    """All rotations (r, core[r:] + core[:r]) of a cyclically reduced word."""
    for r in range(max(len(core), 1)):
        yield r, core[r:] + core[:r]


def power(a: Word, n: int) -> Word:
    if n < 0:
        return power(inverse(a), -n)
    out: Word = ()
    for _ in range(n):
        out = multiply(out, a)
    return out
