"""Words in surface groups.

A word is a python str over a generator alphabet: a lowercase letter is a
generator, the corresponding uppercase letter its inverse ("aA" reduces to
the empty word).  Group elements multiply left to right, matching the
isometry composition convention (the word "ab" is the map a o b).

Free groups (any surface with punctures or boundary) use free + cyclic
reduction with a canonical rotation as the conjugacy normal form.  Closed
surface groups are one-relator small cancellation groups; they use Dehn's
algorithm (replace any subword that is more than half of a cyclic rotation
of the relator by the shorter complement) followed by a closure over
exactly-half relator swaps, which decides both the word and the conjugacy
problem for these groups.
"""

from __future__ import annotations

_INV = {}
for _c in "abcdefghijklmnopqrstuvwxyz":
    _INV[_c] = _c.upper()
    _INV[_c.upper()] = _c


def inverse_word(w: str) -> str:
    return w.swapcase()[::-1]


def free_reduce(w: str) -> str:
    out: list[str] = []
    for ch in w:
        if out and out[-1] == _INV[ch]:
            out.pop()
        else:
            out.append(ch)
    return "".join(out)


def cyclic_reduce(w: str) -> str:
    w = free_reduce(w)
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == _INV[w[j - 1]]:
        i += 1
        j -= 1
    return w[i:j]


def apply_morphism(w: str, images: dict[str, str]) -> str:
    """Image of a word under a map given on every letter, freely reduced."""
    out: list[str] = []
    for ch in w:
        for c in images[ch]:
            if out and out[-1] == _INV[c]:
                out.pop()
            else:
                out.append(c)
    return "".join(out)


def extend_images(images_on_generators: dict[str, str]) -> dict[str, str]:
    """Fill in the uppercase (inverse) letters of a generator map."""
    full = dict(images_on_generators)
    for g, img in list(images_on_generators.items()):
        full[_INV[g]] = inverse_word(img)
    return full


def least_rotation_index(s: str) -> int:
    """Booth's algorithm: index of the lexicographically least rotation."""
    n = len(s)
    if n <= 1:
        return 0
    s2 = s + s
    f = [-1] * (2 * n)
    k = 0
    for j in range(1, 2 * n):
        sj = s2[j]
        i = f[j - k - 1]
        while i != -1 and sj != s2[k + i + 1]:
            if sj < s2[k + i + 1]:
                k = j - i - 1
            i = f[i]
        if sj != s2[k + i + 1]:
            if sj < s2[k]:
                k = j
            f[j - k] = -1
        else:
            f[j - k] = i + 1
    return k


def canonical_rotation(w: str) -> str:
    if len(w) <= 1:
        return w
    k = least_rotation_index(w)
    return w[k:] + w[:k]


def rotations(w: str):
    for i in range(len(w)):
        yield w[i:] + w[:i]


def exponent_sums(w: str, letters: str) -> tuple[int, ...]:
    """Homology class: signed letter counts in the order of `letters`."""
    counts = {c: 0 for c in letters}
    for ch in w:
        lo = ch.lower()
        if lo in counts:
            counts[lo] += 1 if ch.islower() else -1
    return tuple(counts[c] for c in letters)


class WordCalculus:
    """Word and conjugacy problem for a surface group.

    ``relator`` is None for free groups.  For a one-relator group the relator
    must satisfy small cancellation (true for the closed-surface octagon
    relator, which is C'(1/8)); Dehn's algorithm is then a complete decision
    procedure.
    """

    def __init__(self, letters: str, relator: str | None = None):
        self.letters = letters
        self.relator = relator
        if relator is not None:
            self._sym = self._symmetrize(relator)
            self._rel_len = len(relator)
        else:
            self._sym = []
            self._rel_len = 0

    @staticmethod
    def _symmetrize(relator: str) -> list[str]:
        variants = set()
        for base in (relator, inverse_word(relator)):
            for r in rotations(base):
                variants.add(r)
        return sorted(variants)

    # -- word problem

    def reduce(self, w: str) -> str:
        """Shorten a (linear) word; the empty result means the identity."""
        w = free_reduce(w)
        if self.relator is None:
            return w
        half = self._rel_len // 2
        changed = True
        while changed and w:
            changed = False
            n = len(w)
            for m in range(min(n, self._rel_len), half, -1):
                done = False
                for s in self._sym:
                    j = w.find(s[:m])
                    if j >= 0:
                        w = free_reduce(w[:j] + inverse_word(s[m:]) + w[j + m:])
                        changed, done = True, True
                        break
                if done:
                    break
        return w

    def is_trivial(self, w: str) -> bool:
        return self.reduce(w) == ""

    def equal(self, w1: str, w2: str) -> bool:
        return self.is_trivial(w1 + inverse_word(w2))

    # -- conjugacy problem

    def _cyclic_dehn(self, w: str) -> str:
        w = cyclic_reduce(w)
        if self.relator is None:
            return w
        half = self._rel_len // 2
        changed = True
        while changed and w:
            changed = False
            n = len(w)
            w2 = w + w
            for m in range(min(n, self._rel_len - 1), half, -1):
                done = False
                for s in self._sym:
                    j = w2.find(s[:m])
                    if 0 <= j < n:
                        w = cyclic_reduce(inverse_word(s[m:]) + w2[j + m: j + n])
                        changed, done = True, True
                        break
                if done:
                    break
        return w

    # Words longer than this skip the half-swap closure: a geodesic word
    # with k disjoint half-relator occurrences has 2^k equal-length forms,
    # so the closure is exponential in length.  Rotation-only keys remain
    # sound (equal keys imply conjugate classes); they may split one long
    # class into several keys, which period detection treats as
    # aperiodic-within-budget.
    CLOSURE_LENGTH_CAP = 24

    def normal_form(self, w: str) -> str:
        """Canonical representative of the conjugacy class (oriented).

        Free case: lexicographically least rotation of the cyclic reduction.
        One-relator case: Dehn shortening, then the least word in the closure
        under rotations and exactly-half relator swaps.
        """
        w = self._cyclic_dehn(w) if self.relator is not None else cyclic_reduce(w)
        if self.relator is None or not w:
            return canonical_rotation(w)
        if len(w) > self.CLOSURE_LENGTH_CAP:
            return canonical_rotation(w)
        half = self._rel_len // 2
        seen = {canonical_rotation(w)}
        queue = [canonical_rotation(w)]
        while queue:
            cur = queue.pop()
            n = len(cur)
            w2 = cur + cur
            for s in self._sym:
                start = 0
                while True:
                    j = w2.find(s[:half], start)
                    if j < 0 or j >= n:
                        break
                    cand = self._cyclic_dehn(inverse_word(s[half:]) + w2[j + half: j + n])
                    cand = canonical_rotation(cand)
                    if cand not in seen:
                        seen.add(cand)
                        queue.append(cand)
                    start = j + 1
            if len(seen) > 4096:
                raise RuntimeError("half-relator closure exploded; relator not small cancellation?")
        return min(seen)

    def conjugate(self, w1: str, w2: str) -> bool:
        return self.normal_form(w1) == self.normal_form(w2)

    def curve_key(self, w: str) -> str:
        """Normal form of the unoriented class: min over the two orientations."""
        return min(self.normal_form(w), self.normal_form(inverse_word(w)))
