"""Signatures, canonical decompositions and the lift order on words.

A word's signature keeps the first occurrence of each letter.  Splitting the
word at those first occurrences gives its canonical decomposition: a list of
signature letters and, after each of them, a block that only repeats letters
seen before.  ``u`` is below ``w`` when both have the same head and
signature and every block of ``u`` is a scattered subword of the matching
block of ``w``.  This is a well-quasi-order, so every set of words has a
finite set of minimal elements, its core.
"""

from itertools import product

from .model import ExtWord, ResourceLimit, action_key, word_key


def sig(w):
    if isinstance(w, ExtWord):
        return ExtWord(w.head, sig_body(w.body))
    return sig_body(w)


def sig_body(body):
    seen = set()
    out = []
    for a in body:
        if a not in seen:
            seen.add(a)
            out.append(a)
    return tuple(out)


def canonical_decomposition(body):
    """Return ``(letters, blocks)`` with ``len(blocks) == len(letters) + 1``.

    ``blocks[0]`` is the (always empty) part before the first letter and
    ``blocks[i + 1]`` follows ``letters[i]``.
    """
    letters = []
    blocks = [[]]
    seen = set()
    for a in body:
        if a in seen:
            blocks[-1].append(a)
        else:
            seen.add(a)
            letters.append(a)
            blocks.append([])
    return tuple(letters), tuple(tuple(b) for b in blocks)


def recompose(letters, blocks):
    out = list(blocks[0])
    for a, b in zip(letters, blocks[1:]):
        out.append(a)
        out.extend(b)
    return tuple(out)


def is_subword(u, w):
    """Scattered subword test (greedy)."""
    it = iter(w)
    return all(any(a == b for b in it) for a in u)


def preceq(u, w):
    """``u`` below ``w``: ``w`` is obtained from ``u`` by lifting."""
    if u.head != w.head:
        return False
    return body_preceq(u.body, w.body)


def body_preceq(u, w):
    if len(u) > len(w):
        return False
    lu, bu = canonical_decomposition(u)
    lw, bw = canonical_decomposition(w)
    if lu != lw:
        return False
    return all(is_subword(x, y) for x, y in zip(bu, bw))


def core_of(words):
    """The minimal elements of a finite set of words."""
    groups = {}
    for w in set(words):
        groups.setdefault((w.head, sig_body(w.body)), []).append(w)
    out = []
    for group in groups.values():
        group.sort(key=lambda w: len(w.body))
        kept = []
        for w in group:
            if not any(body_preceq(u.body, w.body) for u in kept):
                kept.append(w)
        out.extend(kept)
    return sorted(out, key=word_key)


def distinct_subwords(block, cap=None):
    """All distinct scattered subwords of ``block``."""
    out = {()}
    for a in block:
        out |= {s + (a,) for s in out}
        if cap is not None and len(out) > cap:
            raise ResourceLimit(f"more than {cap} block subwords")
    return out


def minimal_candidates(w, cap=100_000):
    """Every word below ``w``, ordered by length and then lexicographically."""
    letters, blocks = canonical_decomposition(w.body)
    choices = [sorted(distinct_subwords(b, cap), key=lambda s: (len(s), [action_key(a) for a in s]))
               for b in blocks]
    total = 1
    for c in choices:
        total *= len(c)
        if total > cap:
            raise ResourceLimit(f"more than {cap} candidate words below {w}")
    out = [ExtWord(w.head, recompose(letters, pick)) for pick in product(*choices)]
    out.sort(key=word_key)
    return out


def lift_insert(w, rng, count):
    """Random element of lift(w): insert ``count`` already-seen letters."""
    body = list(w.body)
    for _ in range(count):
        if not body:
            break
        pos = rng.randrange(1, len(body) + 1)
        seen = sig_body(body[:pos])
        body.insert(pos, rng.choice(seen))
    return ExtWord(w.head, tuple(body))


class PrefixTrie:
    """pref(L) for a finite set of spawn-headed words, with integer node ids.

    Node ``n`` stands for the word ``words[n]``; ``root[head]`` is the node
    of ``spawn(head)`` and ``child[(n, a)]`` the node of its extension by
    ``a``.
    """

    def __init__(self, language=()):
        self.language = frozenset(language)
        self.words = []
        self.root = {}
        self.child = {}
        self._ids = {}
        for w in sorted(self.language, key=word_key):
            node = self._node(ExtWord(w.head, ()))
            self.root[w.head] = node
            for i, a in enumerate(w.body):
                nxt = self._node(ExtWord(w.head, w.body[:i + 1]))
                self.child[(node, a)] = nxt
                node = nxt

    def _node(self, w):
        n = self._ids.get(w)
        if n is None:
            n = self._ids[w] = len(self.words)
            self.words.append(w)
        return n

    def __contains__(self, w):
        return w in self._ids

    def node(self, w):
        return self._ids.get(w)

    def __len__(self):
        return len(self.words)
