"""Framed braid words in twists-on-top normal form.

A framed braid on n strands is a vector of integer twists, one per strand,
followed by a word in the braid generators.  Twisting a ribbon commutes
with crossings, so every presentation normalizes to all twists collected
at the top; the parser performs that normalization while reading.

Conventions fixed project-wide:

* words are read top to bottom, and the closure joins bottom endpoint k
  to top endpoint k;
* the positive generator s_i is the crossing in which the strand entering
  at position i passes under the strand at position i+1 (this matches the
  braiding operator downstream, which leaves the overpass pair unchanged);
* strand positions and generator indices are numbered from 1 in the text
  grammar, e.g. "n=2; t1^3 s1 s1".
"""

import re


class MoveError(ValueError):
    """A diagram move was requested at a position where it does not apply."""


class FramedBraidWord:
    """Strand count, per-strand twists, and a list of (index, sign) letters.

    twists[k] is the twist on the strand entering top position k+1; word
    letters use 1-based generator indices, so (2, -1) is the negative
    crossing of positions 2 and 3.
    """

    def __init__(self, strands, twists=None, word=()):
        strands = int(strands)
        if strands < 1:
            raise ValueError("strand count must be at least 1")
        if twists is None:
            twists = [0] * strands
        twists = [int(t) for t in twists]
        if len(twists) != strands:
            raise ValueError("need one twist entry per strand")
        letters = []
        for item in word:
            i, sign = int(item[0]), int(item[1])
            if not 1 <= i < strands:
                raise ValueError("generator index %d out of range for %d strands"
                                 % (i, strands))
            if sign not in (1, -1):
                raise ValueError("crossing sign must be +1 or -1")
            letters.append((i, sign))
        self.strands = strands
        self.twists = twists
        self.word = tuple(letters)

    def __eq__(self, other):
        if not isinstance(other, FramedBraidWord):
            return NotImplemented
        return (self.strands == other.strands
                and self.twists == other.twists
                and self.word == other.word)

    def __hash__(self):
        return hash((self.strands, tuple(self.twists), self.word))

    def __repr__(self):
        return "FramedBraidWord(%r)" % word_to_string(self)

    def permutation(self):
        """Tuple rho with rho[p] = bottom position of the strand entering
        top position p (0-based)."""
        cur = list(range(self.strands))
        for i, _sign in self.word:
            cur[i - 1], cur[i] = cur[i], cur[i - 1]
        rho = [0] * self.strands
        for pos, strand in enumerate(cur):
            rho[strand] = pos
        return tuple(rho)

    def writhe(self):
        return sum(sign for _i, sign in self.word)


class ClosureInfo:
    """Component bookkeeping for the closure of a framed braid word.

    components are tuples of 1-based strand positions, ordered by least
    member; framing_per_component pairs with them and equals the sum of
    the member twists plus the self-crossing writhe of the component.
    """

    def __init__(self, permutation, components, framing_per_component):
        self.permutation = tuple(permutation)
        self.components = tuple(tuple(c) for c in components)
        self.framing_per_component = tuple(framing_per_component)

    def __repr__(self):
        return ("ClosureInfo(components=%r, framings=%r)"
                % (self.components, self.framing_per_component))

    def to_json(self):
        return {
            "permutation": list(self.permutation),
            "components": [list(c) for c in self.components],
            "framing_per_component": list(self.framing_per_component),
        }


def closure_components(b):
    """Cycles of the closure permutation plus per-component framing."""
    n = b.strands
    rho = b.permutation()
    comp_of = [-1] * n
    components = []
    for start in range(n):
        if comp_of[start] >= 0:
            continue
        cycle = []
        p = start
        while comp_of[p] < 0:
            comp_of[p] = len(components)
            cycle.append(p)
            p = rho[p]
        components.append(tuple(sorted(q + 1 for q in cycle)))
    framings = [0] * len(components)
    for idx, cycle in enumerate(components):
        framings[idx] = sum(b.twists[q - 1] for q in cycle)
    cur = list(range(n))
    for i, sign in b.word:
        a, c = cur[i - 1], cur[i]
        if comp_of[a] == comp_of[c]:
            framings[comp_of[a]] += sign
        cur[i - 1], cur[i] = cur[i], cur[i - 1]
    return ClosureInfo(rho, components, framings)


_ITEM = re.compile(r"([st])(\d+)(?:\^(-?\d+))?\Z")


def parse_word(text):
    """Parse the grammar  n=INT ; ( t INT pow? | s INT pow? )*  into normal form.

    Twists encountered below crossings are slid to the top using
    t_i s_j = s_j t_{pi_j(i)}; a power on s repeats the letter.
    """
    m = re.match(r"\s*n\s*=\s*(\d+)\s*;", text)
    if not m:
        raise ValueError("syntax error at position 0: expected 'n=<int>;'")
    n = int(m.group(1))
    if n < 1:
        raise ValueError("strand count must be at least 1")
    twists = [0] * n
    letters = []
    cur = list(range(n))          # cur[pos] = strand occupying pos
    for tok in re.finditer(r"\S+", text[m.end():]):
        item = _ITEM.match(tok.group())
        if not item:
            raise ValueError("syntax error at position %d: %r"
                             % (m.end() + tok.start(), tok.group()))
        kind, idx, power = item.group(1), int(item.group(2)), item.group(3)
        r = 1 if power is None else int(power)
        if kind == "t":
            if not 1 <= idx <= n:
                raise ValueError("twist index %d out of range for %d strands"
                                 % (idx, n))
            twists[cur[idx - 1]] += r
        else:
            if not 1 <= idx < n:
                raise ValueError("generator index %d out of range for %d strands"
                                 % (idx, n))
            sign = 1 if r >= 0 else -1
            for _ in range(abs(r)):
                letters.append((idx, sign))
                cur[idx - 1], cur[idx] = cur[idx], cur[idx - 1]
    return FramedBraidWord(n, twists, letters)


def word_to_string(b):
    parts = ["n=%d;" % b.strands]
    for k, r in enumerate(b.twists):
        if r:
            parts.append("t%d^%d" % (k + 1, r) if r != 1 else "t%d" % (k + 1))
    for i, sign in b.word:
        parts.append("s%d" % i if sign > 0 else "s%d^-1" % i)
    return " ".join(parts)


class Move:
    """One diagram move, identified by kind plus its parameters.

    Kinds: r2_insert, r2_remove, r3, far_comm, twist_slide, twist_cancel,
    conjugate.  Word positions are 0-based; strand and index parameters
    are 1-based like the grammar.
    """

    def __init__(self, kind, **params):
        self.kind = kind
        self.params = dict(params)

    def __repr__(self):
        inner = ", ".join("%s=%r" % kv for kv in sorted(self.params.items()))
        return "Move(%s%s%s)" % (self.kind, ", " if inner else "", inner)

    def __eq__(self, other):
        if not isinstance(other, Move):
            return NotImplemented
        return self.kind == other.kind and self.params == other.params


def r2_insert(pos, index, sign=1):
    return Move("r2_insert", pos=pos, index=index, sign=sign)


def r2_remove(pos):
    return Move("r2_remove", pos=pos)


def r3(pos):
    return Move("r3", pos=pos)


def far_comm(pos):
    return Move("far_comm", pos=pos)


def twist_slide(strand, amount=1):
    return Move("twist_slide", strand=strand, amount=amount)


def twist_cancel(strand, amount=1):
    return Move("twist_cancel", strand=strand, amount=amount)


def conjugate(by):
    return Move("conjugate", by=tuple((int(i), int(s)) for i, s in by))


def apply_move(b, move):
    """Apply one move, returning a new word presenting the same framed link."""
    word = list(b.word)
    if move.kind == "r2_insert":
        pos, i, sign = move.params["pos"], move.params["index"], move.params["sign"]
        if not 0 <= pos <= len(word):
            raise MoveError("insertion position %d out of range" % pos)
        if not 1 <= i < b.strands:
            raise MoveError("generator index %d out of range" % i)
        word[pos:pos] = [(i, sign), (i, -sign)]
        return FramedBraidWord(b.strands, b.twists, word)
    if move.kind == "r2_remove":
        pos = move.params["pos"]
        if not 0 <= pos + 1 < len(word):
            raise MoveError("no letter pair at position %d" % pos)
        (i1, s1), (i2, s2) = word[pos], word[pos + 1]
        if i1 != i2 or s1 != -s2:
            raise MoveError("letters at position %d are not inverse" % pos)
        del word[pos:pos + 2]
        return FramedBraidWord(b.strands, b.twists, word)
    if move.kind == "r3":
        pos = move.params["pos"]
        if not 0 <= pos + 2 < len(word):
            raise MoveError("no letter triple at position %d" % pos)
        (i1, s1), (i2, s2), (i3, s3) = word[pos:pos + 3]
        if not (s1 == s2 == s3 and i1 == i3 and abs(i1 - i2) == 1):
            raise MoveError("letters at position %d do not match the braid relation"
                            % pos)
        word[pos:pos + 3] = [(i2, s1), (i1, s1), (i2, s1)]
        return FramedBraidWord(b.strands, b.twists, word)
    if move.kind == "far_comm":
        pos = move.params["pos"]
        if not 0 <= pos + 1 < len(word):
            raise MoveError("no letter pair at position %d" % pos)
        (i1, s1), (i2, s2) = word[pos], word[pos + 1]
        if abs(i1 - i2) < 2:
            raise MoveError("generators at position %d are adjacent" % pos)
        word[pos], word[pos + 1] = (i2, s2), (i1, s1)
        return FramedBraidWord(b.strands, b.twists, word)
    if move.kind == "twist_slide":
        a, r = move.params["strand"], move.params["amount"]
        if not 1 <= a <= b.strands:
            raise MoveError("strand %d out of range" % a)
        rho = b.permutation()
        twists = list(b.twists)
        twists[a - 1] -= r
        twists[rho[a - 1]] += r
        return FramedBraidWord(b.strands, twists, word)
    if move.kind == "twist_cancel":
        a = move.params["strand"]
        if not 1 <= a <= b.strands:
            raise MoveError("strand %d out of range" % a)
        # opposite twists annihilate; on the normal form the insertion of
        # +r and -r on one strand is already absorbed by integer addition
        return FramedBraidWord(b.strands, b.twists, word)
    if move.kind == "conjugate":
        by = move.params["by"]
        for i, _s in by:
            if not 1 <= i < b.strands:
                raise MoveError("generator index %d out of range" % i)
        cur = list(range(b.strands))
        for i, _s in by:
            cur[i - 1], cur[i] = cur[i], cur[i - 1]
        twists = [0] * b.strands
        for p in range(b.strands):
            twists[cur[p]] += b.twists[p]
        new_word = list(by) + word + [(i, -s) for i, s in reversed(by)]
        return FramedBraidWord(b.strands, twists, new_word)
    raise MoveError("unknown move kind %r" % move.kind)


def enumerate_applicable_moves(b, conjugators=None):
    """Deterministic list of moves that apply_move accepts on b.

    Insertions are enumerated at every position and generator; removals,
    braid-relation rewrites and far commutations wherever the word
    matches; twist moves per strand; conjugations by the given letters
    (default: every single generator, both signs).
    """
    moves = []
    word = b.word
    for pos in range(len(word) + 1):
        for i in range(1, b.strands):
            for sign in (1, -1):
                moves.append(r2_insert(pos, i, sign))
    for pos in range(len(word) - 1):
        (i1, s1), (i2, s2) = word[pos], word[pos + 1]
        if i1 == i2 and s1 == -s2:
            moves.append(r2_remove(pos))
        if abs(i1 - i2) >= 2:
            moves.append(far_comm(pos))
    for pos in range(len(word) - 2):
        (i1, s1), (i2, s2), (i3, s3) = word[pos:pos + 3]
        if s1 == s2 == s3 and i1 == i3 and abs(i1 - i2) == 1:
            moves.append(r3(pos))
    for a in range(1, b.strands + 1):
        moves.append(twist_slide(a, 1))
        moves.append(twist_cancel(a, 1))
        if b.twists[a - 1]:
            moves.append(twist_slide(a, b.twists[a - 1]))
    if conjugators is None:
        conjugators = [[(i, s)] for i in range(1, b.strands) for s in (1, -1)]
    for by in conjugators:
        moves.append(conjugate(by))
    return moves
