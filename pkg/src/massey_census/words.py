"""Group words, pro-p presentations, the four standard one-relator families,
and the preset presentations used throughout the test grid."""

from __future__ import annotations

import json

from .unipotent import ExponentToken, P_INFINITY, group_inv, group_mul, group_pow


class Gen:
    """Generator x_i (1-based index)."""

    __slots__ = ("index",)

    def __init__(self, index):
        index = int(index)
        if index < 1:
            raise ValueError(f"generator index must be >= 1, got {index}")
        self.index = index

    def __eq__(self, other):
        return isinstance(other, Gen) and self.index == other.index

    def __hash__(self):
        return hash(("Gen", self.index))

    def __repr__(self):
        return f"Gen({self.index})"


class Prod:
    """Product of words, left to right; the empty product is the identity."""

    __slots__ = ("factors",)

    def __init__(self, *factors):
        if len(factors) == 1 and isinstance(factors[0], (list, tuple)):
            factors = tuple(factors[0])
        for w in factors:
            _check_word(w)
        self.factors = tuple(factors)

    def __eq__(self, other):
        return isinstance(other, Prod) and self.factors == other.factors

    def __hash__(self):
        return hash(("Prod", self.factors))

    def __repr__(self):
        return f"Prod({', '.join(map(repr, self.factors))})"


class Pow:
    """word ** exponent; the exponent may be p-infinity (identity image)."""

    __slots__ = ("word", "exponent")

    def __init__(self, word, exponent):
        _check_word(word)
        if not isinstance(exponent, ExponentToken):
            exponent = ExponentToken(exponent)
        self.word = word
        self.exponent = exponent

    def __eq__(self, other):
        return (
            isinstance(other, Pow)
            and self.word == other.word
            and self.exponent == other.exponent
        )

    def __hash__(self):
        return hash(("Pow", self.word, self.exponent))

    def __repr__(self):
        return f"Pow({self.word!r}, {self.exponent!r})"


class Comm:
    """Commutator [a, b] = a^-1 b^-1 a b."""

    __slots__ = ("left", "right")

    def __init__(self, left, right):
        _check_word(left)
        _check_word(right)
        self.left = left
        self.right = right

    def __eq__(self, other):
        return (
            isinstance(other, Comm)
            and self.left == other.left
            and self.right == other.right
        )

    def __hash__(self):
        return hash(("Comm", self.left, self.right))

    def __repr__(self):
        return f"Comm({self.left!r}, {self.right!r})"


GroupWord = (Gen, Prod, Pow, Comm)


def _check_word(w):
    if not isinstance(w, GroupWord):
        raise TypeError(f"not a group word: {w!r}")


def max_generator(w) -> int:
    """Largest generator index appearing in the word (0 for the empty product)."""
    if isinstance(w, Gen):
        return w.index
    if isinstance(w, Prod):
        return max((max_generator(f) for f in w.factors), default=0)
    if isinstance(w, Pow):
        return max_generator(w.word)
    if isinstance(w, Comm):
        return max(max_generator(w.left), max_generator(w.right))
    raise TypeError(f"not a group word: {w!r}")


def evaluate_word(w, images):
    """Substitute images[i-1] for Gen(i) and multiply out in the image group."""
    images = list(images)
    if not images:
        raise ValueError("need at least one image to fix the target group")
    if isinstance(w, Gen):
        if w.index > len(images):
            raise ValueError(
                f"word uses generator {w.index} but only {len(images)} images given"
            )
        return images[w.index - 1]
    if isinstance(w, Prod):
        acc = type(images[0])(images[0].n, images[0].p)  # identity
        for f in w.factors:
            acc = group_mul(acc, evaluate_word(f, images))
        return acc
    if isinstance(w, Pow):
        return group_pow(evaluate_word(w.word, images), w.exponent)
    if isinstance(w, Comm):
        a = evaluate_word(w.left, images)
        b = evaluate_word(w.right, images)
        return group_mul(group_mul(group_inv(a), group_inv(b)), group_mul(a, b))
    raise TypeError(f"not a group word: {w!r}")


class QInvariant:
    """The invariant q = p^s (s >= 1) of a one-relator group, or p-infinity.

    By the usual convention p-infinity is the value 0.
    """

    __slots__ = ("s",)

    def __init__(self, s):
        if s is not None:
            s = int(s)
            if s < 1:
                raise ValueError("finite q-invariant needs exponent s >= 1")
        self.s = s

    @classmethod
    def finite(cls, s):
        return cls(s)

    @classmethod
    def infinite(cls):
        return cls(None)

    @property
    def is_infinite(self):
        return self.s is None

    def value(self, p) -> int:
        return 0 if self.s is None else p ** self.s

    def __eq__(self, other):
        return isinstance(other, QInvariant) and self.s == other.s

    def __hash__(self):
        return hash(("QInvariant", self.s))

    def __repr__(self):
        return "QInvariant(inf)" if self.is_infinite else f"QInvariant(s={self.s})"


def q_value(q, p) -> int:
    """Normalize a q argument (QInvariant, int value, or 'inf') to an int,
    0 meaning p-infinity; validates that finite values are powers of p >= p."""
    if isinstance(q, QInvariant):
        return q.value(p)
    if isinstance(q, str):
        if q in ("inf", "p-inf", "infinity"):
            return 0
        q = int(q)
    q = int(q)
    if q == 0:
        return 0
    v = q
    while v % p == 0:
        v //= p
    if v != 1 or q < p:
        raise ValueError(f"q = {q} is not a positive power of p = {p}")
    return q


def _f_exponent(f, base_power: int):
    """Turn an f argument (int >= 2, 'inf', or None) into the token for 2^f,
    shifted by base_power (0 or 2): base_power + 2^f, with 2^inf = 0."""
    if f is None:
        raise ValueError("this relator case needs f (an integer >= 2, or 'inf')")
    if isinstance(f, str):
        if f in ("inf", "p-inf", "infinity"):
            f = None
        else:
            f = int(f)
    elif isinstance(f, float) and f == float("inf"):
        f = None
    if f is None:
        if base_power == 0:
            return P_INFINITY, None
        return ExponentToken(base_power), None
    f = int(f)
    if f < 2:
        raise ValueError(f"f must be >= 2, got {f}")
    return ExponentToken(base_power + 2 ** f), f


class Presentation:
    """A generator rank, relator words, and a tag recording the family."""

    __slots__ = ("rank", "relators", "tag")

    def __init__(self, rank, relators=(), tag=None):
        rank = int(rank)
        if rank < 1:
            raise ValueError("rank must be >= 1")
        relators = tuple(relators)
        for r in relators:
            _check_word(r)
            if max_generator(r) > rank:
                raise ValueError(
                    f"relator uses generator {max_generator(r)} beyond rank {rank}"
                )
        self.rank = rank
        self.relators = relators
        self.tag = dict(tag) if tag else {"kind": "custom"}

    def __eq__(self, other):
        return (
            isinstance(other, Presentation)
            and self.rank == other.rank
            and self.relators == other.relators
            and self.tag == other.tag
        )

    def __repr__(self):
        return (
            f"Presentation(rank={self.rank}, relators={len(self.relators)}, "
            f"tag={self.tag})"
        )


def free_presentation(d: int) -> Presentation:
    """The free pro-p presentation on d generators (no relators)."""
    return Presentation(d, (), {"kind": "free"})


DEMUSHKIN_CASES = ("D1", "D2", "D3", "D4")


def _comm_pairs(start: int, d: int):
    """[x_start, x_{start+1}][x_{start+2}, x_{start+3}] ... up to x_d."""
    return [Comm(Gen(i), Gen(i + 1)) for i in range(start, d, 2)]


def demushkin_presentation(d, p, q, case, f=None) -> Presentation:
    """The standard one-relator presentation of the given case.

    Cases: D1 needs q != 2 (at p = 2 that means q >= 4 or infinite) and d even;
    D2 needs p = 2, q = 2, d odd >= 3, f >= 2 or 'inf'; D3 needs p = 2, q = 2,
    d even, f >= 2 or 'inf'; D4 needs p = 2, q = 2, d even >= 4, f >= 2 finite.
    """
    d = int(d)
    if d < 1:
        raise ValueError("rank d must be >= 1")
    if case not in DEMUSHKIN_CASES:
        raise ValueError(f"unknown case {case!r}; expected one of {DEMUSHKIN_CASES}")
    p = int(p)
    qv = q_value(q, p)
    tag = {"kind": "demushkin", "case": case, "d": d, "p": p, "q": qv}

    if case == "D1":
        if d % 2:
            raise ValueError("case D1 needs even rank d")
        if qv == 2:
            raise ValueError("case D1 needs q != 2 (q >= 4 or 'inf' when p = 2)")
        q_token = P_INFINITY if qv == 0 else ExponentToken(qv)
        relator = Prod([Pow(Gen(1), q_token)] + _comm_pairs(1, d))
        return Presentation(d, [relator], tag)

    # the remaining cases are the q = 2 families
    if p != 2 or qv != 2:
        raise ValueError(f"case {case} needs p = 2 and q = 2")
    if case == "D2":
        if d % 2 == 0 or d < 3:
            raise ValueError("case D2 needs odd rank d >= 3")
        tok, f_norm = _f_exponent(f, 0)
        relator = Prod(
            [Pow(Gen(1), 2), Pow(Gen(2), tok)] + _comm_pairs(2, d)
        )
    elif case == "D3":
        if d % 2:
            raise ValueError("case D3 needs even rank d")
        tok, f_norm = _f_exponent(f, 2)
        relator = Prod([Pow(Gen(1), tok)] + _comm_pairs(1, d))
    else:  # D4
        if d % 2:
            raise ValueError("case D4 needs even rank d")
        if d < 4:
            raise ValueError("case D4 needs rank d >= 4")
        tok, f_norm = _f_exponent(f, 0)
        if f_norm is None:
            raise ValueError("case D4 needs a finite f >= 2")
        relator = Prod(
            [Pow(Gen(1), 2), Comm(Gen(1), Gen(2)), Pow(Gen(3), tok)]
            + _comm_pairs(3, d)
        )
    tag["f"] = f_norm  # None records f = infinity
    return Presentation(d, [relator], tag)


def free_product(parts) -> Presentation:
    """Concatenate presentations, shifting the later factors' generators."""
    parts = list(parts)
    if not parts:
        raise ValueError("free product needs at least one factor")
    relators = []
    offset = 0
    for part in parts:
        for r in part.relators:
            relators.append(_shift_word(r, offset))
        offset += part.rank
    return Presentation(
        offset, relators, {"kind": "free_product", "parts": tuple(parts)}
    )


def _shift_word(w, offset):
    if isinstance(w, Gen):
        return Gen(w.index + offset)
    if isinstance(w, Prod):
        return Prod([_shift_word(f, offset) for f in w.factors])
    if isinstance(w, Pow):
        return Pow(_shift_word(w.word, offset), w.exponent)
    if isinstance(w, Comm):
        return Comm(_shift_word(w.left, offset), _shift_word(w.right, offset))
    raise TypeError(f"not a group word: {w!r}")


class RamifiedRelatorData:
    """Deep-commutator relator exponents: relator m is the product of
    [[x_i, x_j], x_k]^e over 1 <= i < j <= n, k <= j, for m = 1..r."""

    __slots__ = ("n", "r", "e")

    def __init__(self, n, e, r=None):
        n = int(n)
        if n < 2:
            raise ValueError("need at least 2 generators")
        cleaned = {}
        max_m = 0
        for (i, j, k, m), val in dict(e).items():
            if not (1 <= i < j <= n and 1 <= k <= j):
                raise ValueError(f"bad commutator indices (i,j,k) = ({i},{j},{k})")
            if m < 1:
                raise ValueError(f"bad relator index m = {m}")
            max_m = max(max_m, m)
            val = int(val)
            if val:
                cleaned[(i, j, k, m)] = val
        if r is None:
            r = max(max_m, 1)
        r = int(r)
        if max_m > r:
            raise ValueError(f"relator index {max_m} exceeds relator count {r}")
        self.n = n
        self.r = r
        self.e = cleaned

    def terms(self, m):
        """Sorted (i, j, k, exponent) terms of relator m."""
        return sorted(
            (i, j, k, v) for (i, j, k, mm), v in self.e.items() if mm == m
        )

    def __eq__(self, other):
        return (
            isinstance(other, RamifiedRelatorData)
            and (self.n, self.r, self.e) == (other.n, other.r, other.e)
        )

    def __repr__(self):
        return f"RamifiedRelatorData(n={self.n}, r={self.r}, terms={len(self.e)})"


def ramified_presentation(data: RamifiedRelatorData, p) -> Presentation:
    """Spell the exponent tensor out as explicit deep-commutator relators."""
    relators = []
    for m in range(1, data.r + 1):
        factors = []
        for (i, j, k, e) in data.terms(m):
            e = e % p
            if not e:
                continue
            comm = Comm(Comm(Gen(i), Gen(j)), Gen(k))
            factors.append(comm if e == 1 else Pow(comm, e))
        if len(factors) == 1:
            relators.append(factors[0])
        elif factors:
            relators.append(Prod(factors))
    return Presentation(data.n, relators, {"kind": "custom", "name": "ramified"})


_PRESET_NAMES = ("ram01", "borromean", "counterexample1")


def preset(name: str) -> Presentation:
    """Named presentations behind the worked examples and the k=4 counterexample."""
    if name == "ram01":
        pres = free_presentation(3)
        pres.tag["name"] = "ram01"
        return pres
    if name == "borromean":
        r1 = Comm(Comm(Gen(2), Gen(3)), Gen(1))
        r2 = Comm(Comm(Gen(1), Gen(3)), Gen(2))
        return Presentation(3, [r1, r2], {"kind": "custom", "name": "borromean"})
    if name == "counterexample1":
        r = Comm(Comm(Gen(2), Gen(3)), Gen(1))
        return Presentation(4, [r], {"kind": "custom", "name": "counterexample1"})
    raise ValueError(f"unknown preset {name!r}; expected one of {_PRESET_NAMES}")


def preset_tensor(name: str) -> RamifiedRelatorData:
    """The deep-commutator exponent tensor matching each preset."""
    if name == "ram01":
        return RamifiedRelatorData(3, {}, r=3)
    if name == "borromean":
        return RamifiedRelatorData(
            3, {(2, 3, 1, 1): 1, (1, 3, 2, 2): 1}, r=2
        )
    if name == "counterexample1":
        return RamifiedRelatorData(4, {(2, 3, 1, 1): 1}, r=1)
    raise ValueError(f"unknown preset {name!r}; expected one of {_PRESET_NAMES}")


# --- JSON wire format -------------------------------------------------------
#
# Words are nested arrays: ["gen", i], ["prod", w, ...], ["pow", w, e] with e
# an integer or the string "p-inf", ["comm", w1, w2].  A presentation file is
# {"rank": d, "relators": [word, ...]} or {"preset": name}.  Relator-tensor
# files are {"n": 3, "relators": [{"m": 1, "terms": [{"i":2,"j":3,"k":1,"e":1},
# ...]}, ...]}.


def word_from_json(obj, path="word"):
    if not isinstance(obj, list) or not obj:
        raise ValueError(f"{path}: expected a non-empty array")
    kind = obj[0]
    if kind == "gen":
        if len(obj) != 2 or not isinstance(obj[1], int):
            raise ValueError(f"{path}: \"gen\" takes one integer index")
        if obj[1] < 1:
            raise ValueError(f"{path}: generator index must be >= 1")
        return Gen(obj[1])
    if kind == "prod":
        return Prod(
            [word_from_json(w, f"{path}.prod[{i}]") for i, w in enumerate(obj[1:])]
        )
    if kind == "pow":
        if len(obj) != 3:
            raise ValueError(f"{path}: \"pow\" takes a word and an exponent")
        e = obj[2]
        if e == "p-inf":
            token = P_INFINITY
        elif isinstance(e, int) and not isinstance(e, bool):
            token = ExponentToken(e)
        else:
            raise ValueError(
                f"{path}: exponent must be an integer or \"p-inf\", got {e!r}"
            )
        return Pow(word_from_json(obj[1], f"{path}.pow"), token)
    if kind == "comm":
        if len(obj) != 3:
            raise ValueError(f"{path}: \"comm\" takes exactly two words")
        return Comm(
            word_from_json(obj[1], f"{path}.comm[0]"),
            word_from_json(obj[2], f"{path}.comm[1]"),
        )
    raise ValueError(
        f"{path}: unknown word kind {kind!r} (expected gen/prod/pow/comm)"
    )


def word_to_json(w):
    if isinstance(w, Gen):
        return ["gen", w.index]
    if isinstance(w, Prod):
        return ["prod"] + [word_to_json(f) for f in w.factors]
    if isinstance(w, Pow):
        e = "p-inf" if w.exponent.is_infinite else w.exponent.value
        return ["pow", word_to_json(w.word), e]
    if isinstance(w, Comm):
        return ["comm", word_to_json(w.left), word_to_json(w.right)]
    raise TypeError(f"not a group word: {w!r}")


def presentation_from_json(obj) -> Presentation:
    if not isinstance(obj, dict):
        raise ValueError("presentation file must be a JSON object")
    if "preset" in obj:
        return preset(obj["preset"])
    if "rank" not in obj:
        raise ValueError("presentation object needs \"rank\" (or \"preset\")")
    rank = obj["rank"]
    if not isinstance(rank, int) or rank < 1:
        raise ValueError(f"\"rank\" must be a positive integer, got {rank!r}")
    relators = obj.get("relators", [])
    if not isinstance(relators, list):
        raise ValueError("\"relators\" must be an array of words")
    words = [
        word_from_json(w, f"relators[{i}]") for i, w in enumerate(relators)
    ]
    return Presentation(rank, words, {"kind": "custom", "name": obj.get("name")})


def ramified_data_from_json(obj) -> RamifiedRelatorData:
    if not isinstance(obj, dict) or "n" not in obj:
        raise ValueError("relator-tensor file must be an object with \"n\"")
    n = obj["n"]
    relators = obj.get("relators", [])
    e = {}
    max_m = 0
    for ri, rel in enumerate(relators):
        if not isinstance(rel, dict) or "m" not in rel:
            raise ValueError(f"relators[{ri}]: expected an object with \"m\"")
        m = rel["m"]
        max_m = max(max_m, m)
        for ti, term in enumerate(rel.get("terms", [])):
            where = f"relators[{ri}].terms[{ti}]"
            try:
                i, j, k, ev = term["i"], term["j"], term["k"], term["e"]
            except (TypeError, KeyError) as exc:
                raise ValueError(f"{where}: needs keys i, j, k, e") from exc
            key = (i, j, k, m)
            e[key] = e.get(key, 0) + ev
    return RamifiedRelatorData(n, e, r=max(max_m, len(relators), 1))


def load_presentation_file(path: str):
    """Load a presentation or relator tensor from a JSON file; returns either
    a Presentation or a RamifiedRelatorData depending on the keys present."""
    with open(path) as fh:
        text = fh.read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: "
            f"{exc.msg}"
        ) from None
    if isinstance(obj, dict) and "n" in obj and "rank" not in obj:
        return ramified_data_from_json(obj)
    return presentation_from_json(obj)
