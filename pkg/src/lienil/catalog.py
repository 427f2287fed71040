"""Built-in catalog of small p-groups plus presentation/table file parsers.

The file format for power-commutator presentations is line oriented:

    p <prime>
    gens <n>
    pow <i> : <word>
    comm <j> <i> : <word>     # requires j > i
    word := "e" | x<k>^<e> tokens, k strictly increasing, 1 <= e < p

Cayley tables:

    order <N>
    <N rows of N whitespace-separated 0-based indices; element 0 = identity>

Every builtin entry stores its presentation inline in this format, so the
parser is exercised on every catalog build.
"""

import re
from dataclasses import dataclass, field

from .errors import InputError
from .pcgroup import DEFAULT_ORDER_CAP, PcPresentation, build_group, group_from_table

__all__ = [
    "CatalogEntry",
    "builtin_catalog",
    "catalog_names",
    "get_entry",
    "parse_pc_file",
    "serialize_pc",
    "parse_cayley_file",
    "load_group",
]


@dataclass
class CatalogEntry:
    name: str
    source: str                      # presentation text, parseable
    tags: tuple = ()
    expected: dict = field(default_factory=dict)

    @property
    def presentation(self):
        return parse_pc_file(self.source)

    def build(self, order_cap=DEFAULT_ORDER_CAP):
        return build_group(self.presentation, order_cap=order_cap)


_TOKEN = re.compile(r"^x(\d+)(?:\^(\d+))?$")


def _parse_word(text, lineno, p, n_gens, min_gen, what):
    text = text.strip()
    if text == "e" or not text:
        return ()
    word = []
    last = min_gen - 1
    for tok in text.split():
        m = _TOKEN.match(tok)
        if not m:
            raise InputError(f"line {lineno}: bad token {tok!r} in {what}")
        k = int(m.group(1))
        e = int(m.group(2)) if m.group(2) else 1
        if not (1 <= k <= n_gens):
            raise InputError(f"line {lineno}: generator x{k} out of range in {what}")
        if k <= last:
            raise InputError(
                f"line {lineno}: {what} must use strictly increasing generators "
                f"beyond x{min_gen - 1 if min_gen > 1 else ''}".rstrip()
                if min_gen <= 1
                else f"line {lineno}: word must use generators > x{min_gen - 1} "
                f"in strictly increasing order ({what})"
            )
        if not (1 <= e < p):
            raise InputError(f"line {lineno}: exponent {e} outside [1, {p}) in {what}")
        word.append((k - 1, e))
        last = k
    return tuple(word)


def parse_pc_file(text):
    """Parse the pc presentation format; diagnostics carry line numbers."""
    p = None
    n_gens = None
    powers = {}
    comms = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split(None)
        head = fields[0]
        if head == "p":
            if p is not None:
                raise InputError(f"line {lineno}: duplicate p directive")
            if len(fields) != 2 or not fields[1].isdigit():
                raise InputError(f"line {lineno}: expected 'p <prime>'")
            p = int(fields[1])
        elif head == "gens":
            if n_gens is not None:
                raise InputError(f"line {lineno}: duplicate gens directive")
            if len(fields) != 2 or not fields[1].isdigit():
                raise InputError(f"line {lineno}: expected 'gens <n>'")
            n_gens = int(fields[1])
        elif head in ("pow", "comm"):
            if p is None or n_gens is None:
                raise InputError(
                    f"line {lineno}: p and gens must come before relations"
                )
            body = line[len(head):].strip()
            if ":" not in body:
                raise InputError(f"line {lineno}: missing ':' in {head} relation")
            args, word_text = body.split(":", 1)
            nums = args.split()
            if head == "pow":
                if len(nums) != 1 or not nums[0].isdigit():
                    raise InputError(f"line {lineno}: expected 'pow <i> : <word>'")
                i = int(nums[0])
                if not (1 <= i <= n_gens):
                    raise InputError(f"line {lineno}: generator x{i} out of range")
                if i - 1 in powers:
                    raise InputError(f"line {lineno}: duplicate pow relation for x{i}")
                word = _parse_word(
                    word_text, lineno, p, n_gens, i + 1, f"pow x{i}"
                )
                powers[i - 1] = word
            else:
                if len(nums) != 2 or not all(s.isdigit() for s in nums):
                    raise InputError(
                        f"line {lineno}: expected 'comm <j> <i> : <word>'"
                    )
                j, i = int(nums[0]), int(nums[1])
                if not (1 <= i < j <= n_gens):
                    raise InputError(
                        f"line {lineno}: comm needs n >= j > i >= 1, got ({j}, {i})"
                    )
                if (j - 1, i - 1) in comms:
                    raise InputError(
                        f"line {lineno}: duplicate comm relation for ({j}, {i})"
                    )
                word = _parse_word(
                    word_text, lineno, p, n_gens, j + 1, f"comm (x{j}, x{i})"
                )
                comms[(j - 1, i - 1)] = word
        else:
            raise InputError(f"line {lineno}: unknown directive {head!r}")
    if p is None or n_gens is None:
        raise InputError("presentation must declare p and gens")
    return PcPresentation(p=p, n_gens=n_gens, powers=powers, commutators=comms)


def _word_text(word):
    if not word:
        return "e"
    return " ".join(f"x{g + 1}^{e}" for g, e in word)


def serialize_pc(pres):
    """Canonical text form; parse(serialize(parse(t))) == parse(t)."""
    lines = [f"p {pres.p}", f"gens {pres.n_gens}"]
    for i in sorted(pres.powers):
        lines.append(f"pow {i + 1} : {_word_text(pres.powers[i])}")
    for j, i in sorted(pres.commutators):
        lines.append(f"comm {j + 1} {i + 1} : {_word_text(pres.commutators[(j, i)])}")
    return "\n".join(lines) + "\n"


def parse_cayley_file(text, p):
    """Parse an explicit Cayley table; associativity checked on all triples."""
    rows = []
    order = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if order is None:
            fields = line.split()
            if len(fields) != 2 or fields[0] != "order" or not fields[1].isdigit():
                raise InputError(f"line {lineno}: expected 'order <N>'")
            order = int(fields[1])
            continue
        entries = line.split()
        if len(entries) != order:
            raise InputError(
                f"line {lineno}: expected {order} entries, got {len(entries)}"
            )
        try:
            rows.append([int(x) for x in entries])
        except ValueError:
            raise InputError(f"line {lineno}: non-integer table entry")
    if order is None:
        raise InputError("missing 'order <N>' header")
    if len(rows) != order:
        raise InputError(f"expected {order} table rows, got {len(rows)}")
    return group_from_table(rows, p)


# ---------------------------------------------------------------------------
# builtin entries
# ---------------------------------------------------------------------------

_RAW_ENTRIES = []


def _entry(name, source, tags, expected):
    _RAW_ENTRIES.append(
        CatalogEntry(name=name, source=source, tags=tuple(tags), expected=expected)
    )


# -- abelian controls --------------------------------------------------------

_entry("c2", "p 2\ngens 1\n", ["p=2", "abelian", "cyclic"],
       {"t_lower": 2, "t_upper": 2, "t_augmentation": 2, "derived_order": 1,
        "class": 1, "note": "commutative convention; t(G) = p for C_p"})
_entry("c4", "p 2\ngens 2\npow 1 : x2^1\n", ["p=2", "abelian", "cyclic"],
       {"t_lower": 2, "t_upper": 2, "t_augmentation": 4, "derived_order": 1,
        "class": 1, "note": "t(C_{p^k}) = p^k"})
_entry("klein4", "p 2\ngens 2\n", ["p=2", "abelian", "elementary"],
       {"t_lower": 2, "t_upper": 2, "t_augmentation": 3, "derived_order": 1,
        "class": 1, "note": "t = 1 + 2(p-1)"})
_entry("c3", "p 3\ngens 1\n", ["p=3", "abelian", "cyclic"],
       {"t_lower": 2, "t_upper": 2, "t_augmentation": 3, "derived_order": 1,
        "class": 1, "note": "t(G) = p for C_p"})
_entry("c9", "p 3\ngens 2\npow 1 : x2^1\n", ["p=3", "abelian", "cyclic"],
       {"t_lower": 2, "t_upper": 2, "t_augmentation": 9, "derived_order": 1,
        "class": 1, "note": "t(C_9) = 9"})
_entry("c27", "p 3\ngens 3\npow 1 : x2^1\npow 2 : x3^1\n",
       ["p=3", "abelian", "cyclic"],
       {"t_lower": 2, "t_upper": 2, "t_augmentation": 27, "derived_order": 1,
        "class": 1, "note": "t(C_27) = 27"})
_entry("c9xc3", "p 3\ngens 3\npow 1 : x3^1\n", ["p=3", "abelian", "invariants (2,1)"],
       {"t_lower": 2, "t_upper": 2, "t_augmentation": 11, "derived_order": 1,
        "class": 1, "note": "t = 1 + (9-1) + (3-1) = 11"})
_entry("e81", "p 3\ngens 4\n", ["p=3", "abelian", "elementary (C3)^4"],
       {"t_lower": 2, "t_upper": 2, "t_augmentation": 9, "derived_order": 1,
        "class": 1, "note": "t = 1 + 4(p-1)"})
_entry("c5", "p 5\ngens 1\n", ["p=5", "abelian", "cyclic"],
       {"t_lower": 2, "t_upper": 2, "t_augmentation": 5, "derived_order": 1,
        "class": 1, "note": "t(G) = p for C_p"})
_entry("c25", "p 5\ngens 2\npow 1 : x2^1\n", ["p=5", "abelian", "cyclic"],
       {"t_lower": 2, "t_upper": 2, "t_augmentation": 25, "derived_order": 1,
        "class": 1, "note": "t(C_25) = 25"})

# -- p = 2 -------------------------------------------------------------------

_entry("d4", "p 2\ngens 3\npow 2 : x3^1\ncomm 2 1 : x3^1\n",
       ["p=2", "dihedral of order 8", "class 2"],
       {"t_lower": 3, "t_upper": 3, "derived_order": 2, "class": 2,
        "note": "forced: p+1 <= t_L <= t^L <= |G'|+1 pins both at 3"})
_entry("q8", "p 2\ngens 3\npow 1 : x3^1\npow 2 : x3^1\ncomm 2 1 : x3^1\n",
       ["p=2", "quaternion of order 8", "class 2"],
       {"t_lower": 3, "t_upper": 3, "derived_order": 2, "class": 2,
        "note": "forced: |G'| = 2"})
_entry("d8",
       "p 2\ngens 4\npow 2 : x3^1\npow 3 : x4^1\n"
       "comm 2 1 : x3^1 x4^1\ncomm 3 1 : x4^1\n",
       ["p=2", "dihedral of order 16", "class 3", "G' = C4"],
       {"t_lower": 5, "t_upper": 5, "derived_order": 4, "class": 3,
        "note": "computed; closed form gives 5 = |G'|+1"})
_entry("q16",
       "p 2\ngens 4\npow 1 : x4^1\npow 2 : x3^1\npow 3 : x4^1\n"
       "comm 2 1 : x3^1 x4^1\ncomm 3 1 : x4^1\n",
       ["p=2", "generalized quaternion of order 16", "class 3", "G' = C4"],
       {"t_lower": 5, "t_upper": 5, "derived_order": 4, "class": 3,
        "note": "computed; same chain as d8"})
_entry("m16",
       "p 2\ngens 4\npow 2 : x3^1\npow 3 : x4^1\ncomm 2 1 : x4^1\n",
       ["p=2", "modular group of order 16", "class 2", "G' = C2"],
       {"t_lower": 3, "t_upper": 3, "derived_order": 2, "class": 2,
        "note": "forced: |G'| = 2"})
_entry("es32",
       "p 2\ngens 5\npow 2 : x5^1\npow 4 : x5^1\n"
       "comm 2 1 : x5^1\ncomm 4 3 : x5^1\n",
       ["p=2", "extraspecial of order 32 (central product of two d4)", "class 2"],
       {"t_lower": 3, "t_upper": 3, "derived_order": 2, "class": 2,
        "note": "forced: |G'| = 2"})
_entry("d16",
       "p 2\ngens 5\npow 2 : x3^1\npow 3 : x4^1\npow 4 : x5^1\n"
       "comm 2 1 : x3^1 x4^1 x5^1\ncomm 3 1 : x4^1 x5^1\ncomm 4 1 : x5^1\n",
       ["p=2", "dihedral of order 32", "class 4", "G' = C8"],
       {"t_lower": 9, "t_upper": 9, "derived_order": 8, "class": 4,
        "note": "computed; 9 = |G'|+1"})
_entry("c2wrc4",
       "p 2\ngens 6\npow 1 : x2^1\n"
       "comm 3 1 : x4^1\ncomm 4 1 : x5^1\ncomm 5 1 : x6^1\n"
       "comm 3 2 : x5^1\ncomm 4 2 : x6^1\n",
       ["p=2", "wreath product C2 wr C4", "class 4", "G' = (C2)^3"],
       {"t_lower": 8, "t_upper": 8, "derived_order": 8, "class": 4,
        "note": "computed; d profile (1,1,1) gives 8"})
_entry("g64cl3",
       "p 2\ngens 6\npow 4 : x6^1\n"
       "comm 2 1 : x4^1\ncomm 3 1 : x5^1\ncomm 4 1 : x6^1\ncomm 4 2 : x6^1\n",
       ["p=2", "order 64", "class 3", "G' = C4 x C2"],
       {"t_lower": 6, "t_upper": 6, "derived_order": 8, "class": 3,
        "note": "computed; d profile (2,1) gives 6"})

# -- p = 3 -------------------------------------------------------------------

_entry("heisenberg27", "p 3\ngens 3\ncomm 2 1 : x3^1\n",
       ["p=3", "extraspecial of order 27, exponent 3", "class 2"],
       {"t_lower": 4, "t_upper": 4, "derived_order": 3, "class": 2,
        "note": "forced: |G'| = 3 pins both at 4 = p+1"})
_entry("m27", "p 3\ngens 3\npow 1 : x3^1\ncomm 2 1 : x3^1\n",
       ["p=3", "extraspecial of order 27, exponent 9", "class 2"],
       {"t_lower": 4, "t_upper": 4, "derived_order": 3, "class": 2,
        "note": "forced: |G'| = 3"})
_entry("c3wrc3", "p 3\ngens 4\ncomm 2 1 : x3^1\ncomm 3 1 : x4^1\n",
       ["p=3", "wreath product C3 wr C3, order 81", "maximal class 3",
        "G' = (C3)^2"],
       {"t_lower": 8, "t_upper": 8, "derived_order": 9, "class": 3,
        "note": "computed; d profile (1,1) gives 8"})
_entry("m81b",
       "p 3\ngens 4\npow 2 : x4^1\ncomm 2 1 : x3^1\ncomm 3 1 : x4^1\n",
       ["p=3", "order 81", "maximal class 3", "G' = (C3)^2", "exponent 9"],
       {"t_lower": 8, "t_upper": 8, "derived_order": 9, "class": 3,
        "note": "computed; same d profile as c3wrc3"})
_entry("m81c",
       "p 3\ngens 4\npow 2 : x4^2\ncomm 2 1 : x3^1\ncomm 3 1 : x4^1\n",
       ["p=3", "order 81", "maximal class 3", "G' = (C3)^2", "exponent 9"],
       {"t_lower": 8, "t_upper": 8, "derived_order": 9, "class": 3,
        "note": "computed"})
_entry("m81d",
       "p 3\ngens 4\npow 1 : x4^1\npow 2 : x4^2\ncomm 2 1 : x3^1\ncomm 3 1 : x4^1\n",
       ["p=3", "order 81", "maximal class 3", "G' = (C3)^2", "exponent 9"],
       {"t_lower": 8, "t_upper": 8, "derived_order": 9, "class": 3,
        "note": "computed"})
_entry("g243cl2",
       "p 3\ngens 5\ncomm 2 1 : x4^1\ncomm 3 1 : x5^1\n",
       ["p=3", "order 243", "class 2", "G' = (C3)^2", "exponent 3"],
       {"t_lower": 6, "t_upper": 6, "derived_order": 9, "class": 2,
        "note": "computed; d profile (2,) gives 6 = 2p"})
_entry("g243cl3",
       "p 3\ngens 5\ncomm 2 1 : x3^1\ncomm 3 1 : x4^1\ncomm 3 2 : x5^1\n",
       ["p=3", "order 243", "class 3", "G' = (C3)^3", "gamma_3 = (C3)^2"],
       {"t_lower": 12, "t_upper": 12, "derived_order": 27, "class": 3,
        "note": "computed; d profile (1,2) gives 12 = 5p-3"})
_entry("g243c9",
       "p 3\ngens 5\npow 1 : x2^1\npow 3 : x4^1 x5^1\npow 4 : x5^1\n"
       "comm 3 1 : x4^1\ncomm 3 2 : x5^1\ncomm 4 1 : x5^1\n",
       ["p=3", "order 243", "class 3", "G' = C9"],
       {"t_lower": 10, "t_upper": 10, "derived_order": 9, "class": 3,
        "note": "computed; d profile (1,0,1) gives 10 = 4p-2"})
_entry("sg243",
       "p 3\ngens 5\npow 2 : x4^2\npow 3 : x5^2\n"
       "comm 2 1 : x3^1\ncomm 3 1 : x4^1\ncomm 4 1 : x5^1\n",
       ["p=3", "order 243 quotient of the 3-adic space group",
        "maximal class 4", "G' = C9 x C3", "gamma_3 = (C3)^2"],
       {"t_lower": 14, "t_upper": 14, "derived_order": 27, "class": 4,
        "note": "computed; d profile (1,1,1) gives 14 = 6p-4"})

# -- p = 5 -------------------------------------------------------------------

_entry("heisenberg125", "p 5\ngens 3\ncomm 2 1 : x3^1\n",
       ["p=5", "extraspecial of order 125, exponent 5", "class 2"],
       {"t_lower": 6, "t_upper": 6, "derived_order": 5, "class": 2,
        "note": "forced: |G'| = 5 pins both at 6 = p+1"})
_entry("m125", "p 5\ngens 3\npow 2 : x3^1\ncomm 2 1 : x3^1\n",
       ["p=5", "extraspecial of order 125, exponent 25", "class 2"],
       {"t_lower": 6, "t_upper": 6, "derived_order": 5, "class": 2,
        "note": "forced: |G'| = 5"})
_entry("g625",
       "p 5\ngens 4\npow 1 : x2^1\npow 3 : x4^1\ncomm 3 1 : x4^1\n",
       ["p=5", "order 625, C25 acting on C25", "class 2", "G' = C5"],
       {"t_lower": 6, "t_upper": 6, "derived_order": 5, "class": 2,
        "note": "forced: |G'| = 5; outside the default p=5 scan cap"})


def builtin_catalog():
    """All builtin groups, sorted by name."""
    return sorted(_RAW_ENTRIES, key=lambda e: e.name)


def catalog_names():
    return [e.name for e in builtin_catalog()]


def get_entry(name):
    for entry in _RAW_ENTRIES:
        if entry.name == name:
            return entry
    raise InputError(
        f"unknown catalog group {name!r}; known names: {', '.join(catalog_names())}"
    )


def load_group(ref, order_cap=DEFAULT_ORDER_CAP, p=None):
    """Resolve a group reference: catalog name, .pc file, or .cayley file."""
    import os

    if os.path.exists(ref):
        text = open(ref, encoding="utf-8").read()
        if ref.endswith(".cayley") or text.lstrip().startswith("order"):
            if p is None:
                raise InputError("Cayley-table input needs an explicit prime (--p)")
            return parse_cayley_file(text, p), os.path.basename(ref)
        return build_group(parse_pc_file(text), order_cap=order_cap), os.path.basename(ref)
    entry = get_entry(ref)
    return entry.build(order_cap=order_cap), entry.name
