"""Degree sets: which vertex degrees a graph is allowed to have.

A set is written in a small text DSL::

    even | odd | ge:<s> | set:<k1>,<k2>,... | pow2:<cutoff>

optionally followed by ``|cut:<K>``, which truncates the set to elements
``<= K``.  Infinite sets without a cutoff are handled by adaptive series
truncation downstream; the powers-of-two set always needs one.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

import numpy as np

__all__ = ["DegreeSet", "DegreeSetError", "parse_degree_set", "admissible_n"]


class DegreeSetError(ValueError):
    """Raised for malformed or unsupported degree-set specifications."""


_KINDS = ("explicit", "parity", "tail", "pow2")


@dataclass(frozen=True)
class DegreeSet:
    """A non-empty set S of non-negative integers.

    ``kind`` is one of ``explicit`` (finite list), ``parity`` (all even or
    all odd numbers; ``param`` is the residue), ``tail`` (``{k >= param}``)
    or ``pow2`` (``{1, 2, 4, ...}``).  ``cutoff`` truncates the set to
    elements ``<= cutoff``; it is ``None`` only for infinite sets.
    """

    kind: str
    elements: tuple[int, ...] = ()
    param: int = 0
    cutoff: int | None = None
    allow_trivial: bool = False

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise DegreeSetError(f"unknown degree-set kind {self.kind!r}")
        if self.kind == "pow2" and self.cutoff is None:
            raise DegreeSetError("pow2 sets need an explicit cutoff")
        if self.cutoff is not None and self.cutoff < 0:
            raise DegreeSetError("cutoff must be non-negative")
        if self.kind == "explicit":
            if any(k < 0 for k in self.elements):
                raise DegreeSetError("degrees must be non-negative")
            if tuple(sorted(set(self.elements))) != self.elements:
                raise DegreeSetError("explicit elements must be sorted and distinct")
        if self.kind == "parity" and self.param not in (0, 1):
            raise DegreeSetError("parity residue must be 0 or 1")
        if self.kind == "tail" and self.param < 0:
            raise DegreeSetError("degrees must be non-negative")
        if self.is_empty:
            raise DegreeSetError("degree set is empty")
        if self.is_trivial and not self.allow_trivial:
            raise DegreeSetError("S = {0} is only allowed with allow_trivial=True")

    # -- membership -------------------------------------------------------

    def _raw_contains(self, k: int) -> bool:
        if k < 0:
            return False
        if self.kind == "explicit":
            return k in self.elements
        if self.kind == "parity":
            return k % 2 == self.param
        if self.kind == "tail":
            return k >= self.param
        return k > 0 and (k & (k - 1)) == 0

    def __contains__(self, k) -> bool:
        k = int(k)
        if self.cutoff is not None and k > self.cutoff:
            return False
        return self._raw_contains(k)

    def members(self, upto: int) -> np.ndarray:
        """Sorted elements of S that are ``<= upto``, as an int64 array."""
        upto = int(upto)
        if self.cutoff is not None:
            upto = min(upto, self.cutoff)
        if upto < 0:
            return np.empty(0, dtype=np.int64)
        if self.kind == "explicit":
            els = np.asarray(self.elements, dtype=np.int64)
            return els[els <= upto]
        if self.kind == "parity":
            return np.arange(self.param, upto + 1, 2, dtype=np.int64)
        if self.kind == "tail":
            return np.arange(self.param, upto + 1, dtype=np.int64)
        out = []
        k = 1
        while k <= upto:
            out.append(k)
            k *= 2
        return np.asarray(out, dtype=np.int64)

    def __iter__(self) -> Iterator[int]:
        if not self.is_finite:
            raise TypeError("cannot iterate an infinite degree set; use members()")
        return iter(int(k) for k in self.members(self.max_element))

    # -- structural facts -------------------------------------------------

    @property
    def is_finite(self) -> bool:
        return self.kind == "explicit" or self.cutoff is not None

    @cached_property
    def max_element(self) -> int | None:
        if self.kind == "explicit":
            els = [k for k in self.elements if self.cutoff is None or k <= self.cutoff]
            return els[-1] if els else None
        if self.cutoff is None:
            return None
        m = self.members(self.cutoff)
        return int(m[-1]) if len(m) else None

    @cached_property
    def min_element(self) -> int | None:
        if self.kind == "explicit":
            m = self.members(self.elements[-1]) if self.elements else []
            return int(m[0]) if len(m) else None
        start = {"parity": self.param, "tail": self.param, "pow2": 1}[self.kind]
        if self.cutoff is not None and start > self.cutoff:
            return None
        return start

    @property
    def is_empty(self) -> bool:
        return self.min_element is None

    @property
    def is_trivial(self) -> bool:
        """True for S = {0}."""
        return self.min_element == 0 and self.max_element == 0

    @property
    def size(self) -> int | None:
        """Number of elements, or None when infinite."""
        if not self.is_finite:
            return None
        return len(self.members(self.max_element))

    @property
    def parity_class(self) -> int | None:
        """0 if every element is even, 1 if every element is odd, else None."""
        if self.kind == "parity":
            return self.param
        if self.is_finite:
            m = self.members(self.max_element)
            par = set(int(k) % 2 for k in m)
            return par.pop() if len(par) == 1 else None
        if self.kind == "pow2":
            return None
        # infinite tail set
        return None

    @property
    def all_odd(self) -> bool:
        return self.parity_class == 1

    def shifted_down(self) -> "DegreeSet":
        """The set ``{k >= 0 : k + 1 in S}``."""
        if self.kind == "parity":
            cut = None if self.cutoff is None else self.cutoff - 1
            return DegreeSet("parity", param=1 - self.param, cutoff=cut, allow_trivial=True)
        if self.kind == "tail":
            cut = None if self.cutoff is None else self.cutoff - 1
            return DegreeSet("tail", param=max(self.param - 1, 0), cutoff=cut,
                             allow_trivial=True)
        els = tuple(int(k) - 1 for k in self.members(self.max_element) if k >= 1)
        if not els:
            raise DegreeSetError("shifted set is empty (S is {0})")
        return DegreeSet("explicit", elements=els, allow_trivial=True)

    # -- text form --------------------------------------------------------

    @property
    def label(self) -> str:
        if self.kind == "explicit":
            return "set:" + ",".join(str(k) for k in self.members(self.max_element))
        if self.kind == "pow2":
            return f"pow2:{self.cutoff}"
        base = {0: "even", 1: "odd"}[self.param] if self.kind == "parity" else f"ge:{self.param}"
        if self.cutoff is not None:
            base += f"|cut:{self.cutoff}"
        return base

    def __str__(self) -> str:
        return self.label


def _parse_int(text: str, what: str) -> int:
    try:
        return int(text.strip())
    except ValueError:
        raise DegreeSetError(f"bad {what}: {text!r}") from None


def parse_degree_set(spec: str, allow_trivial: bool = False) -> DegreeSet:
    """Parse the degree-set DSL into a canonical :class:`DegreeSet`.

    >>> parse_degree_set("set:3,0").label
    'set:0,3'
    >>> parse_degree_set("pow2:64").members(100).tolist()
    [1, 2, 4, 8, 16, 32, 64]
    """
    if not isinstance(spec, str) or not spec.strip():
        raise DegreeSetError("empty degree-set specification")
    head, *mods = [part.strip() for part in spec.strip().split("|")]
    cutoff = None
    for mod in mods:
        key, _, val = mod.partition(":")
        if key != "cut" or not val:
            raise DegreeSetError(f"unknown modifier {mod!r}")
        cutoff = _parse_int(val, "cutoff")
        if cutoff < 0:
            raise DegreeSetError("cutoff must be non-negative")

    name, _, arg = head.partition(":")
    name = name.strip().lower()
    if name in ("even", "odd"):
        if arg:
            raise DegreeSetError(f"{name} takes no argument")
        return DegreeSet("parity", param=0 if name == "even" else 1, cutoff=cutoff,
                         allow_trivial=allow_trivial)
    if name == "ge":
        s = _parse_int(arg, "tail start")
        if s < 0:
            raise DegreeSetError("degrees must be non-negative")
        return DegreeSet("tail", param=s, cutoff=cutoff, allow_trivial=allow_trivial)
    if name == "set":
        items = [x for x in arg.split(",") if x.strip()]
        if not items:
            raise DegreeSetError("degree set is empty")
        els = [_parse_int(x, "degree") for x in items]
        if any(k < 0 for k in els):
            raise DegreeSetError("degrees must be non-negative")
        if cutoff is not None:
            els = [k for k in els if k <= cutoff]
        if not els:
            raise DegreeSetError("degree set is empty")
        return DegreeSet("explicit", elements=tuple(sorted(set(els))),
                         allow_trivial=allow_trivial)
    if name == "pow2":
        if not arg:
            raise DegreeSetError("pow2 needs a cutoff, e.g. pow2:64")
        cut = _parse_int(arg, "cutoff")
        if cutoff is not None:
            cut = min(cut, cutoff)
        if cut < 1:
            raise DegreeSetError("degree set is empty")
        # canonical cutoff is the largest power of two kept
        cut = 1 << (cut.bit_length() - 1)
        return DegreeSet("pow2", cutoff=cut, allow_trivial=allow_trivial)
    raise DegreeSetError(f"unknown degree-set kind {name!r}")


def admissible_n(S: DegreeSet, n: int) -> bool:
    """Whether an S-graph on ``n`` vertices can exist at the parity level."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return True
    if S.all_odd:
        return n % 2 == 0
    return True
