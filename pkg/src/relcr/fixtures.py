"""The worked example structures used across the test suite and shipped as
fixture files: two pairs of structures that plain graph encodings cannot
tell apart, and the small three-column structure of the slice examples."""

from __future__ import annotations

from .core import Signature, Structure

SIG_CYCLES = Signature([("E", 2), ("R", 6)])
SIG_OVERLAP = Signature([("E", 2), ("F", 2), ("R", 3)])
SIG_TRIPLE = Signature([("R", 3)])

_ELEMS = ["1", "2", "3", "u", "v", "w"]


def a1() -> Structure:
    """Two directed triangles plus one 6-ary tuple over all elements."""
    facts = [("E", e) for e in
             [("1", "2"), ("2", "3"), ("3", "1"),
              ("u", "v"), ("v", "w"), ("w", "u")]]
    facts.append(("R", tuple(_ELEMS)))
    return Structure.from_named(SIG_CYCLES, facts, universe=_ELEMS)


def b1() -> Structure:
    """One directed 6-cycle plus the same 6-ary tuple."""
    facts = [("E", e) for e in
             [("1", "2"), ("2", "w"), ("w", "u"),
              ("u", "v"), ("v", "3"), ("3", "1")]]
    facts.append(("R", tuple(_ELEMS)))
    return Structure.from_named(SIG_CYCLES, facts, universe=_ELEMS)


_R_OVERLAP = [("1", "2", "3"), ("u", "v", "w"), ("1", "v", "3"), ("u", "2", "w")]


def a2() -> Structure:
    facts = [("E", e) for e in
             [("1", "2"), ("2", "3"), ("3", "1"),
              ("u", "v"), ("v", "w"), ("w", "u")]]
    facts += [("F", e) for e in [("2", "w"), ("v", "3")]]
    facts += [("R", t) for t in _R_OVERLAP]
    return Structure.from_named(SIG_OVERLAP, facts, universe=_ELEMS)


def b2() -> Structure:
    facts = [("E", e) for e in
             [("1", "2"), ("2", "w"), ("w", "u"),
              ("u", "v"), ("v", "3"), ("3", "1")]]
    facts += [("F", e) for e in [("2", "3"), ("v", "w")]]
    facts += [("R", t) for t in _R_OVERLAP]
    return Structure.from_named(SIG_OVERLAP, facts, universe=_ELEMS)


def slice_example() -> Structure:
    """R = {(1,1,2), (2,3,2)}; its slice set has exactly seven members."""
    return Structure.from_named(
        SIG_TRIPLE, [("R", ("1", "1", "2")), ("R", ("2", "3", "2"))])
