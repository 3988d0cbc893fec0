"""Decision frames of discernment and their set algebra.

Two models are supported: the classical exclusive-hypotheses frame whose
elements form the power set of the atoms (DST mode), and the free model that
additionally admits intersections of atoms, whose elements form the
hyper-power set, i.e. the free distributive lattice over the atoms (DSmT
mode).

Elements are kept in canonical disjunctive form: an antichain of bitmask
terms, each term the intersection of the atoms whose bits are set, the
element being the union of its terms.  This makes equality, lattice order
and meet/join cheap and deterministic.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from enum import Enum

from .errors import ExpressionError, FrameError


class FrameMode(str, Enum):
    DST = "DST"
    DSMT = "DSmT"


#: Tractability bounds on the atom count per mode.
MAX_ATOMS = {FrameMode.DST: 6, FrameMode.DSMT: 4}

_RESERVED_CHARS = set("+.()")


@dataclass(frozen=True)
class Atom:
    """One elementary decision hypothesis.

    ``severity_rank`` is the ordinal position of the decision class and is
    used only for deterministic tie-breaking.
    """

    id: int
    label: str
    severity_rank: int


def _reduce_terms(masks) -> tuple[int, ...]:
    """Apply absorption: drop any term whose atom set contains another term's.

    A term over more atoms is a smaller lattice element, so the union absorbs
    it.  The result is the canonical antichain, sorted ascending.
    """
    unique = sorted(set(masks), key=lambda m: (bin(m).count("1"), m))
    kept: list[int] = []
    for mask in unique:
        if not any(k & mask == k for k in kept):
            kept.append(mask)
    return tuple(sorted(kept))


class FocalElement:
    """A frame element in canonical disjunctive form.

    Instances are created by their :class:`Frame` and are immutable; the
    empty element has no terms and is distinct from every non-empty element.
    """

    __slots__ = ("frame", "terms", "index", "_hash")

    def __init__(self, frame: "Frame", terms: tuple[int, ...], index: int):
        self.frame = frame
        self.terms = terms
        self.index = index  # position in frame.elements; -1 for the empty element
        self._hash = hash((frame.signature, terms))

    @property
    def is_empty(self) -> bool:
        return not self.terms

    def atom_ids(self) -> frozenset[int]:
        """Ids of the atoms that appear anywhere in the canonical form."""
        bits = 0
        for t in self.terms:
            bits |= t
        return frozenset(i for i in range(len(self.frame.atoms)) if bits >> i & 1)

    def dsm_cardinality(self) -> int:
        """Number of elementary regions of the frame's model covered by this element.

        In DST mode this is the number of atoms; in DSmT mode it counts the
        Venn-diagram regions of the free model.
        """
        if self.is_empty:
            raise FrameError("the empty element has no cardinality")
        return self.frame._cardinality(self.terms)

    def includes(self, other: "FocalElement") -> bool:
        """Lattice order: True iff ``other`` <= ``self``."""
        return self.frame.includes(self, other)

    def expression(self) -> str:
        """Serialized form, e.g. ``"HD2+HD3"`` (union) or ``"HD2.HD3"`` (intersection)."""
        if self.is_empty:
            return "∅"
        labels = [a.label for a in self.frame.atoms]
        parts = []
        for term in self.terms:
            parts.append(".".join(labels[i] for i in range(len(labels)) if term >> i & 1))
        return "+".join(parts)

    def __and__(self, other: "FocalElement") -> "FocalElement":
        return self.frame.intersect(self, other)

    def __or__(self, other: "FocalElement") -> "FocalElement":
        return self.frame.union(self, other)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FocalElement)
            and self.terms == other.terms
            and self.frame.signature == other.frame.signature
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"<FocalElement {self.expression()}>"


class Frame:
    """An immutable frame of discernment with its enumerated element lattice."""

    __slots__ = (
        "mode",
        "atoms",
        "signature",
        "elements",
        "empty",
        "theta",
        "_by_terms",
        "_atom_elements",
        "_label_to_id",
        "_cards",
        "_inter_table",
        "_inter_rows",
    )

    def __init__(self, atoms: list[Atom], mode: FrameMode):
        mode = FrameMode(mode)
        self._validate_atoms(atoms, mode)
        self.mode = mode
        self.atoms = tuple(sorted(atoms, key=lambda a: a.id))
        self.signature = (mode.value, tuple(a.label for a in self.atoms))
        self._label_to_id = {a.label: a.id for a in self.atoms}
        self._cards: dict[tuple[int, ...], int] = {}
        self._inter_table = None
        self._inter_rows = None

        self.empty = FocalElement(self, (), -1)
        term_sets = self._enumerate_term_sets()
        term_sets.sort(key=lambda ts: (self._cardinality(ts), ts))
        self.elements = tuple(
            FocalElement(self, ts, i) for i, ts in enumerate(term_sets)
        )
        self._by_terms = {el.terms: el for el in self.elements}
        self._atom_elements = tuple(
            self._by_terms[(1 << a.id,)] for a in self.atoms
        )
        self.theta = self._by_terms[tuple(1 << a.id for a in self.atoms)]

    @staticmethod
    def _validate_atoms(atoms, mode: FrameMode) -> None:
        n = len(atoms)
        if not 1 <= n <= MAX_ATOMS[mode]:
            raise FrameError(
                f"{mode.value} frames support 1..{MAX_ATOMS[mode]} atoms, got {n}"
            )
        if sorted(a.id for a in atoms) != list(range(n)):
            raise FrameError("atom ids must be exactly 0..n-1")
        labels = [a.label for a in atoms]
        if len(set(labels)) != n:
            raise FrameError("atom labels must be unique")
        for label in labels:
            if not label or _RESERVED_CHARS & set(label):
                raise FrameError(
                    f"label {label!r} is empty or contains a reserved character (+ . parentheses)"
                )
        if sorted(a.severity_rank for a in atoms) != list(range(n)):
            raise FrameError("severity ranks must be a permutation of 0..n-1")

    def _enumerate_term_sets(self) -> list[tuple[int, ...]]:
        n = len(self.atoms)
        if self.mode is FrameMode.DST:
            out = []
            for mask in range(1, 1 << n):
                out.append(tuple(1 << i for i in range(n) if mask >> i & 1))
            return out
        # DSmT: all non-empty antichains of non-empty atom subsets.
        masks = list(range(1, 1 << n))
        out = []
        for r in range(1, len(masks) + 1):
            for combo in itertools.combinations(masks, r):
                if all(
                    not (a & b == a or a & b == b)
                    for a, b in itertools.combinations(combo, 2)
                ):
                    out.append(tuple(combo))
        return out

    def _cardinality(self, terms: tuple[int, ...]) -> int:
        cached = self._cards.get(terms)
        if cached is not None:
            return cached
        if self.mode is FrameMode.DST:
            bits = 0
            for t in terms:
                bits |= t
            card = bin(bits).count("1")
        else:
            n = len(self.atoms)
            card = sum(
                1
                for region in range(1, 1 << n)
                if any(t & region == t for t in terms)
            )
        self._cards[terms] = card
        return card

    # -- element accessors ------------------------------------------------

    def atom_element(self, atom: Atom | int | str) -> FocalElement:
        """The singleton element for an atom given by Atom, id, or label."""
        if isinstance(atom, Atom):
            return self._atom_elements[atom.id]
        if isinstance(atom, str):
            aid = self._label_to_id.get(atom)
            if aid is None:
                raise FrameError(f"unknown atom label {atom!r}")
            return self._atom_elements[aid]
        return self._atom_elements[atom]

    def element_from_terms(self, masks) -> FocalElement:
        terms = _reduce_terms(m for m in masks if m)
        if not terms:
            return self.empty
        el = self._by_terms.get(terms)
        if el is None:
            raise FrameError(f"terms {terms} do not name a frame element")
        return el

    def parse(self, expression: str) -> FocalElement:
        """Parse a label expression ('+' union, '.' intersection, parentheses)."""
        return canonicalize(self, expression)

    # -- lattice operations -----------------------------------------------

    def _check_same_frame(self, *els: FocalElement) -> None:
        for el in els:
            if el.frame.signature != self.signature:
                raise FrameError("elements belong to different frames")

    def union(self, a: FocalElement, b: FocalElement) -> FocalElement:
        self._check_same_frame(a, b)
        return self.element_from_terms(a.terms + b.terms)

    def intersect(self, a: FocalElement, b: FocalElement) -> FocalElement:
        self._check_same_frame(a, b)
        if a.is_empty or b.is_empty:
            return self.empty
        if self.mode is FrameMode.DST:
            amask = 0
            for t in a.terms:
                amask |= t
            bmask = 0
            for t in b.terms:
                bmask |= t
            inter = amask & bmask
            if not inter:
                return self.empty
            return self.element_from_terms(
                1 << i for i in range(len(self.atoms)) if inter >> i & 1
            )
        return self.element_from_terms(ta | tb for ta in a.terms for tb in b.terms)

    def includes(self, a: FocalElement, b: FocalElement) -> bool:
        """True iff b <= a in the element lattice."""
        self._check_same_frame(a, b)
        if b.is_empty:
            return True
        if a.is_empty:
            return False
        return all(any(ta & tb == ta for ta in a.terms) for tb in b.terms)

    def intersects(self, a: FocalElement, b: FocalElement) -> bool:
        return not self.intersect(a, b).is_empty

    def complement(self, a: FocalElement) -> FocalElement:
        """Set complement; defined only for DST frames."""
        if self.mode is not FrameMode.DST:
            raise FrameError("complement is undefined on DSmT frames")
        self._check_same_frame(a)
        keep = set(range(len(self.atoms))) - set(a.atom_ids())
        if not keep:
            return self.empty
        return self.element_from_terms(1 << i for i in keep)

    def intersection_table(self):
        """E x E table of element indices for a & b; -1 encodes the empty element.

        Built lazily and cached; used by the combination kernels.
        """
        if self._inter_table is None:
            import numpy as np

            n = len(self.elements)
            table = np.empty((n, n), dtype=np.int32)
            for i, a in enumerate(self.elements):
                for j in range(i, n):
                    idx = self.intersect(a, self.elements[j]).index
                    table[i, j] = idx
                    table[j, i] = idx
            self._inter_table = table
        return self._inter_table

    def intersection_rows(self):
        """intersection_table() as nested tuples for the pure-Python kernel."""
        if self._inter_rows is None:
            self._inter_rows = tuple(
                tuple(int(v) for v in row) for row in self.intersection_table()
            )
        return self._inter_rows

    def __len__(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        return f"<Frame {self.mode.value} atoms={[a.label for a in self.atoms]} elements={len(self.elements)}>"


def build_frame(atoms: list[Atom], mode: FrameMode | str) -> Frame:
    """Build a frame with its full element enumeration in canonical order."""
    return Frame(atoms, FrameMode(mode))


def frame_from_labels(labels: list[str], mode: FrameMode | str) -> Frame:
    """Convenience constructor: labels given in severity order."""
    atoms = [Atom(i, label, i) for i, label in enumerate(labels)]
    return build_frame(atoms, mode)


_TOKEN_RE = re.compile(r"([+.()])")


def canonicalize(frame: Frame, expression: str | FocalElement) -> FocalElement:
    """Canonicalize a union/intersection expression over frame atoms.

    Applies distributivity and absorption.  Idempotent.  In DST mode an
    expression whose canonical form keeps a multi-atom intersection term is
    rejected: exclusive hypotheses admit no such element.
    """
    if isinstance(expression, FocalElement):
        frame._check_same_frame(expression)
        return (
            expression
            if expression.is_empty
            else frame.element_from_terms(expression.terms)
        )
    tokens = [t.strip() for t in _TOKEN_RE.split(expression)]
    tokens = [t for t in tokens if t]
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def parse_atom() -> frozenset[int]:
        nonlocal pos
        tok = peek()
        if tok == "(":
            pos += 1
            terms = parse_union()
            if peek() != ")":
                raise ExpressionError(f"unbalanced parentheses in {expression!r}")
            pos += 1
            return terms
        if tok is None or tok in "+.)":
            raise ExpressionError(f"malformed expression {expression!r}")
        pos += 1
        aid = frame._label_to_id.get(tok)
        if aid is None:
            raise ExpressionError(f"unknown atom label {tok!r} in {expression!r}")
        return frozenset([1 << aid])

    def parse_inter() -> frozenset[int]:
        nonlocal pos
        terms = parse_atom()
        while peek() == ".":
            pos += 1
            rhs = parse_atom()
            terms = frozenset(a | b for a in terms for b in rhs)
        return terms

    def parse_union() -> frozenset[int]:
        nonlocal pos
        terms = parse_inter()
        while peek() == "+":
            pos += 1
            terms = terms | parse_inter()
        return terms

    masks = parse_union()
    if pos != len(tokens):
        raise ExpressionError(f"trailing tokens in expression {expression!r}")
    reduced = _reduce_terms(masks)
    if frame.mode is FrameMode.DST and any(bin(t).count("1") > 1 for t in reduced):
        raise ExpressionError(
            f"{expression!r} requires an intersection of distinct hypotheses, "
            "which a DST frame excludes"
        )
    return frame.element_from_terms(reduced)
