"""
The master algebra M and its dual M*.

Elements are represented by the atoms below them. Constants store their atom
set as an integer mask, terms store the mask of their component constants and
compute their atoms as the union over the components, and atoms store their
fingerprint, the mask of constants above them. Atom 0 is the bottom atom: it
lies below every constant and cannot be deleted.

The dual keeps one node per constant and per term. An edge u -> w between dual
nodes means that every dual atom below u is also below w. Each node stores the
dual atoms placed directly on it and the closed set of dual atoms below it.
Dual atom 0 (0*) is below every dual node. The dual of a master atom is
computed on demand from the duals of the constants above it.
"""

from collections import deque
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple, TypeVar, Union

import numpy as np

from algebraic_learning.algebra.atom_set import AtomSet, iter_bits
from algebraic_learning.algebra.elements import (
    ElementKind,
    ElementRef,
    Relation,
    RelationSpec,
)
from algebraic_learning.exceptions.algebra_exceptions import (
    DualElementGivenException,
    DuplicateNameException,
    EmptyTermException,
    MixedAlgebrasException,
    UnknownAtomException,
    UnknownConstantException,
    UnknownTargetException,
)
from algebraic_learning.logger import get_logger

logger = get_logger(__name__)

T = TypeVar("T")

BOTTOM = 0
BOTTOM_BIT = 1

AtomsArgument = Union[AtomSet, Iterable[Union[ElementRef, int]]]


class AlgebraState:
    """Paired master and dual graphs with a seeded random stream.

    One instance is mutated by one execution context at a time.
    """

    def __init__(self, seed: Optional[int] = 0) -> None:
        self._seed = seed
        self._rng = np.random.default_rng(seed)

        self._constant_names: List[str] = []
        self._constant_index: Dict[str, int] = {}
        self._constant_atoms: List[int] = []
        self._term_components: Dict[int, int] = {}
        self._term_by_components: Dict[int, int] = {}
        self._next_term = 0
        self._fingerprints: Dict[int, int] = {}
        self._next_atom = 1
        self._live_atoms = BOTTOM_BIT

        self._dual_owner: List[Optional[ElementRef]] = []
        self._constant_dual: List[int] = []
        self._term_dual: Dict[int, int] = {}
        self._dual_own: List[int] = []
        self._dual_closed: List[int] = []
        self._dual_succ: List[Set[int]] = []
        self._dual_pred: List[Set[int]] = []
        self._dual_parent: List[int] = []
        self._terms_of_constant: List[Set[int]] = []
        self._live_dual_atoms = BOTTOM_BIT
        self._next_dual_atom = 1
        self._dual_pending = False
        self._dual_version = 0
        self._atom_dual_cache: Dict[int, Tuple[int, int]] = {}
        self._universe_cache: Tuple[int, int] = (-1, BOTTOM_BIT)

    # ------------------------------------------------------------------ random

    @property
    def seed(self) -> Optional[int]:
        return self._seed

    @property
    def rng(self) -> np.random.Generator:
        return self._rng

    def shuffled(self, items: Sequence[T]) -> List[T]:
        """Return the items in a seeded random order."""
        if not items:
            return []
        return [items[i] for i in self._rng.permutation(len(items))]

    def choose(self, items: Sequence[T]) -> T:
        """Pick one item uniformly at random."""
        if not items:
            raise ValueError("cannot choose from an empty sequence")
        return items[int(self._rng.integers(len(items)))]

    def choose_bit(self, bits: int) -> int:
        """Pick one set bit of `bits` uniformly at random."""
        return self.choose(list(iter_bits(bits)))

    # --------------------------------------------------------------- constants

    @property
    def constant_count(self) -> int:
        return len(self._constant_names)

    @property
    def constant_names(self) -> Tuple[str, ...]:
        return tuple(self._constant_names)

    def constant_name(self, index: int) -> str:
        return self._constant_names[index]

    def constants(self) -> List[ElementRef]:
        return [
            ElementRef(ElementKind.CONSTANT, i) for i in range(self.constant_count)
        ]

    def has_constant(self, name: str) -> bool:
        return name in self._constant_index

    def constant(self, name: str) -> ElementRef:
        index = self._constant_index.get(name)
        if index is None:
            raise UnknownConstantException(details=name)
        return ElementRef(ElementKind.CONSTANT, index)

    def add_constant(self, name: str) -> ElementRef:
        """Register a constant. Its atom set is {0} and its dual holds {0*}."""
        if name in self._constant_index:
            raise DuplicateNameException(details=name)
        index = len(self._constant_names)
        ref = ElementRef(ElementKind.CONSTANT, index)
        self._constant_names.append(name)
        self._constant_index[name] = index
        self._constant_atoms.append(BOTTOM_BIT)
        self._terms_of_constant.append(set())
        self._constant_dual.append(self._new_dual_node(ref))
        self._dual_changed()
        return ref

    def ensure_constant(self, name: str) -> ElementRef:
        if name in self._constant_index:
            return ElementRef(ElementKind.CONSTANT, self._constant_index[name])
        return self.add_constant(name)

    # ------------------------------------------------------------------- terms

    def terms(self) -> List[ElementRef]:
        return [ElementRef(ElementKind.TERM, i) for i in self._term_components]

    @property
    def term_count(self) -> int:
        return len(self._term_components)

    def define_term(self, components: Iterable[ElementRef]) -> ElementRef:
        """Merge constants into a term. Equal component sets give the same term."""
        bits = 0
        for ref in components:
            self._check_constant(ref)
            bits |= 1 << ref.index
        if not bits:
            raise EmptyTermException()
        return self.term_for_components(bits)

    def term_for_components(self, bits: int) -> ElementRef:
        """Return the term whose components are the constants of mask `bits`."""
        existing = self._term_by_components.get(bits)
        if existing is not None:
            return ElementRef(ElementKind.TERM, existing)
        if not bits:
            raise EmptyTermException()
        if bits >> self.constant_count:
            raise UnknownConstantException(details=f"component mask {bits:#x}")
        self._ensure_closed()

        index = self._next_term
        self._next_term += 1
        ref = ElementRef(ElementKind.TERM, index)
        self._term_components[index] = bits
        self._term_by_components[bits] = index
        node = self._new_dual_node(ref)
        self._term_dual[index] = node
        self._link_term(index, node, bits)

        self._propagate({node: self._meet(bits, ~self._dual_closed[node])})
        self._dual_changed()
        return ref

    def retire_term(self, term: ElementRef) -> None:
        """Drop a term no relation refers to any more. Its index is not reused."""
        if term.kind is not ElementKind.TERM or term.index not in self._term_components:
            raise UnknownTargetException(details=str(term))
        self._ensure_closed()
        bits = self._term_components.pop(term.index)
        del self._term_by_components[bits]
        node = self._term_dual.pop(term.index)
        for constant in iter_bits(bits):
            self._terms_of_constant[constant].discard(term.index)

        # Atoms that reached successors through this node stay placed on them.
        closed = self._dual_closed[node]
        for succ in self._dual_succ[node]:
            self._dual_own[succ] |= closed
            self._dual_pred[succ].discard(node)
        for pred in self._dual_pred[node]:
            self._dual_succ[pred].discard(node)
        self._dual_succ[node] = set()
        self._dual_pred[node] = set()
        self._dual_owner[node] = None
        self._dual_own[node] = 0
        self._dual_closed[node] = 0
        self._dual_changed()

    def components(self, ref: ElementRef) -> frozenset:
        """Constant indices at or below a constant or term."""
        return frozenset(iter_bits(self.component_bits(ref)))

    def component_bits(self, ref: ElementRef) -> int:
        if ref.kind is ElementKind.CONSTANT:
            self._check_constant(ref)
            return 1 << ref.index
        if ref.kind is ElementKind.TERM:
            bits = self._term_components.get(ref.index)
            if bits is None:
                raise UnknownConstantException(details=str(ref))
            return bits
        raise UnknownConstantException(
            message="Only constants and terms have components", details=str(ref)
        )

    # ------------------------------------------------------------------- atoms

    @property
    def atom_count(self) -> int:
        """Number of live atoms without the bottom atom."""
        return len(self._fingerprints)

    def learned_atoms(self) -> AtomSet:
        return AtomSet.from_bits(self._live_atoms & ~BOTTOM_BIT)

    def live_atoms(self) -> AtomSet:
        return AtomSet.from_bits(self._live_atoms)

    def is_live_atom(self, index: int) -> bool:
        return index >= 0 and bool(self._live_atoms >> index & 1)

    def fingerprint(self, atom: Union[ElementRef, int]) -> frozenset:
        """Constant indices above an atom."""
        return frozenset(iter_bits(self.fingerprint_bits(atom)))

    def fingerprint_bits(self, atom: Union[ElementRef, int]) -> int:
        index = self._atom_index(atom)
        if index == BOTTOM:
            return (1 << self.constant_count) - 1
        return self._fingerprints[index]

    def add_atom(self, targets: Iterable[ElementRef]) -> ElementRef:
        """Add an atom edged to constants and atoms. It ends below everything above them."""
        fingerprint = 0
        for ref in targets:
            if ref.kind is ElementKind.CONSTANT:
                if not 0 <= ref.index < self.constant_count:
                    raise UnknownTargetException(details=str(ref))
                fingerprint |= 1 << ref.index
            elif ref.kind is ElementKind.ATOM:
                if not self.is_live_atom(ref.index):
                    raise UnknownTargetException(details=str(ref))
                fingerprint |= self.fingerprint_bits(ref.index)
            else:
                raise UnknownTargetException(details=str(ref))
        return self.add_atom_with_fingerprint(fingerprint)

    def add_atom_with_fingerprint(self, fingerprint: int) -> ElementRef:
        if fingerprint >> self.constant_count:
            raise UnknownTargetException(details=f"fingerprint {fingerprint:#x}")
        index = self._next_atom
        self._next_atom += 1
        bit = 1 << index
        self._fingerprints[index] = fingerprint
        self._live_atoms |= bit
        for constant in iter_bits(fingerprint):
            self._constant_atoms[constant] |= bit
        return ElementRef(ElementKind.ATOM, index)

    def delete_atoms(self, atoms: AtomsArgument) -> None:
        """Remove atoms from every atom set. The bottom atom cannot be deleted."""
        indices = self._indices(atoms, ElementKind.ATOM)
        for index in indices:
            if index == BOTTOM or index not in self._fingerprints:
                raise UnknownAtomException(details=f"atom {index}")
        for index in indices:
            bit = 1 << index
            for constant in iter_bits(self._fingerprints.pop(index)):
                self._constant_atoms[constant] &= ~bit
            self._live_atoms &= ~bit
            self._atom_dual_cache.pop(index, None)
        if indices:
            logger.debug(f"Deleted {len(indices)} atoms, {self.atom_count} remain")

    def atoms_of(self, ref: ElementRef) -> AtomSet:
        """The atoms below an element, in whichever algebra it lives."""
        if ref.is_master:
            return AtomSet.from_bits(self.atom_bits(ref))
        return AtomSet.from_bits(self.dual_bits(ref))

    def atom_bits(self, ref: ElementRef) -> int:
        if ref.kind is ElementKind.CONSTANT:
            self._check_constant(ref)
            return self._constant_atoms[ref.index]
        if ref.kind is ElementKind.TERM:
            bits = 0
            for constant in iter_bits(self.component_bits(ref)):
                bits |= self._constant_atoms[constant]
            return bits
        if ref.kind is ElementKind.ATOM:
            if not self.is_live_atom(ref.index):
                raise UnknownAtomException(details=str(ref))
            return 1 << ref.index
        raise DualElementGivenException(details=str(ref))

    def atoms_of_constants(self, constants: int) -> int:
        """Union of the atom sets of the constants in mask `constants`."""
        bits = BOTTOM_BIT
        for constant in iter_bits(constants):
            bits |= self._constant_atoms[constant]
        return bits

    def leq(self, a: ElementRef, b: ElementRef) -> bool:
        """a <= b, that is every atom below a is below b."""
        if a.is_master != b.is_master:
            raise MixedAlgebrasException(details=f"{a} vs {b}")
        if a.is_master:
            return self.atom_bits(a) & ~self.atom_bits(b) == 0
        return self.dual_bits(a) & ~self.dual_bits(b) == 0

    def holds(self, relation: Relation) -> bool:
        contained = self.leq(relation.lhs, relation.rhs)
        return contained if relation.is_positive else not contained

    def bind(self, spec: RelationSpec, create: bool = True) -> Relation:
        """Resolve a named relation into element references."""
        return Relation(
            spec.sign, self._bind_side(spec.lhs, create), self._bind_side(spec.rhs, create)
        )

    def _bind_side(self, names: Sequence[str], create: bool) -> ElementRef:
        refs = [self.ensure_constant(n) if create else self.constant(n) for n in names]
        distinct = set(refs)
        if len(distinct) == 1:
            return refs[0]
        return self.define_term(distinct)

    # -------------------------------------------------------------------- dual

    def dual(self, ref: ElementRef) -> ElementRef:
        """The dual partner of a master element."""
        if ref.kind is ElementKind.CONSTANT:
            self._check_constant(ref)
            return ElementRef(ElementKind.DUAL_CONSTANT, self._constant_dual[ref.index])
        if ref.kind is ElementKind.TERM:
            node = self._term_dual.get(ref.index)
            if node is None:
                raise UnknownConstantException(details=str(ref))
            return ElementRef(ElementKind.DUAL_CONSTANT, node)
        if ref.kind is ElementKind.ATOM:
            if not self.is_live_atom(ref.index):
                raise UnknownAtomException(details=str(ref))
            return ElementRef(ElementKind.DUAL_OF_ATOM, ref.index)
        raise DualElementGivenException(details=str(ref))

    def dual_owner(self, dual_ref: ElementRef) -> ElementRef:
        """The master constant or term whose dual is `dual_ref`."""
        node = self._dual_node(dual_ref)
        return self._dual_owner[node]

    @property
    def dual_atom_count(self) -> int:
        """Number of live dual atoms without 0*."""
        return self._live_dual_atoms.bit_count() - 1

    def dual_atoms(self) -> AtomSet:
        return AtomSet.from_bits(self._live_dual_atoms)

    def dual_universe(self) -> AtomSet:
        return AtomSet.from_bits(self.dual_universe_bits())

    def dual_universe_bits(self) -> int:
        """Dual atoms below the dual of the bottom atom, i.e. under some constant."""
        self._ensure_closed()
        version, bits = self._universe_cache
        if version != self._dual_version:
            bits = BOTTOM_BIT
            for node in self._constant_dual:
                bits |= self._dual_closed[node]
            self._universe_cache = (self._dual_version, bits)
        return bits

    def dual_atoms_of(self, ref: ElementRef) -> AtomSet:
        """GL^a of the dual of a master element, or of a dual element."""
        return AtomSet.from_bits(self.dual_bits(ref))

    def dual_bits(self, ref: ElementRef) -> int:
        if ref.is_master:
            ref = self.dual(ref)
        self._ensure_closed()
        if ref.kind is ElementKind.DUAL_CONSTANT:
            return self._dual_closed[self._dual_node(ref)]
        if ref.kind is ElementKind.DUAL_OF_ATOM:
            if not self.is_live_atom(ref.index):
                raise UnknownAtomException(details=str(ref))
            return self.atom_dual_bits(ref.index)
        if not self._live_dual_atoms >> ref.index & 1:
            raise UnknownAtomException(details=str(ref))
        return 1 << ref.index

    def constant_dual_bits(self, constant: int) -> int:
        self._ensure_closed()
        return self._dual_closed[self._constant_dual[constant]]

    def atom_dual_bits(self, atom: int) -> int:
        """GL^a([atom]): 0* and the dual atoms below the duals of its constants."""
        if atom == BOTTOM:
            return self.dual_universe_bits()
        self._ensure_closed()
        cached = self._atom_dual_cache.get(atom)
        if cached is not None and cached[0] == self._dual_version:
            return cached[1]
        bits = BOTTOM_BIT
        closed = self._dual_closed
        duals = self._constant_dual
        for constant in iter_bits(self._fingerprints[atom]):
            bits |= closed[duals[constant]]
        self._atom_dual_cache[atom] = (self._dual_version, bits)
        return bits

    def add_dual_atom(
        self, targets: Iterable[ElementRef] = (), close: bool = True
    ) -> ElementRef:
        """Add a dual atom below each target and, by closure, below what they reach.

        With close=False the closure is deferred until the next query or
        close_dual(), which is how relation batches are loaded.
        """
        targets = list(targets)
        for target in targets:
            self._placement_target(target)
        index = self._next_dual_atom
        self._next_dual_atom += 1
        self._live_dual_atoms |= 1 << index
        ref = ElementRef(ElementKind.DUAL_ATOM, index)
        for target in targets:
            self._place(1 << index, target, close)
        self._dual_changed()
        return ref

    def add_dual_atom_target(
        self, dual_atom: ElementRef, target: ElementRef, close: bool = True
    ) -> None:
        """Edge an existing dual atom to one more dual element."""
        if dual_atom.kind is not ElementKind.DUAL_ATOM or not (
            self._live_dual_atoms >> dual_atom.index & 1
        ):
            raise UnknownTargetException(details=str(dual_atom))
        self._placement_target(target)
        self._place(1 << dual_atom.index, target, close)
        self._dual_changed()

    def delete_dual_atoms(self, atoms: AtomsArgument) -> None:
        indices = self._indices(atoms, ElementKind.DUAL_ATOM)
        mask = 0
        for index in indices:
            if index == BOTTOM or not self._live_dual_atoms >> index & 1:
                raise UnknownAtomException(details=f"dual atom {index}")
            mask |= 1 << index
        if not mask:
            return
        keep = ~mask
        self._live_dual_atoms &= keep
        for node, owner in enumerate(self._dual_owner):
            if owner is not None:
                self._dual_own[node] &= keep
                self._dual_closed[node] &= keep
        self._dual_changed()

    def add_dual_positive_edge(self, relation: Relation) -> None:
        """Add [rhs] -> [lhs] for a positive relation lhs < rhs."""
        if not relation.is_positive:
            raise ValueError("Only positive relations have a dual edge")
        source = self._dual_node(self.dual(relation.rhs))
        target = self._dual_node(self.dual(relation.lhs))
        if source == target or target in self._dual_succ[source]:
            return
        self._ensure_closed()
        self._link(source, target)
        self._propagate({target: self._dual_closed[source]})
        if self._reaches(target, source):
            self._merge_cycle(source, target)
        self._dual_changed()

    def has_dual_edge(self, source: ElementRef, target: ElementRef) -> bool:
        """Whether the dual graph has source -> target, stored or implied by terms.

        Edges [S] -> [T] between terms with components(T) within components(S)
        are derived from the term definitions rather than stored.
        """
        u = self._dual_node(self.dual(source) if source.is_master else source)
        w = self._dual_node(self.dual(target) if target.is_master else target)
        if w in self._dual_succ[u]:
            return True
        owner_u, owner_w = self._dual_owner[u], self._dual_owner[w]
        return owner_u.kind is ElementKind.TERM and (
            self.component_bits(owner_w) & ~self.component_bits(owner_u) == 0
        )

    def dual_constants_below(self, ref: ElementRef) -> List[ElementRef]:
        """Dual constants with an edge path to the dual of `ref`, itself included."""
        node = self._dual_node(self.dual(ref) if ref.is_master else ref)
        return [
            ElementRef(ElementKind.DUAL_CONSTANT, n) for n in sorted(self._backward(node))
        ]

    def dual_constants_above(self, ref: ElementRef) -> List[ElementRef]:
        """Dual constants reachable from the dual of `ref`, itself included."""
        node = self._dual_node(self.dual(ref) if ref.is_master else ref)
        return [
            ElementRef(ElementKind.DUAL_CONSTANT, n) for n in sorted(self._forward(node))
        ]

    def same_dual(self, a: ElementRef, b: ElementRef) -> bool:
        """Whether two elements have been merged into one dual element."""
        u = self._dual_node(self.dual(a) if a.is_master else a)
        w = self._dual_node(self.dual(b) if b.is_master else b)
        return self._find(u) == self._find(w)

    def close_dual(self) -> None:
        """Propagate every placed dual atom through edges and term meets."""
        seeds = {
            node: own
            for node, own in enumerate(self._dual_own)
            if self._dual_owner[node] is not None
        }
        self._dual_pending = False
        self._propagate(seeds)
        self._dual_changed()

    def reset_dual(self) -> None:
        """Rebuild M* from the term table: only 0*, no positive edges, no merges."""
        for node, owner in enumerate(self._dual_owner):
            self._dual_succ[node] = set()
            self._dual_pred[node] = set()
            self._dual_parent[node] = node
            live = owner is not None
            self._dual_own[node] = BOTTOM_BIT if live else 0
            self._dual_closed[node] = BOTTOM_BIT if live else 0
        for term, bits in self._term_components.items():
            self._link_term(term, self._term_dual[term], bits)
        self._atom_dual_cache.clear()
        self._live_dual_atoms = BOTTOM_BIT
        self._dual_pending = False
        self._dual_changed()
        logger.debug(
            f"Dual rebuilt with {self.constant_count} constants and {self.term_count} terms"
        )

    def verify_closure(self) -> bool:
        """Recompute every atom set from scratch and compare with the stored ones."""
        self._ensure_closed()
        for constant, atoms in enumerate(self._constant_atoms):
            if not atoms & BOTTOM_BIT:
                return False
            expected = BOTTOM_BIT
            for atom, fingerprint in self._fingerprints.items():
                if fingerprint >> constant & 1:
                    expected |= 1 << atom
            if expected != atoms:
                return False

        fresh = [0] * len(self._dual_owner)
        seeds = {
            node: own
            for node, own in enumerate(self._dual_own)
            if self._dual_owner[node] is not None
        }
        self._propagate(seeds, fresh)
        return all(
            fresh[node] == self._dual_closed[node]
            for node, owner in enumerate(self._dual_owner)
            if owner is not None
        )

    # ---------------------------------------------------------------- internal

    def _check_constant(self, ref: ElementRef) -> None:
        if ref.kind is not ElementKind.CONSTANT or not (
            0 <= ref.index < self.constant_count
        ):
            raise UnknownConstantException(details=str(ref))

    def _atom_index(self, atom: Union[ElementRef, int]) -> int:
        index = atom.index if isinstance(atom, ElementRef) else atom
        if not self.is_live_atom(index):
            raise UnknownAtomException(details=f"atom {index}")
        return index

    @staticmethod
    def _indices(atoms: AtomsArgument, kind: ElementKind) -> List[int]:
        if isinstance(atoms, AtomSet):
            return list(atoms)
        indices = []
        for atom in atoms:
            if isinstance(atom, ElementRef):
                if atom.kind is not kind:
                    raise UnknownAtomException(details=str(atom))
                indices.append(atom.index)
            else:
                indices.append(int(atom))
        return indices

    def _new_dual_node(self, owner: ElementRef) -> int:
        node = len(self._dual_owner)
        self._dual_owner.append(owner)
        self._dual_own.append(BOTTOM_BIT)
        self._dual_closed.append(BOTTOM_BIT)
        self._dual_succ.append(set())
        self._dual_pred.append(set())
        self._dual_parent.append(node)
        return node

    def _dual_node(self, dual_ref: ElementRef) -> int:
        if dual_ref.kind is not ElementKind.DUAL_CONSTANT:
            raise UnknownTargetException(details=str(dual_ref))
        node = dual_ref.index
        if not 0 <= node < len(self._dual_owner) or self._dual_owner[node] is None:
            raise UnknownTargetException(details=str(dual_ref))
        return node

    def _link(self, source: int, target: int) -> None:
        self._dual_succ[source].add(target)
        self._dual_pred[target].add(source)

    def _link_term(self, term: int, node: int, bits: int) -> None:
        for constant in iter_bits(bits):
            self._terms_of_constant[constant].add(term)
            self._link(node, self._constant_dual[constant])
        if bits.bit_count() == 1:
            constant_node = self._constant_dual[bits.bit_length() - 1]
            self._link(constant_node, node)
            self._union(constant_node, node)

    def _placement_target(self, target: ElementRef) -> ElementRef:
        """Dual atoms go below duals of constants and terms only."""
        if target.kind in (ElementKind.CONSTANT, ElementKind.TERM):
            try:
                return self.dual(target)
            except UnknownConstantException:
                raise UnknownTargetException(details=str(target))
        if target.kind is ElementKind.DUAL_CONSTANT:
            self._dual_node(target)
            return target
        raise UnknownTargetException(details=str(target))

    def _place(self, bit: int, target: ElementRef, close: bool) -> None:
        target = self._placement_target(target)
        node = target.index
        self._dual_own[node] |= bit
        if close and not self._dual_pending:
            self._propagate({node: bit})
        else:
            self._dual_pending = True

    def _ensure_closed(self) -> None:
        if self._dual_pending:
            self.close_dual()

    def _dual_changed(self) -> None:
        self._dual_version += 1

    def _meet(self, components: int, start: int) -> int:
        """Dual atoms of `start` present below the duals of all `components`."""
        closed = self._dual_closed
        duals = self._constant_dual
        for constant in iter_bits(components):
            start &= closed[duals[constant]]
            if not start:
                break
        return start

    def _propagate(
        self, seeds: Dict[int, int], closed: Optional[List[int]] = None
    ) -> None:
        """Push dual atoms along edges, then into terms whose components all hold them."""
        if closed is None:
            closed = self._dual_closed
        queue = deque(seeds.items())
        while queue:
            touched: Set[int] = set()
            while queue:
                node, bits = queue.popleft()
                new = bits & ~closed[node]
                if not new:
                    continue
                closed[node] |= new
                owner = self._dual_owner[node]
                if owner.kind is ElementKind.CONSTANT:
                    touched.add(owner.index)
                for succ in self._dual_succ[node]:
                    queue.append((succ, new))

            candidates: Set[int] = set()
            for constant in touched:
                candidates |= self._terms_of_constant[constant]
            for term in candidates:
                node = self._term_dual[term]
                start = ~closed[node]
                for constant in iter_bits(self._term_components[term]):
                    start &= closed[self._constant_dual[constant]]
                    if not start:
                        break
                if start:
                    queue.append((node, start))

    def _reaches(self, source: int, target: int) -> bool:
        return target in self._forward(source)

    def _forward(self, source: int) -> Set[int]:
        seen = {source}
        stack = [source]
        while stack:
            for succ in self._dual_succ[stack.pop()]:
                if succ not in seen:
                    seen.add(succ)
                    stack.append(succ)
        return seen

    def _backward(self, source: int) -> Set[int]:
        seen = {source}
        stack = [source]
        while stack:
            for pred in self._dual_pred[stack.pop()]:
                if pred not in seen:
                    seen.add(pred)
                    stack.append(pred)
        return seen

    def _merge_cycle(self, source: int, target: int) -> None:
        cycle = self._forward(target) & self._backward(source)
        for node in cycle:
            self._union(source, node)
        logger.debug(f"Merged {len(cycle)} dual elements into one")

    def _find(self, node: int) -> int:
        parent = self._dual_parent
        root = node
        while parent[root] != root:
            root = parent[root]
        while parent[node] != root:
            parent[node], node = root, parent[node]
        return root

    def _union(self, a: int, b: int) -> None:
        root_a, root_b = self._find(a), self._find(b)
        if root_a != root_b:
            self._dual_parent[max(root_a, root_b)] = min(root_a, root_b)
