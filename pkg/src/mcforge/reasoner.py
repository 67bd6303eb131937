"""Structural reasoning over the extracted ontology model.

Two query families: the transitive subclass closure over named-superclass
axioms, and part-whole candidate lookup driven by existential restrictions.
Both are exact set computations; graphs here are dozens of classes, so
clarity wins over asymptotics.
"""

from __future__ import annotations

from dataclasses import dataclass

from mcforge.errors import CycleError
from mcforge.ontology import OntologyModel, SubClassAxiom


@dataclass(frozen=True)
class ClosureIndex:
    direct_superclasses: dict[str, frozenset[str]]
    direct_subclasses: dict[str, frozenset[str]]
    strict_superclasses: dict[str, frozenset[str]]
    strict_subclasses: dict[str, frozenset[str]]

    def is_subclass(self, sub: str, sup: str) -> bool:
        """True for C ⊑ D, reflexively."""
        return sub == sup or sup in self.strict_superclasses.get(sub, frozenset())


def _find_cycle(direct: dict[str, frozenset[str]]) -> list[str] | None:
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {c: WHITE for c in direct}
    for start in sorted(direct):
        if color[start] != WHITE:
            continue
        stack: list[tuple[str, list[str]]] = [(start, sorted(direct[start]))]
        color[start] = GRAY
        path = [start]
        while stack:
            node, pending = stack[-1]
            if pending:
                nxt = pending.pop(0)
                state = color.get(nxt, WHITE)
                if state == GRAY:
                    return path[path.index(nxt):] + [nxt]
                if state == WHITE:
                    color[nxt] = GRAY
                    path.append(nxt)
                    stack.append((nxt, sorted(direct.get(nxt, frozenset()))))
            else:
                color[node] = BLACK
                path.pop()
                stack.pop()
    return None


def build_closure(model: OntologyModel) -> ClosureIndex:
    """Transitive closure of the named subclass hierarchy."""
    direct_sup: dict[str, set[str]] = {c: set() for c in model.classes}
    for axiom in model.axioms:
        if not axiom.is_restriction:
            direct_sup.setdefault(axiom.sub, set()).add(axiom.sup)
            direct_sup.setdefault(axiom.sup, set())

    frozen_direct = {c: frozenset(s) for c, s in direct_sup.items()}
    cycle = _find_cycle(frozen_direct)
    if cycle is not None:
        raise CycleError(cycle)

    strict_sup: dict[str, frozenset[str]] = {}

    def resolve(c: str) -> frozenset[str]:
        if c in strict_sup:
            return strict_sup[c]
        acc: set[str] = set()
        for parent in frozen_direct.get(c, frozenset()):
            acc.add(parent)
            acc |= resolve(parent)
        strict_sup[c] = frozenset(acc)
        return strict_sup[c]

    for c in frozen_direct:
        resolve(c)

    direct_sub: dict[str, set[str]] = {c: set() for c in frozen_direct}
    strict_sub: dict[str, set[str]] = {c: set() for c in frozen_direct}
    for c, supers in frozen_direct.items():
        for parent in supers:
            direct_sub[parent].add(c)
    for c, supers in strict_sup.items():
        for parent in supers:
            strict_sub[parent].add(c)

    return ClosureIndex(
        direct_superclasses=frozen_direct,
        direct_subclasses={c: frozenset(s) for c, s in direct_sub.items()},
        strict_superclasses=dict(strict_sup),
        strict_subclasses={c: frozenset(s) for c, s in strict_sub.items()},
    )


def subclasses_of(index: ClosureIndex, class_iri: str, direct: bool = False) -> list[str]:
    """Strict subclasses of a class, sorted; the class itself is excluded."""
    table = index.direct_subclasses if direct else index.strict_subclasses
    return sorted(table.get(class_iri, frozenset()))


@dataclass(frozen=True)
class MeronymyResult:
    children: tuple[str, ...]
    justification: dict[str, SubClassAxiom]


def meronymy_of(
    model: OntologyModel,
    index: ClosureIndex,
    parent: str,
    part_of_iri: str,
    has_part_iri: str | None = None,
    inherit_inverse: bool = False,
) -> MeronymyResult:
    """Classes whose instances can stand in a part-of relation to the parent.

    A class C qualifies when some axiom C' ⊑ ∃partOf.P has its filler P at
    or below the parent and C is C' or below it, or (when the inverse
    property is configured) when an axiom W ⊑ ∃hasPart.F names the parent as
    W, with F and everything below F qualifying. inherit_inverse extends the
    inverse direction to parents below W.
    """
    licensed: dict[str, SubClassAxiom] = {}

    def admit(child: str, axiom: SubClassAxiom) -> None:
        if child not in licensed:
            licensed[child] = axiom

    axioms = sorted(
        (a for a in model.axioms if a.is_restriction),
        key=lambda a: (a.sub, a.sup.property, a.sup.filler),
    )
    for axiom in axioms:
        restriction = axiom.sup
        if restriction.property == part_of_iri:
            if index.is_subclass(restriction.filler, parent):
                admit(axiom.sub, axiom)
                for descendant in subclasses_of(index, axiom.sub):
                    admit(descendant, axiom)
        elif has_part_iri is not None and restriction.property == has_part_iri:
            whole = axiom.sub
            applies = whole == parent or (
                inherit_inverse and index.is_subclass(parent, whole)
            )
            if applies:
                admit(restriction.filler, axiom)
                for descendant in subclasses_of(index, restriction.filler):
                    admit(descendant, axiom)

    children = tuple(sorted(licensed))
    return MeronymyResult(children=children, justification=licensed)
