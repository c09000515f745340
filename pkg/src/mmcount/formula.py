"""CNF formulas, partial assignments, conditioning and primal-graph structure.

Literals follow the DIMACS convention: variable ``v`` is the positive
literal ``v`` and ``-v`` is its negation.  An assignment is a frozenset of
literals with at most one literal per variable, so ``{1, -3}`` binds
``x1 = 1`` and ``x3 = 0``.
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

import networkx as nx
from networkx.algorithms.approximation import treewidth_min_degree

log = logging.getLogger(__name__)

Literal = int
Clause = tuple[int, ...]
Assignment = frozenset[int]
VarSet = frozenset[int]


class DimacsError(ValueError):
    """Malformed DIMACS input; ``line`` is 1-based (0 when at end of input)."""

    def __init__(self, message: str, line: int = 0):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


def _normalize_clause(lits: Iterable[int]) -> Clause:
    # dedupe, order by (variable, polarity)
    return tuple(sorted(set(lits), key=lambda l: (abs(l), l)))


def is_tautology(clause: Iterable[int]) -> bool:
    s = set(clause)
    return any(-l in s for l in s)


@dataclass(frozen=True)
class CnfFormula:
    """Immutable conjunction of clauses over variables ``1..num_vars``.

    A formula holding the empty clause is falsum; :func:`condition` returns
    :data:`FALSUM`-shaped formulas when propagation derives a conflict.
    """

    num_vars: int
    clauses: tuple[Clause, ...] = ()

    def __post_init__(self):
        if self.num_vars < 0:
            raise ValueError("num_vars must be non-negative")
        norm = []
        for c in self.clauses:
            c = _normalize_clause(c)
            for l in c:
                if l == 0 or abs(l) > self.num_vars:
                    raise ValueError(f"literal {l} outside 1..{self.num_vars}")
            if is_tautology(c):
                raise ValueError(f"tautological clause {c}")
            norm.append(c)
        object.__setattr__(self, "clauses", tuple(norm))

    @classmethod
    def falsum(cls, num_vars: int = 0) -> "CnfFormula":
        return cls(num_vars, ((),))

    @property
    def is_falsum(self) -> bool:
        return any(len(c) == 0 for c in self.clauses)

    @cached_property
    def variables(self) -> VarSet:
        """Variables occurring in at least one clause."""
        return frozenset(abs(l) for c in self.clauses for l in c)

    @property
    def all_vars(self) -> VarSet:
        return frozenset(range(1, self.num_vars + 1))

    def satisfied_by(self, assignment: Iterable[int]) -> bool:
        """True iff every clause has a literal in ``assignment``."""
        a = assignment if isinstance(assignment, (set, frozenset)) else set(assignment)
        return all(any(l in a for l in c) for c in self.clauses)

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.num_vars} {len(self.clauses)}"]
        lines += [" ".join(map(str, c + (0,))) for c in self.clauses]
        return "\n".join(lines) + "\n"

    def __len__(self) -> int:
        return len(self.clauses)


def parse_dimacs(text: str) -> CnfFormula:
    """Parse DIMACS CNF text.

    Comment lines (``c``) and a trailing ``%`` section are ignored.  Clauses
    may span lines but must end with ``0``.  Tautological clauses are
    rejected.
    """
    num_vars = None
    declared = 0
    clauses: list[Clause] = []
    current: list[int] = []
    current_start = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            if num_vars is not None:
                raise DimacsError("duplicate header", lineno)
            m = re.fullmatch(r"p\s+cnf\s+(\d+)\s+(\d+)", line)
            if m is None:
                raise DimacsError(f"malformed header {line!r}", lineno)
            num_vars, declared = int(m.group(1)), int(m.group(2))
            continue
        if num_vars is None:
            raise DimacsError("clause before 'p cnf' header", lineno)
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsError(f"bad literal {tok!r}", lineno) from None
            if lit == 0:
                if is_tautology(current):
                    raise DimacsError(
                        f"tautological clause {' '.join(map(str, current))}", current_start
                    )
                clauses.append(_normalize_clause(current))
                current = []
                continue
            if abs(lit) > num_vars:
                raise DimacsError(f"literal {lit} exceeds declared {num_vars} vars", lineno)
            if not current:
                current_start = lineno
            current.append(lit)
    if num_vars is None:
        raise DimacsError("missing 'p cnf' header")
    if current:
        raise DimacsError("last clause is missing its 0 terminator", current_start)
    if len(clauses) != declared:
        log.warning("header declares %d clauses, found %d", declared, len(clauses))
    return CnfFormula(num_vars, tuple(clauses))


def read_dimacs(path) -> CnfFormula:
    with open(path, encoding="utf-8") as fh:
        return parse_dimacs(fh.read())


# -- assignments ---------------------------------------------------------------

def assignment(bindings: Mapping[int, int | bool]) -> Assignment:
    """Build an assignment from ``{var: value}``."""
    return frozenset(v if val else -v for v, val in bindings.items())


def var_of(tau: Iterable[int]) -> VarSet:
    return frozenset(abs(l) for l in tau)


def true_vars(tau: Iterable[int]) -> VarSet:
    return frozenset(l for l in tau if l > 0)


def project(tau: Iterable[int], xs: Iterable[int]) -> Assignment:
    xs = xs if isinstance(xs, (set, frozenset)) else set(xs)
    return frozenset(l for l in tau if abs(l) in xs)


def total(true_set: Iterable[int], variables: Iterable[int]) -> Assignment:
    """Total assignment over ``variables`` making exactly ``true_set`` true."""
    t = set(true_set)
    return frozenset(v if v in t else -v for v in variables)


def negation(tau: Iterable[int]) -> Clause:
    """The clause falsified exactly by assignments agreeing with ``tau``."""
    return _normalize_clause(-l for l in tau)


def justified_restriction(tau: Iterable[int]) -> Assignment:
    """Keep only the false bindings; these never need a justification."""
    return frozenset(l for l in tau if l < 0)


# -- conditioning --------------------------------------------------------------

def condition(formula: CnfFormula, tau: Iterable[int]) -> CnfFormula:
    """Unit propagation ``F|tau`` of a partial assignment.

    Clauses satisfied by ``tau`` are dropped, literals falsified by ``tau``
    are deleted, and a literal ``l`` is also deleted wherever the unit
    clause ``(-l)`` is present; this repeats to a fixpoint.  A derived
    empty clause yields a falsum formula.

    Only false-only (justified) assignments preserve minimal models.
    """
    tau = frozenset(tau)
    clauses = list(dict.fromkeys(formula.clauses))
    if formula.is_falsum:
        return CnfFormula.falsum(formula.num_vars)
    changed = True
    while changed:
        changed = False
        units = {c[0] for c in clauses if len(c) == 1}
        out: list[Clause] = []
        for c in clauses:
            if any(l in tau for l in c):
                changed = True
                continue
            kept = tuple(l for l in c if -l not in tau and -l not in units)
            if len(kept) != len(c):
                changed = True
                if not kept:
                    return CnfFormula.falsum(formula.num_vars)
            out.append(kept)
        clauses = list(dict.fromkeys(out))
    return CnfFormula(formula.num_vars, tuple(clauses))


# -- primal graph --------------------------------------------------------------

def primal_graph(formula: CnfFormula, clique: bool = True) -> nx.Graph:
    """Variables adjacent iff they share a clause.

    With ``clique=False`` each clause contributes a star instead of a
    clique; connectivity is the same, edge count is linear.
    """
    g = nx.Graph()
    g.add_nodes_from(sorted(formula.variables))
    for c in formula.clauses:
        vs = [abs(l) for l in c]
        if clique:
            g.add_edges_from((a, b) for i, a in enumerate(vs) for b in vs[i + 1:])
        else:
            g.add_edges_from((vs[0], b) for b in vs[1:])
    return g


def components(formula: CnfFormula) -> list[VarSet]:
    """Connected components of the primal graph, ordered by smallest variable."""
    g = primal_graph(formula, clique=False)
    return sorted((frozenset(c) for c in nx.connected_components(g)), key=min)


def split_components(formula: CnfFormula) -> list[CnfFormula]:
    """One sub-formula per component (same ``num_vars``)."""
    comps = components(formula)
    index = {v: i for i, comp in enumerate(comps) for v in comp}
    parts: list[list[Clause]] = [[] for _ in comps]
    for c in formula.clauses:
        parts[index[abs(c[0])]].append(c)
    return [CnfFormula(formula.num_vars, tuple(p)) for p in parts]


def _separates(g: nx.Graph, sep: frozenset) -> tuple[bool, int]:
    rest = g.subgraph(n for n in g if n not in sep)
    sizes = [len(c) for c in nx.connected_components(rest)]
    return len(sizes) >= 2, max(sizes, default=0)


def compute_cut(formula: CnfFormula) -> VarSet:
    """Heuristic vertex separator of the primal graph.

    A min-degree tree decomposition is computed; every bag and every
    intersection of adjacent bags is a candidate, and the smallest one whose
    removal disconnects the graph wins (ties: smaller largest remaining
    component, then lexicographic).  Returns the empty set when the formula
    is already disconnected and all occurring variables when no separator
    exists (e.g. a clique).
    """
    g = primal_graph(formula)
    if g.number_of_nodes() <= 1 or not nx.is_connected(g):
        return frozenset() if g.number_of_nodes() != 1 else frozenset(g.nodes)
    _, tree = treewidth_min_degree(g)
    candidates = set(tree.nodes)
    for b1, b2 in tree.edges:
        candidates.add(b1 & b2)
    best = None
    for sep in candidates:
        if not sep or len(sep) >= g.number_of_nodes() - 1:
            continue
        ok, largest = _separates(g, sep)
        if ok:
            key = (len(sep), largest, sorted(sep))
            if best is None or key < best[0]:
                best = (key, sep)
    if best is None:
        return frozenset(g.nodes)
    return frozenset(best[1])


# -- disjunctive logic program export -----------------------------------------

def _atom(v: int) -> str:
    return f"x{v}"


def dlp_rule(clause: Clause) -> str:
    head = [_atom(l) for l in clause if l > 0]
    body = [_atom(-l) for l in clause if l < 0]
    if not head and not body:
        return ":- #true."
    if not body:
        return " ; ".join(head) + "."
    return (" ; ".join(head) + " " if head else "") + ":- " + ", ".join(body) + "."


def dlp_export(formula: CnfFormula) -> str:
    """Disjunctive program whose answer sets are the minimal models of ``formula``.

    Positive literals form the disjunctive head, negated atoms the positive
    body.  One rule per line, atoms written ``x<index>``.
    """
    return "".join(dlp_rule(c) + "\n" for c in formula.clauses)


_RULE = re.compile(r"^(?P<head>[^:]*?)\s*(?::-\s*(?P<body>.*?))?\s*\.$")


def parse_dlp(text: str) -> list[tuple[frozenset[int], frozenset[int]]]:
    """Read back the output of :func:`dlp_export` as ``(head, body)`` atom sets."""
    rules = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        m = _RULE.match(line)
        if m is None:
            raise ValueError(f"line {lineno}: not a rule: {line!r}")
        head_s, body_s = m.group("head"), m.group("body")
        head = frozenset(int(a.strip()[1:]) for a in head_s.split(";") if a.strip())
        body_atoms = [a.strip() for a in (body_s or "").split(",") if a.strip()]
        body = frozenset(int(a[1:]) for a in body_atoms if a != "#true")
        rules.append((head, body))
    return rules
