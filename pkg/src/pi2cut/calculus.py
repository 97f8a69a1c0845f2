"""Sequent-calculus engine.

A propositional kernel (exhaustive invertible decomposition, tautology
decision by CNF translation plus DPLL), full proof trees with quantifier
rules and cut, an independent rule-by-rule proof checker, occurrence
ancestry, and the three proof-complexity measures.

Sequent sides are sets; the axiom rule closes any sequent whose sides
share an atom, so weakening never appears explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

from .syntax import (
    And,
    Atom,
    Exists,
    ForAll,
    Formula,
    Imp,
    Not,
    Or,
    Sequent,
    SyntaxError_,
    Term,
    Var,
    formula_key,
    formula_to_sexp,
    free_vars,
    is_quantifier_free,
    substitute,
)

# Rule labels.
AXIOM = "axiom"
NON_TAUT_LEAF = "non-taut-leaf"
AND_L = "and-l"
AND_R = "and-r"
OR_L = "or-l"
OR_R = "or-r"
IMP_L = "imp-l"
IMP_R = "imp-r"
NOT_L = "not-l"
NOT_R = "not-r"
FORALL_L = "forall-l"
FORALL_R = "forall-r"
EXISTS_L = "exists-l"
EXISTS_R = "exists-r"
CUT = "cut"

WEAK_RULES = (FORALL_L, EXISTS_R)
STRONG_RULES = (FORALL_R, EXISTS_L)

LEFT = "left"
RIGHT = "right"

ORIGIN_END = "end"
ORIGIN_CUT = "cut"


@dataclass(frozen=True)
class Node:
    """One inference (or leaf) of a derivation tree."""

    rule: str
    sequent: Sequent
    premises: tuple["Node", ...] = ()
    principal: Formula | None = None
    side: str | None = None
    witness: Term | None = None
    eigen: str | None = None
    keep: bool = False
    cut_formula: Formula | None = None

    def leaves(self) -> Iterator["Node"]:
        if not self.premises:
            yield self
        else:
            for p in self.premises:
                yield from p.leaves()

    def nodes(self) -> Iterator["Node"]:
        yield self
        for p in self.premises:
            yield from p.nodes()


# ---------------------------------------------------------------------------
# Propositional decomposition

Policy = Callable[[Sequent, Sequence[tuple[str, Formula]]], int]


def _candidates(s: Sequent) -> list[tuple[str, Formula]]:
    out = [
        (LEFT, f)
        for f in s.left
        if not isinstance(f, (Atom, ForAll, Exists))
    ]
    out += [
        (RIGHT, f)
        for f in s.right
        if not isinstance(f, (Atom, ForAll, Exists))
    ]
    out.sort(key=lambda c: (formula_key(c[1]), c[0]))
    return out


def _premises_of(s: Sequent, side: str, f: Formula) -> tuple[tuple[str, Sequent], ...]:
    """Rule label and premises for decomposing `f` on `side` of `s`."""
    if side == LEFT:
        rest = s.left - {f}
        if isinstance(f, And):
            return ((AND_L, Sequent(rest | {f.left, f.right}, s.right)),)
        if isinstance(f, Or):
            return (
                (OR_L, Sequent(rest | {f.left}, s.right)),
                (OR_L, Sequent(rest | {f.right}, s.right)),
            )
        if isinstance(f, Imp):
            return (
                (IMP_L, Sequent(rest, s.right | {f.left})),
                (IMP_L, Sequent(rest | {f.right}, s.right)),
            )
        if isinstance(f, Not):
            return ((NOT_L, Sequent(rest, s.right | {f.sub})),)
    else:
        rest = s.right - {f}
        if isinstance(f, And):
            return (
                (AND_R, Sequent(s.left, rest | {f.left})),
                (AND_R, Sequent(s.left, rest | {f.right})),
            )
        if isinstance(f, Or):
            return ((OR_R, Sequent(s.left, rest | {f.left, f.right})),)
        if isinstance(f, Imp):
            return ((IMP_R, Sequent(s.left | {f.left}, rest | {f.right})),)
        if isinstance(f, Not):
            return ((NOT_R, Sequent(s.left | {f.sub}, rest)),)
    raise SyntaxError_(f"cannot decompose {formula_to_sexp(f)} on the {side}")


def _expand(s: Sequent, stop_at_axiom: bool, policy: Policy | None) -> Node:
    if stop_at_axiom and s.shares_atom():
        return Node(AXIOM, s)
    cands = _candidates(s)
    if not cands:
        rule = AXIOM if s.shares_atom() else NON_TAUT_LEAF
        return Node(rule, s)
    side, f = cands[policy(s, cands) if policy is not None else 0]
    prem = _premises_of(s, side, f)
    rule = prem[0][0]
    subs = tuple(_expand(p, stop_at_axiom, policy) for _, p in prem)
    return Node(rule, s, subs, principal=f, side=side)


def maximal_derivation(s: Sequent, policy: Policy | None = None) -> Node:
    """Exhaustively apply the invertible propositional rules.

    The default policy decomposes the canonically least compound formula
    first; the leaf set does not depend on the policy.
    """
    for f in s.left | s.right:
        if not is_quantifier_free(f):
            raise SyntaxError_(f"quantifier in {formula_to_sexp(f)}")
    return _expand(s, stop_at_axiom=False, policy=policy)


def _greedy_pick(s: Sequent, cands: Sequence[tuple[str, Formula]]) -> int:
    """Prefer decompositions that close premises at once: fewest premises
    left open, then fewest premises.  Keeps constructed proofs small; the
    choice does not affect which sequents are provable."""
    best = 0
    best_key = (len(s.left) + len(s.right) + 9, 9)
    for idx, (side, f) in enumerate(cands):
        prem = _premises_of(s, side, f)
        open_count = sum(1 for _, q in prem if not q.shares_atom())
        key = (open_count, len(prem))
        if key < best_key:
            best, best_key = idx, key
            if key == (0, 1):
                break
    return best


def prop_proof(s: Sequent) -> Node:
    """Propositional derivation stopping at axioms; quantified formulas are
    carried along untouched (they may ride in constructed proof branches)."""
    return _expand(s, stop_at_axiom=True, policy=_greedy_pick)


def non_tautological_leaves(d: Node) -> frozenset[Sequent]:
    return frozenset(n.sequent for n in d.leaves() if n.rule == NON_TAUT_LEAF)


# Tagged variant, used for checking which closing atoms of a derivation
# descend from a designated root formula.  A sequent side becomes a mapping
# formula -> origin; when decomposition merges two occurrences the tag
# "end" wins (such an occurrence has a non-cut ancestor).


def _merge(tags: dict[Formula, str], f: Formula, tag: str) -> None:
    old = tags.get(f)
    tags[f] = ORIGIN_END if ORIGIN_END in (old, tag) else ORIGIN_CUT


def tagged_leaves(
    left: dict[Formula, str], right: dict[Formula, str]
) -> Iterator[tuple[dict[Formula, str], dict[Formula, str]]]:
    cands = [(LEFT, f) for f in left if not isinstance(f, (Atom, ForAll, Exists))]
    cands += [(RIGHT, f) for f in right if not isinstance(f, (Atom, ForAll, Exists))]
    if not cands:
        yield (left, right)
        return
    cands.sort(key=lambda c: (formula_key(c[1]), c[0]))
    side, f = cands[0]
    tag = (left if side == LEFT else right)[f]

    def branch(
        l_add: Sequence[Formula], r_add: Sequence[Formula]
    ) -> tuple[dict[Formula, str], dict[Formula, str]]:
        nl = dict(left)
        nr = dict(right)
        del (nl if side == LEFT else nr)[f]
        for g in l_add:
            _merge(nl, g, tag)
        for g in r_add:
            _merge(nr, g, tag)
        return nl, nr

    if side == LEFT:
        if isinstance(f, And):
            parts = [branch([f.left, f.right], [])]
        elif isinstance(f, Or):
            parts = [branch([f.left], []), branch([f.right], [])]
        elif isinstance(f, Imp):
            parts = [branch([], [f.left]), branch([f.right], [])]
        else:
            assert isinstance(f, Not)
            parts = [branch([], [f.sub])]
    else:
        if isinstance(f, And):
            parts = [branch([], [f.left]), branch([], [f.right])]
        elif isinstance(f, Or):
            parts = [branch([], [f.left, f.right])]
        elif isinstance(f, Imp):
            parts = [branch([f.left], [f.right])]
        else:
            assert isinstance(f, Not)
            parts = [branch([f.sub], [])]
    for nl, nr in parts:
        yield from tagged_leaves(nl, nr)


# ---------------------------------------------------------------------------
# Tautology decision


def _sat(in_clauses: list[list[int]]) -> bool:
    """Propositional satisfiability: unit propagation over watched
    literals, conflict analysis to the first unique implication point with
    backjumping, and activity-guided decisions.  Variables are positive
    integers, literals signed."""
    db: list[list[int]] = []
    for cl in in_clauses:
        cl = list(dict.fromkeys(cl))
        if not cl:
            return False
        if any(-l in cl for l in cl):
            continue
        db.append(cl)
    if not db:
        return True
    nvars = max(abs(l) for cl in db for l in cl)
    assign = [0] * (nvars + 1)  # 0 open, +1 true, -1 false
    level = [0] * (nvars + 1)
    reason = [-1] * (nvars + 1)
    activity = [0.0] * (nvars + 1)
    watches: dict[int, list[int]] = {}
    trail: list[int] = []
    limits: list[int] = []
    qhead = 0
    bump = 1.0

    def value(lit: int) -> int:
        v = assign[abs(lit)]
        if v == 0:
            return 0
        return 1 if (v > 0) == (lit > 0) else -1

    def enqueue(lit: int, rs: int) -> None:
        nonlocal trail
        var = abs(lit)
        assign[var] = 1 if lit > 0 else -1
        level[var] = len(limits)
        reason[var] = rs
        trail.append(lit)

    for i, cl in enumerate(db):
        if len(cl) == 1:
            if value(cl[0]) == -1:
                return False
            if value(cl[0]) == 0:
                enqueue(cl[0], -1)
        else:
            watches.setdefault(cl[0], []).append(i)
            watches.setdefault(cl[1], []).append(i)

    def propagate() -> int:
        nonlocal qhead
        while qhead < len(trail):
            false_lit = -trail[qhead]
            qhead += 1
            old = watches.get(false_lit)
            if not old:
                continue
            kept: list[int] = []
            pos = 0
            while pos < len(old):
                ci = old[pos]
                pos += 1
                cl = db[ci]
                if cl[0] == false_lit:
                    cl[0], cl[1] = cl[1], cl[0]
                if value(cl[0]) == 1:
                    kept.append(ci)
                    continue
                for k in range(2, len(cl)):
                    if value(cl[k]) != -1:
                        cl[1], cl[k] = cl[k], cl[1]
                        watches.setdefault(cl[1], []).append(ci)
                        break
                else:
                    kept.append(ci)
                    if value(cl[0]) == -1:
                        kept.extend(old[pos:])
                        watches[false_lit] = kept
                        return ci
                    enqueue(cl[0], ci)
            watches[false_lit] = kept
        return -1

    def analyze(ci: int) -> tuple[list[int], int]:
        nonlocal bump
        seen = set()
        learned: list[int] = []
        pending = 0
        idx = len(trail) - 1
        current = len(limits)
        side = db[ci]
        while True:
            for l in side:
                var = abs(l)
                if var in seen or level[var] == 0:
                    continue
                seen.add(var)
                activity[var] += bump
                if level[var] == current:
                    pending += 1
                else:
                    learned.append(l)
            while abs(trail[idx]) not in seen:
                idx -= 1
            t = trail[idx]
            idx -= 1
            seen.discard(abs(t))
            pending -= 1
            if pending == 0:
                learned.insert(0, -t)
                break
            side = [l for l in db[reason[abs(t)]] if l != t]
        bump *= 1.05
        if bump > 1e100:
            for v in range(nvars + 1):
                activity[v] *= 1e-100
            bump = 1.0
        back = 0 if len(learned) == 1 else max(level[abs(l)] for l in learned[1:])
        return learned, back

    def backjump(to_level: int) -> None:
        nonlocal qhead
        while len(limits) > to_level:
            mark = limits.pop()
            while len(trail) > mark:
                var = abs(trail.pop())
                assign[var] = 0
                reason[var] = -1
        qhead = len(trail)

    while True:
        conflict = propagate()
        if conflict != -1:
            if not limits:
                return False
            learned, back = analyze(conflict)
            backjump(back)
            db.append(learned)
            nci = len(db) - 1
            if len(learned) > 1:
                for k in range(1, len(learned)):
                    if level[abs(learned[k])] == back:
                        learned[1], learned[k] = learned[k], learned[1]
                        break
                watches.setdefault(learned[0], []).append(nci)
                watches.setdefault(learned[1], []).append(nci)
                enqueue(learned[0], nci)
            else:
                enqueue(learned[0], -1)
            continue
        decision = 0
        best = -1.0
        for v in range(1, nvars + 1):
            if assign[v] == 0 and activity[v] > best:
                decision, best = v, activity[v]
        if decision == 0:
            return True
        limits.append(len(trail))
        enqueue(-decision, -1)


class _Cnf:
    """CNF translation with definitional variables for compound formulas."""

    def __init__(self) -> None:
        self.clauses: list[list[int]] = []
        self._atoms: dict[Formula, int] = {}
        self._defs: dict[Formula, int] = {}
        self._next = 1

    def _fresh(self) -> int:
        v = self._next
        self._next += 1
        return v

    def lit_of(self, f: Formula) -> int:
        if isinstance(f, Atom):
            if f not in self._atoms:
                self._atoms[f] = self._fresh()
            return self._atoms[f]
        if isinstance(f, Not):
            return -self.lit_of(f.sub)
        if f in self._defs:
            return self._defs[f]
        if isinstance(f, And):
            a, b = self.lit_of(f.left), self.lit_of(f.right)
            v = self._fresh()
            self.clauses += [[-v, a], [-v, b], [v, -a, -b]]
        elif isinstance(f, Or):
            a, b = self.lit_of(f.left), self.lit_of(f.right)
            v = self._fresh()
            self.clauses += [[-v, a, b], [v, -a], [v, -b]]
        elif isinstance(f, Imp):
            a, b = self.lit_of(f.left), self.lit_of(f.right)
            v = self._fresh()
            self.clauses += [[-v, -a, b], [v, a], [v, -b]]
        else:
            raise SyntaxError_(f"quantifier in {formula_to_sexp(f)}")
        self._defs[f] = v
        return v


def is_tautology(s: Sequent) -> bool:
    """Validity of a quantifier-free sequent; free variables are read as
    uninterpreted constants, distinct ground atoms as independent
    propositional variables."""
    cnf = _Cnf()
    for f in sorted(s.left, key=formula_key):
        cnf.clauses.append([cnf.lit_of(f)])
    for f in sorted(s.right, key=formula_key):
        cnf.clauses.append([-cnf.lit_of(f)])
    return not _sat(cnf.clauses)


# ---------------------------------------------------------------------------
# Proof checking


@dataclass
class CheckReport:
    ok: bool
    error: str | None = None
    path: tuple[int, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def _fail(path: tuple[int, ...], msg: str) -> CheckReport:
    return CheckReport(False, msg, path)


def _check_node(n: Node, path: tuple[int, ...]) -> CheckReport:
    s = n.sequent
    if n.rule == AXIOM:
        if n.premises:
            return _fail(path, "axiom with premises")
        if not s.shares_atom():
            return _fail(path, "axiom sides share no atom")
        return CheckReport(True)
    if n.rule == NON_TAUT_LEAF:
        return _fail(path, "non-tautological leaf in proof")
    if n.rule == CUT:
        if len(n.premises) != 2 or n.cut_formula is None:
            return _fail(path, "cut needs a cut formula and two premises")
        c = n.cut_formula
        lp, rp = n.premises[0].sequent, n.premises[1].sequent
        if c not in lp.right:
            return _fail(path, "cut formula missing from left premise succedent")
        if c not in rp.left:
            return _fail(path, "cut formula missing from right premise antecedent")
        if not (lp.left <= s.left and lp.right - {c} <= s.right):
            return _fail(path, "left cut premise has formulas outside the conclusion")
        if not (rp.left - {c} <= s.left and rp.right <= s.right):
            return _fail(path, "right cut premise has formulas outside the conclusion")
        return CheckReport(True)

    if n.principal is None or n.side not in (LEFT, RIGHT):
        return _fail(path, f"{n.rule} needs a principal formula and side")
    f = n.principal
    here = s.left if n.side == LEFT else s.right
    if f not in here:
        return _fail(path, "principal formula not in the conclusion")

    if n.rule in WEAK_RULES + STRONG_RULES:
        if len(n.premises) != 1:
            return _fail(path, f"{n.rule} needs one premise")
        prem = n.premises[0].sequent
        if n.rule == FORALL_L:
            if not (isinstance(f, ForAll) and n.side == LEFT and n.witness is not None):
                return _fail(path, "forall-l needs a universal principal on the left and a witness")
            inst = substitute(f.body, {f.var: n.witness})
            base = s.left if n.keep else s.left - {f}
            want = Sequent(base | {inst}, s.right)
        elif n.rule == EXISTS_R:
            if not (isinstance(f, Exists) and n.side == RIGHT and n.witness is not None):
                return _fail(path, "exists-r needs an existential principal on the right and a witness")
            inst = substitute(f.body, {f.var: n.witness})
            base = s.right if n.keep else s.right - {f}
            want = Sequent(s.left, base | {inst})
        else:
            if n.eigen is None:
                return _fail(path, f"{n.rule} needs an eigenvariable")
            cond_vars = set()
            for g in s.left | s.right:
                cond_vars |= free_vars(g)
            if n.eigen in cond_vars:
                return _fail(path, f"eigenvariable {n.eigen} occurs in the conclusion")
            inst = substitute(f.body, {f.var: Var(n.eigen)})
            if n.rule == FORALL_R:
                if not (isinstance(f, ForAll) and n.side == RIGHT):
                    return _fail(path, "forall-r needs a universal principal on the right")
                want = Sequent(s.left, (s.right - {f}) | {inst})
            else:
                if not (isinstance(f, Exists) and n.side == LEFT):
                    return _fail(path, "exists-l needs an existential principal on the left")
                want = Sequent((s.left - {f}) | {inst}, s.right)
        if prem != want:
            return _fail(path, f"{n.rule} premise does not match the rule schema")
        return CheckReport(True)

    try:
        expected = _premises_of(s, n.side, f)
    except SyntaxError_ as e:
        return _fail(path, str(e))
    if expected[0][0] != n.rule:
        return _fail(path, f"rule {n.rule} does not fit principal {formula_to_sexp(f)}")
    if len(n.premises) != len(expected):
        return _fail(path, f"{n.rule} needs {len(expected)} premises")
    got = [p.sequent for p in n.premises]
    want_seqs = [q for _, q in expected]
    if got != want_seqs and set(got) != set(want_seqs):
        return _fail(path, f"{n.rule} premises do not match the rule schema")
    return CheckReport(True)


def check_proof(root: Node) -> CheckReport:
    """Validate every inference, every leaf, eigenvariable freshness and
    cut-formula bookkeeping; reports the first failing node."""
    eigens: dict[str, tuple[int, ...]] = {}
    stack: list[tuple[Node, tuple[int, ...]]] = [(root, ())]
    while stack:
        n, path = stack.pop()
        rep = _check_node(n, path)
        if not rep.ok:
            return rep
        if n.rule in STRONG_RULES and n.eigen is not None:
            if n.eigen in eigens:
                return _fail(path, f"eigenvariable {n.eigen} used by two inferences")
            eigens[n.eigen] = path
        for i, p in enumerate(n.premises):
            stack.append((p, path + (i,)))
    return CheckReport(True)


# ---------------------------------------------------------------------------
# Complexity measures


@dataclass(frozen=True)
class ComplexityTriple:
    quantifier: int
    logical: int
    symbols: int


def _term_symbols(t: Term) -> int:
    if isinstance(t, Var):
        return 1
    return 1 + sum(_term_symbols(a) for a in t.args)  # type: ignore[union-attr]


def _formula_symbols(f: Formula) -> int:
    if isinstance(f, Atom):
        return 1 + sum(_term_symbols(a) for a in f.args)
    if isinstance(f, Not):
        return 1 + _formula_symbols(f.sub)
    if isinstance(f, (And, Or, Imp)):
        return 1 + _formula_symbols(f.left) + _formula_symbols(f.right)
    assert isinstance(f, (ForAll, Exists))
    return 2 + _formula_symbols(f.body)  # quantifier and its variable


def symbol_count(s: Sequent) -> int:
    """Occurrences of signature symbols, variables, connectives,
    quantifiers, separating commas and the turnstile."""
    total = sum(_formula_symbols(f) for f in s.left)
    total += sum(_formula_symbols(f) for f in s.right)
    total += max(0, len(s.left) - 1) + max(0, len(s.right) - 1)
    return total + 1


def complexities(p: Node) -> ComplexityTriple:
    q = 0
    logical = 0
    symbols = 0
    for n in p.nodes():
        symbols += symbol_count(n.sequent)
        if n.premises:
            logical += 1
        if n.rule in WEAK_RULES:
            q += 1
    return ComplexityTriple(q, logical, symbols + logical)


# ---------------------------------------------------------------------------
# Occurrence ancestry

Origins = tuple[dict[Formula, str], dict[Formula, str]]


def compute_origins(root: Node) -> dict[tuple[int, ...], Origins]:
    """Tag every formula occurrence with the origin it descends from:
    the end-sequent or a cut formula introduced below it."""
    out: dict[tuple[int, ...], Origins] = {}

    def inherit(parent: Origins, s: Sequent, extra: dict[tuple[str, Formula], str]) -> Origins:
        nl: dict[Formula, str] = {}
        nr: dict[Formula, str] = {}
        for f in s.left:
            _merge(nl, f, extra.get((LEFT, f), parent[0].get(f, ORIGIN_END)))
        for f in s.right:
            _merge(nr, f, extra.get((RIGHT, f), parent[1].get(f, ORIGIN_END)))
        return nl, nr

    def walk(n: Node, path: tuple[int, ...], origins: Origins) -> None:
        out[path] = origins
        if n.rule == CUT:
            assert n.cut_formula is not None
            left_extra = {(RIGHT, n.cut_formula): ORIGIN_CUT}
            right_extra = {(LEFT, n.cut_formula): ORIGIN_CUT}
            walk(n.premises[0], path + (0,), inherit(origins, n.premises[0].sequent, left_extra))
            walk(n.premises[1], path + (1,), inherit(origins, n.premises[1].sequent, right_extra))
            return
        if n.principal is not None and n.side is not None:
            tag = origins[0 if n.side == LEFT else 1].get(n.principal, ORIGIN_END)
            for i, p in enumerate(n.premises):
                ex = {}
                for side in (LEFT, RIGHT):
                    here = p.sequent.left if side == LEFT else p.sequent.right
                    conc = n.sequent.left if side == LEFT else n.sequent.right
                    for f in here:
                        if f not in conc:
                            ex[(side, f)] = tag
                walk(p, path + (i,), inherit(origins, p.sequent, ex))
            return
        for i, p in enumerate(n.premises):
            walk(p, path + (i,), inherit(origins, p.sequent, {}))

    walk(root, (), ({f: ORIGIN_END for f in root.sequent.left},
                    {f: ORIGIN_END for f in root.sequent.right}))
    return out


def ancestry(root: Node, path: tuple[int, ...], side: str, f: Formula) -> str:
    origins = compute_origins(root)
    if path not in origins:
        raise SyntaxError_(f"no node at path {path}")
    table = origins[path][0 if side == LEFT else 1]
    if f not in table:
        raise SyntaxError_(f"no occurrence of {formula_to_sexp(f)} at {path} ({side})")
    return table[f]
