"""Search for a cut matrix that turns instance data into a one-cut proof.

Pipeline: the end-sequent instances of a schematic grammar form a reduced
representation; its non-tautological leaves, rewritten into one-sided
literal form, split into the literals touching ``alpha`` (A), those
touching some ``bj`` (B) and the neutral rest (N).  Candidate matrices
are disjunctive normal forms over clause sets drawn from a starting set;
two closure filters prune clause sets that cannot close every leaf, the
survivors are verified outright, and a verified clause set is rendered
into a checked proof with a single cut.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .calculus import (
    ORIGIN_CUT,
    ORIGIN_END,
    is_tautology,
    maximal_derivation,
    non_tautological_leaves,
    tagged_leaves,
)
from .grammar import (
    GrammarError,
    SchematicPi2Grammar,
    WrappedTerm,
    covers,
    gstar_of,
    unifiable_pair,
    validate,
)
from .herbrand import ExtendedHerbrandSequent, PrenexProblem, instantiate, proof_from_eh
from .syntax import (
    ALPHA,
    And,
    Atom,
    Clause,
    ClauseSet,
    Formula,
    Imp,
    Literal,
    Not,
    Or,
    Sequent,
    Term,
    Var,
    X,
    Y,
    beta,
    clause_key,
    clause_set_key,
    conj,
    disj,
    dnf_of,
    dual_set,
    free_vars,
    literal_key,
    literal_normal_form,
    substitute_literal,
)


class SolverError(Exception):
    pass


class CoverFailure(SolverError):
    """The grammar's rigid language misses part of the given term set."""


class MixedAtomError(SolverError):
    """An instance atom mixes alpha with a cut eigenvariable."""


class NotASolution(SolverError):
    pass


class VerificationFailure(SolverError):
    """A filtered candidate failed verification; indicates a solver bug."""


@dataclass
class SearchStats:
    pool: str = ""
    pool_size: int = 0
    unifiable: bool | None = None
    candidates: int = 0
    cl_passed: int = 0
    sol_passed: int = 0
    caps_hit: bool = False


class NoSolutionUnderPool(SolverError):
    def __init__(self, stats: SearchStats):
        super().__init__(f"no solution among {stats.candidates} candidates from the {stats.pool} pool")
        self.stats = stats


class CapExceeded(SolverError):
    def __init__(self, stats: SearchStats, what: str):
        super().__init__(f"search cap exceeded: {what}")
        self.stats = stats


# ---------------------------------------------------------------------------
# The solving problem


@dataclass(frozen=True)
class Sehs:
    """A prenex problem plus a validated schematic grammar; the cut matrix
    is the unknown, written as the binary predicate slot X."""

    problem: PrenexProblem
    grammar: SchematicPi2Grammar
    term_set: frozenset[WrappedTerm] | None = None

    def f_instances(self) -> list[Formula]:
        pb = self.problem
        return [instantiate(pb.antecedent, pb.forall_vars, t) for t in self.grammar.f_tuples]

    def g_instances(self) -> list[Formula]:
        pb = self.problem
        return [instantiate(pb.succedent, pb.exists_vars, t) for t in self.grammar.g_tuples]

    def reduced_representation(self) -> Sequent:
        return Sequent.of(self.f_instances(), self.g_instances())

    def schematic_sequent(self) -> Sequent:
        """Display form with the unknown matrix as X-atoms."""
        g = self.grammar
        alpha_side = [Atom("X", (Var(ALPHA), t)) for t in g.t_terms]
        beta_side = [
            Atom("X", (r, Var(beta(j)))) for j, r in enumerate(g.r_terms, 1)
        ]
        bridge = Imp(disj(alpha_side), conj(beta_side))
        return Sequent.of(self.f_instances() + [bridge], self.g_instances())


@dataclass(frozen=True)
class PartitionedLeaf:
    a_part: frozenset[Literal]
    b_part: frozenset[Literal]
    n_part: frozenset[Literal]

    def literals(self) -> frozenset[Literal]:
        return self.a_part | self.b_part | self.n_part

    def key(self) -> tuple[str, ...]:
        return tuple(sorted(map(literal_key, self.literals())))


def build_sehs(
    pb: PrenexProblem,
    g: SchematicPi2Grammar,
    term_set: Iterable[WrappedTerm] | None = None,
) -> tuple[Sehs, Sequent]:
    violations, _ = validate(g)
    if violations:
        raise GrammarError("; ".join(violations))
    if g.f_tuples and len(g.f_tuples[0]) != len(pb.forall_vars):
        raise SolverError("antecedent tuples do not match the universal block")
    if g.g_tuples and len(g.g_tuples[0]) != len(pb.exists_vars):
        raise SolverError("succedent tuples do not match the existential block")
    wrapped = frozenset(term_set) if term_set is not None else None
    if wrapped is not None and not covers(g, wrapped):
        from .grammar import rigid_language

        missing = sorted(wrapped - rigid_language(g), key=WrappedTerm.key)
        raise CoverFailure(
            "grammar does not generate: " + ", ".join(t.to_sexp() for t in missing)
        )
    sehs = Sehs(pb, g, wrapped)
    rr = sehs.reduced_representation()
    betas = set(g.beta_vars())
    for f in rr.left | rr.right:
        for atom in _atoms_of(f):
            vs = free_vars(atom)
            if ALPHA in vs and vs & betas:
                raise MixedAtomError(
                    f"instance atom mixes alpha and cut eigenvariables: {atom}"
                )
    return sehs, rr


def _atoms_of(f: Formula) -> Iterator[Atom]:
    if isinstance(f, Atom):
        yield f
    elif isinstance(f, Not):
        yield from _atoms_of(f.sub)
    elif isinstance(f, (And, Or, Imp)):
        yield from _atoms_of(f.left)
        yield from _atoms_of(f.right)


def partitioned_dnta(sehs: Sehs) -> frozenset[PartitionedLeaf]:
    """Non-tautological leaves of a maximal derivation of the reduced
    representation, in literal normal form, split by eigenvariable use."""
    rr = sehs.reduced_representation()
    betas = set(sehs.grammar.beta_vars())
    leaves = non_tautological_leaves(maximal_derivation(rr))
    out = set()
    for leaf in leaves:
        a: set[Literal] = set()
        b: set[Literal] = set()
        n: set[Literal] = set()
        for lit in literal_normal_form(leaf):
            vs = free_vars(lit.atom)
            if ALPHA in vs and vs & betas:
                raise MixedAtomError("leaf atom mixes alpha and cut eigenvariables")
            if ALPHA in vs:
                a.add(lit)
            elif vs & betas:
                b.add(lit)
            else:
                n.add(lit)
        out.add(PartitionedLeaf(frozenset(a), frozenset(b), frozenset(n)))
    return frozenset(out)


# ---------------------------------------------------------------------------
# Anti-substitution

_ANTI_SITE_CAP = 16


def anti_instances(target: Literal, x_img: Term, y_img: Term) -> frozenset[Literal]:
    """All literals over {x, y} that instantiate to `target` when x maps
    to `x_img` and y to `y_img`; every occurrence of an image subterm may
    independently be generalised or kept."""
    sites = _count_sites(target.atom, x_img, y_img)
    if sites > _ANTI_SITE_CAP:
        raise SolverError(f"too many generalisation sites ({sites})")

    def gen_term(t: Term) -> list[Term]:
        opts: list[Term] = []
        if t == x_img:
            opts.append(Var(X))
        if t == y_img:
            opts.append(Var(Y))
        if isinstance(t, Var):
            opts.append(t)
        else:
            assert hasattr(t, "args")
            for combo in itertools.product(*(gen_term(a) for a in t.args)):
                opts.append(type(t)(t.fn, tuple(combo)))  # type: ignore[union-attr]
        return opts

    sub = {X: x_img, Y: y_img}
    out = set()
    for combo in itertools.product(*(gen_term(a) for a in target.atom.args)):
        lit = Literal(target.positive, Atom(target.atom.pred, tuple(combo)))
        if free_vars(lit.atom) <= {X, Y} and substitute_literal(lit, sub) == target:
            out.add(lit)
    return frozenset(out)


def _count_sites(f: Atom, x_img: Term, y_img: Term) -> int:
    def walk(t: Term) -> int:
        hits = int(t == x_img) + int(t == y_img)
        if hasattr(t, "args"):
            hits += sum(walk(a) for a in t.args)  # type: ignore[union-attr]
        return hits

    return sum(walk(a) for a in f.args)


def a_prime(leaf: PartitionedLeaf, sehs: Sehs) -> frozenset[Literal]:
    """Literals over {x, y} mapping into the leaf's alpha part under some
    existential witness term."""
    out: set[Literal] = set()
    for lit in leaf.a_part:
        for t in sehs.grammar.t_terms:
            out |= anti_instances(lit, Var(ALPHA), t)
    return frozenset(out)


def in_allowed(leaf: PartitionedLeaf, literals: frozenset[Literal], sehs: Sehs) -> bool:
    """Can the whole set instantiate into the leaf's alpha part under one
    common existential witness term?"""
    for t in sehs.grammar.t_terms:
        sub = {X: Var(ALPHA), Y: t}
        if all(substitute_literal(l, sub) in leaf.a_part for l in literals):
            return True
    return False


# ---------------------------------------------------------------------------
# Closure filters


class _Ctx:
    def __init__(self, sehs: Sehs):
        self.sehs = sehs
        self.leaves = sorted(partitioned_dnta(sehs), key=PartitionedLeaf.key)
        g = sehs.grammar
        self.m = g.m
        self.p = g.p
        self.r_terms = g.r_terms
        self.t_terms = g.t_terms
        self.dual_b = [dual_set(l.b_part) for l in self.leaves]
        self.dual_n = [dual_set(l.n_part) for l in self.leaves]
        self._x_only: dict[tuple[Literal, int], Literal] = {}
        self._xy_beta: dict[tuple[Literal, int], Literal] = {}
        self._y_only: dict[tuple[Literal, int], Literal] = {}
        self._alpha_t: dict[tuple[Literal, int], Literal] = {}
        self._allowed: dict[tuple[int, frozenset[Literal]], bool] = {}

    def x_only(self, lit: Literal, j: int) -> Literal:
        key = (lit, j)
        if key not in self._x_only:
            self._x_only[key] = substitute_literal(lit, {X: self.r_terms[j]})
        return self._x_only[key]

    def xy_beta(self, lit: Literal, j: int) -> Literal:
        key = (lit, j)
        if key not in self._xy_beta:
            self._xy_beta[key] = substitute_literal(
                lit, {X: self.r_terms[j], Y: Var(beta(j + 1))}
            )
        return self._xy_beta[key]

    def y_only(self, lit: Literal, i: int) -> Literal:
        key = (lit, i)
        if key not in self._y_only:
            self._y_only[key] = substitute_literal(lit, {Y: self.t_terms[i]})
        return self._y_only[key]

    def alpha_t(self, lit: Literal, i: int) -> Literal:
        key = (lit, i)
        if key not in self._alpha_t:
            self._alpha_t[key] = substitute_literal(
                lit, {X: Var(ALPHA), Y: self.t_terms[i]}
            )
        return self._alpha_t[key]

    def allowed(self, leaf_idx: int, literals: frozenset[Literal]) -> bool:
        key = (leaf_idx, literals)
        if key not in self._allowed:
            leaf = self.leaves[leaf_idx]
            ok = False
            for i in range(self.p):
                if all(self.alpha_t(l, i) in leaf.a_part for l in literals):
                    ok = True
                    break
            self._allowed[key] = ok
        return self._allowed[key]


def _passes_cl(cand: Sequence[Clause], ctx: _Ctx) -> bool:
    """Every clause pick for the universal witnesses closes every leaf:
    a neutral dual (T1), a dual into the leaf's b-part (T2), or two picks
    that cancel each other (T3)."""
    m = ctx.m
    for vec in itertools.product(cand, repeat=m):
        inst = [frozenset(ctx.xy_beta(l, j) for l in vec[j]) for j in range(m)]
        duals = [dual_set(s) for s in inst]
        interactive = any(inst[i] & duals[j] for i in range(m) for j in range(m))
        for idx in range(len(ctx.leaves)):
            if any(
                ctx.x_only(l, j) in ctx.dual_n[idx] for j in range(m) for l in vec[j]
            ):
                continue
            if any(lit in ctx.dual_b[idx] for j in range(m) for lit in inst[j]):
                continue
            if interactive:
                continue
            return False
    return True


def _passes_sol(cand: Sequence[Clause], ctx: _Ctx) -> bool:
    """Every literal pick for the existential witnesses closes every leaf:
    a neutral literal (T1'), a whole pick landing in the leaf's allowed
    alpha preimages (T2'), or two picks that cancel (T3')."""
    p = ctx.p
    per_clause = [
        list(itertools.product(sorted(c, key=literal_key), repeat=p)) for c in cand
    ]
    for vec in itertools.product(*per_clause):
        all_picks = [ctx.alpha_t(vec[c][i], i) for c in range(len(cand)) for i in range(p)]
        pick_set = frozenset(all_picks)
        interactive = bool(pick_set & dual_set(pick_set))
        for idx, leaf in enumerate(ctx.leaves):
            if any(
                ctx.y_only(vec[c][i], i) in leaf.n_part
                for c in range(len(cand))
                for i in range(p)
            ):
                continue
            if any(
                ctx.allowed(idx, frozenset(vec[c])) for c in range(len(cand))
            ):
                continue
            if interactive:
                continue
            return False
    return True


def cl_filter(
    starting: Iterable[Clause],
    sehs: Sehs,
    max_clauses: int | None = None,
    max_candidates: int | None = None,
) -> frozenset[ClauseSet]:
    """Subsets of the starting set that survive the universal-side filter."""
    ctx = _Ctx(sehs)
    clauses = sorted(set(starting), key=clause_key)
    limit = len(clauses) if max_clauses is None else max_clauses
    out = []
    examined = 0
    for k in range(1, limit + 1):
        for combo in itertools.combinations(clauses, k):
            examined += 1
            if max_candidates is not None and examined > max_candidates:
                stats = SearchStats(candidates=examined, caps_hit=True)
                raise CapExceeded(stats, f"more than {max_candidates} candidates")
            if _passes_cl(combo, ctx):
                out.append(frozenset(combo))
    return frozenset(out)


def sol_filter(candidates: Iterable[ClauseSet], sehs: Sehs) -> frozenset[ClauseSet]:
    """Members of the universal-side filter that also survive the
    existential-side filter."""
    ctx = _Ctx(sehs)
    out = []
    for cs in sorted(candidates, key=clause_set_key):
        if _passes_sol(sorted(cs, key=clause_key), ctx):
            out.append(cs)
    return frozenset(out)


# ---------------------------------------------------------------------------
# Starting-set pools


def naive_pool(sehs: Sehs) -> frozenset[Literal]:
    """All literals over {x, y} that instantiate into some leaf under a
    witness: into A or N via an existential term, or dually into B or N
    via a universal term and its eigenvariable."""
    g = sehs.grammar
    out: set[Literal] = set()
    for leaf in partitioned_dnta(sehs):
        for lit in leaf.a_part | leaf.n_part:
            for t in g.t_terms:
                out |= anti_instances(lit, Var(ALPHA), t)
        targets = dual_set(leaf.b_part) | dual_set(leaf.n_part)
        for lit in targets:
            for j, r in enumerate(g.r_terms, 1):
                out |= anti_instances(lit, r, Var(beta(j)))
    return frozenset(out)


def gstar_pool(sehs: Sehs) -> tuple[frozenset[Literal], bool]:
    """Literal pool from rewriting leaf literals into {x, y}: a literal of
    one leaf's A or N side unifies with the dual of another leaf's B or N
    side.  Also reports whether every leaf has such a partner."""
    sys = gstar_of(sehs.grammar)
    leaves = sorted(partitioned_dnta(sehs), key=PartitionedLeaf.key)
    all_right: set[Literal] = set()
    for leaf in leaves:
        all_right |= leaf.b_part | leaf.n_part
    pair_memo: dict[tuple[Literal, Literal], frozenset[Literal]] = {}

    def unified(l: Literal, q: Literal) -> frozenset[Literal]:
        key = (l, q)
        if key not in pair_memo:
            pair_memo[key] = unifiable_pair(l, q, sys)
        return pair_memo[key]

    pool: set[Literal] = set()
    unifiable = True
    for leaf in leaves:
        found = False
        for l in leaf.a_part | leaf.n_part:
            for q in all_right:
                common = unified(l, q)
                if common:
                    found = True
                    pool |= common
        if not found:
            unifiable = False
    return frozenset(pool), unifiable


def clauses_from_pool(pool: Iterable[Literal], max_clause_size: int) -> list[Clause]:
    lits = sorted(set(pool), key=literal_key)
    out: list[Clause] = []
    for k in range(1, min(max_clause_size, len(lits)) + 1):
        for combo in itertools.combinations(lits, k):
            out.append(frozenset(combo))
    out.sort(key=lambda c: (len(c), clause_key(c)))
    return out


# ---------------------------------------------------------------------------
# Verification and balance


def verify_solution(sehs: Sehs, clauses: ClauseSet) -> bool:
    """Does the matrix DNF(clauses) make the schematic sequent valid?
    Checked through the two split sequents (universal instances on the
    left, existential instances on the right), which together are
    equivalent to the full sequent."""
    for c in clauses:
        for lit in c:
            if free_vars(lit.atom) - {X, Y}:
                raise SolverError(f"literal outside {{x, y}}: {literal_key(lit)}")
    matrix = dnf_of(clauses)
    eh = ExtendedHerbrandSequent(sehs.problem, sehs.grammar, matrix)
    f_insts = eh.f_instances()
    g_insts = eh.g_instances()
    left_ok = is_tautology(Sequent.of(f_insts + eh.beta_instances(), g_insts))
    right_ok = is_tautology(Sequent.of(f_insts, eh.alpha_instances() + g_insts))
    return left_ok and right_ok


def is_balanced(sehs: Sehs, clauses: ClauseSet) -> bool:
    """A solution is balanced when every axiom of a maximal derivation of
    the solved sequent closes on at least one atom pair with a member not
    descending from the cut material."""
    if not verify_solution(sehs, clauses):
        raise NotASolution("balance is defined for solutions only")
    eh = ExtendedHerbrandSequent(sehs.problem, sehs.grammar, dnf_of(clauses))
    bridge = Imp(disj(eh.alpha_instances()), conj(eh.beta_instances()))
    left: dict[Formula, str] = {f: ORIGIN_END for f in eh.f_instances()}
    # An end formula of the same shape as the bridge keeps its end tag.
    left.setdefault(bridge, ORIGIN_CUT)
    right: dict[Formula, str] = {f: ORIGIN_END for f in eh.g_instances()}
    for l_tags, r_tags in tagged_leaves(left, right):
        shared = [
            f for f in l_tags if isinstance(f, Atom) and f in r_tags
        ]
        if not shared:
            raise NotASolution("derivation of a verified solution has an open leaf")
        if not any(
            l_tags[a] == ORIGIN_END or r_tags[a] == ORIGIN_END for a in shared
        ):
            return False
    return True


# ---------------------------------------------------------------------------
# Full pipeline


@dataclass(frozen=True)
class SolverOptions:
    pool: str | ClauseSet = "gstar"  # "gstar", "naive", or an explicit starting set
    max_clauses: int = 3
    max_clause_size: int = 3
    max_candidates: int = 10**6
    all_solutions: bool = False


@dataclass
class SolutionReport:
    solutions: tuple[ClauseSet, ...]
    cut_formula: Formula
    verified: bool
    balanced: bool
    complexity: object  # ComplexityTriple of the emitted proof
    slot_complexity: int
    shared_complexity: int
    stats: SearchStats
    proof: object  # calculus.Node
    eh: ExtendedHerbrandSequent


def _starting_clauses(sehs: Sehs, options: SolverOptions, stats: SearchStats) -> list[Clause]:
    if isinstance(options.pool, str):
        if options.pool == "gstar":
            pool, unifiable = gstar_pool(sehs)
            stats.unifiable = unifiable
        elif options.pool == "naive":
            pool = naive_pool(sehs)
        else:
            raise SolverError(f"unknown pool: {options.pool}")
        stats.pool = options.pool
        stats.pool_size = len(pool)
        return clauses_from_pool(pool, options.max_clause_size)
    clauses = sorted(options.pool, key=clause_key)
    for c in clauses:
        for lit in c:
            extra = free_vars(lit.atom) - {X, Y}
            if extra:
                raise SolverError(f"starting-set literal uses {sorted(extra)}")
    stats.pool = "file"
    stats.pool_size = len({l for c in clauses for l in c})
    return clauses


_SORT_BUDGET = 1_000_000


def _candidate_stream(
    clauses: Sequence[Clause], options: SolverOptions, stats: SearchStats
) -> Iterator[tuple[Clause, ...]]:
    import math

    for k in range(1, min(options.max_clauses, len(clauses)) + 1):
        combos: Iterator[tuple[Clause, ...]] = itertools.combinations(clauses, k)
        if math.comb(len(clauses), k) <= _SORT_BUDGET:
            combos = iter(
                sorted(
                    combos,
                    key=lambda cs: (sum(len(c) for c in cs), tuple(map(clause_key, cs))),
                )
            )
        # else: the candidate cap fires inside this k anyway; fall back to
        # the (still deterministic) combination order over the sorted clauses
        for combo in combos:
            stats.candidates += 1
            if stats.candidates > options.max_candidates:
                stats.caps_hit = True
                raise CapExceeded(stats, f"more than {options.max_candidates} candidates")
            yield combo


def introduce_cut(
    pb: PrenexProblem,
    g: SchematicPi2Grammar,
    options: SolverOptions = SolverOptions(),
    term_set: Iterable[WrappedTerm] | None = None,
) -> SolutionReport:
    """Find a cut matrix over the given pool, verify it, and build the
    one-cut proof.  Candidates are tried smallest first (clause count,
    then literal count, then canonical order)."""
    from .calculus import complexities

    sehs, _ = build_sehs(pb, g, term_set)
    ctx = _Ctx(sehs)
    stats = SearchStats()
    clauses = _starting_clauses(sehs, options, stats)
    found: list[ClauseSet] = []
    for cand in _candidate_stream(clauses, options, stats):
        if not _passes_cl(cand, ctx):
            continue
        stats.cl_passed += 1
        if not _passes_sol(cand, ctx):
            continue
        stats.sol_passed += 1
        cs = frozenset(cand)
        if not verify_solution(sehs, cs):
            raise VerificationFailure(
                "filter admitted a non-solution; this is a bug in the solver"
            )
        found.append(cs)
        if not options.all_solutions:
            break
    if not found:
        raise NoSolutionUnderPool(stats)
    best = found[0]
    eh = ExtendedHerbrandSequent(pb, g, dnf_of(best))
    proof = proof_from_eh(eh)
    return SolutionReport(
        solutions=tuple(found),
        cut_formula=eh.cut_formula(),
        verified=True,
        balanced=is_balanced(sehs, best),
        complexity=complexities(proof),
        slot_complexity=eh.complexity(),
        shared_complexity=eh.shared_complexity(),
        stats=stats,
        proof=proof,
        eh=eh,
    )
