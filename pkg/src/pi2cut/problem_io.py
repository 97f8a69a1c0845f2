"""File formats: problem files, starting-set files and proof files.

A problem file holds the signature, the two quantifier blocks with their
matrices, the grammar section (instance tuples and witness terms) and an
optional block of wrapped instantiation terms.  All terms and formulas
use the canonical s-expression syntax; printing and parsing round-trip
bit-exactly after one normalisation.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import calculus
from .calculus import Node
from .grammar import SchematicPi2Grammar, WrappedTerm, validate
from .herbrand import PrenexProblem
from .sexpr import ParseError, SAtom, SList, SNode, expect_atom, expect_list, head_of, parse_all
from .syntax import (
    ALPHA,
    And,
    App,
    Atom,
    Clause,
    Exists,
    ForAll,
    Formula,
    Imp,
    Literal,
    Not,
    Or,
    Sequent,
    Signature,
    SyntaxError_,
    Term,
    Var,
    X,
    Y,
    beta,
    clause_key,
    formula_to_sexp,
    is_reserved,
    literal_to_sexp,
    term_to_sexp,
)


@dataclass(frozen=True)
class ProblemFile:
    problem: PrenexProblem
    grammar: SchematicPi2Grammar
    herbrand_terms: frozenset[WrappedTerm] | None = None


# ---------------------------------------------------------------------------
# Terms and formulas


def parse_term(node: SNode, sig: Signature, variables: set[str] | None) -> Term:
    """`variables` of None admits any non-function identifier as a variable."""
    if isinstance(node, SAtom):
        name = node.value
        if name in sig.functions:
            if sig.functions[name] != 0:
                raise ParseError(f"{name} expects arguments", node.line, node.col)
            return App(name, ())
        if variables is None or name in variables:
            return Var(name)
        raise ParseError(f"unknown identifier '{name}'", node.line, node.col)
    if not node.items:
        raise ParseError("empty term", node.line, node.col)
    head = expect_atom(node.items[0], "function symbol")
    arity = sig.functions.get(head.value)
    if arity is None:
        raise ParseError(f"unknown function symbol '{head.value}'", head.line, head.col)
    args = tuple(parse_term(a, sig, variables) for a in node.items[1:])
    if len(args) != arity:
        raise ParseError(
            f"{head.value} expects {arity} arguments, got {len(args)}", head.line, head.col
        )
    return App(head.value, args)


_CONNECTIVES = {"and": And, "or": Or, "imp": Imp}


def parse_formula(node: SNode, sig: Signature, variables: set[str] | None) -> Formula:
    lst = expect_list(node, "formula")
    head = head_of(lst, "formula")
    items = lst.items
    if head in _CONNECTIVES:
        if len(items) != 3:
            raise ParseError(f"{head} takes two formulas", lst.line, lst.col)
        return _CONNECTIVES[head](
            parse_formula(items[1], sig, variables), parse_formula(items[2], sig, variables)
        )
    if head == "not":
        if len(items) != 2:
            raise ParseError("not takes one formula", lst.line, lst.col)
        return Not(parse_formula(items[1], sig, variables))
    if head in ("forall", "exists"):
        if len(items) != 3:
            raise ParseError(f"{head} takes a variable and a formula", lst.line, lst.col)
        v = expect_atom(items[1], "variable").value
        inner = set(variables) | {v} if variables is not None else None
        body = parse_formula(items[2], sig, inner)
        return ForAll(v, body) if head == "forall" else Exists(v, body)
    arity = sig.predicates.get(head)
    if arity is None:
        raise ParseError(f"unknown predicate symbol '{head}'", lst.line, lst.col)
    args = tuple(parse_term(a, sig, variables) for a in items[1:])
    if len(args) != arity:
        raise ParseError(f"{head} expects {arity} arguments, got {len(args)}", lst.line, lst.col)
    return Atom(head, args)


def parse_literal(node: SNode, sig: Signature, variables: set[str] | None) -> Literal:
    f = parse_formula(node, sig, variables)
    if isinstance(f, Atom):
        return Literal(True, f)
    if isinstance(f, Not) and isinstance(f.sub, Atom):
        return Literal(False, f.sub)
    raise ParseError("expected a literal", node.line, node.col)


# ---------------------------------------------------------------------------
# Problem files


def _tuple_of(node: SNode, sig: Signature, variables: set[str]) -> tuple[Term, ...]:
    lst = expect_list(node, "term tuple")
    return tuple(parse_term(t, sig, variables) for t in lst.items)


def parse_problem(text: str) -> ProblemFile:
    sections: dict[str, SList] = {}
    for node in parse_all(text):
        lst = expect_list(node, "section")
        head = head_of(lst, "section")
        if head in sections:
            raise ParseError(f"duplicate section '{head}'", lst.line, lst.col)
        sections[head] = lst
    for required in ("signature", "forall-vars", "exists-vars", "antecedent", "succedent", "grammar"):
        if required not in sections:
            raise ParseError(f"missing section '{required}'", 1, 1)

    functions: dict[str, int] = {}
    predicates: dict[str, int] = {}
    for item in sections["signature"].items[1:]:
        decl = expect_list(item, "symbol declaration")
        kind = head_of(decl, "fun or pred")
        if kind not in ("fun", "pred") or len(decl.items) != 3:
            raise ParseError("expected (fun name arity) or (pred name arity)", decl.line, decl.col)
        name = expect_atom(decl.items[1], "symbol name").value
        arity_tok = expect_atom(decl.items[2], "arity")
        if not arity_tok.value.isdigit():
            raise ParseError(f"arity must be a number: {arity_tok.value}", arity_tok.line, arity_tok.col)
        if is_reserved(name):
            raise ParseError(f"reserved name '{name}' may not be declared", decl.line, decl.col)
        if name in functions or name in predicates:
            raise ParseError(f"symbol '{name}' declared twice", decl.line, decl.col)
        (functions if kind == "fun" else predicates)[name] = int(arity_tok.value)
    try:
        sig = Signature(functions, predicates)
    except SyntaxError_ as e:
        raise ParseError(str(e), sections["signature"].line, sections["signature"].col)

    def var_block(name: str) -> tuple[str, ...]:
        out = []
        for item in sections[name].items[1:]:
            v = expect_atom(item, "variable").value
            if is_reserved(v) or v in functions or v in predicates:
                raise ParseError(f"'{v}' cannot be a quantified variable", item.line, item.col)
            out.append(v)
        return tuple(out)

    forall_vars = var_block("forall-vars")
    exists_vars = var_block("exists-vars")

    def matrix(name: str, variables: tuple[str, ...]) -> Formula:
        items = sections[name].items
        if len(items) != 2:
            raise ParseError(f"{name} takes one formula", sections[name].line, sections[name].col)
        return parse_formula(items[1], sig, set(variables))

    antecedent = matrix("antecedent", forall_vars)
    succedent = matrix("succedent", exists_vars)
    try:
        problem = PrenexProblem(sig, forall_vars, exists_vars, antecedent, succedent)
    except SyntaxError_ as e:
        raise ParseError(str(e), 1, 1)

    gsec = sections["grammar"]
    parts: dict[str, SList] = {}
    for item in gsec.items[1:]:
        lst = expect_list(item, "grammar part")
        parts[head_of(lst, "grammar part")] = lst
    for required in ("f-tuples", "g-tuples", "r-terms", "t-terms"):
        if required not in parts:
            raise ParseError(f"grammar is missing '{required}'", gsec.line, gsec.col)
    r_nodes = parts["r-terms"].items[1:]
    betas = {beta(j) for j in range(1, len(r_nodes) + 1)}
    f_tuples = tuple(_tuple_of(t, sig, {ALPHA}) for t in parts["f-tuples"].items[1:])
    g_tuples = tuple(_tuple_of(t, sig, betas) for t in parts["g-tuples"].items[1:])
    r_terms = tuple(parse_term(t, sig, betas) for t in r_nodes)
    t_terms = tuple(parse_term(t, sig, {ALPHA}) for t in parts["t-terms"].items[1:])
    grammar = SchematicPi2Grammar(sig, f_tuples, g_tuples, r_terms, t_terms)
    violations, _ = validate(grammar)
    if violations:
        raise ParseError("; ".join(violations), gsec.line, gsec.col)

    herbrand = None
    if "herbrand-terms" in sections:
        wrapped = []
        for item in sections["herbrand-terms"].items[1:]:
            lst = expect_list(item, "wrapped term")
            kind = head_of(lst, "hF or hG")
            if kind not in ("hF", "hG"):
                raise ParseError("wrapped terms start with hF or hG", lst.line, lst.col)
            args = tuple(parse_term(t, sig, set()) for t in lst.items[1:])
            wrapped.append(WrappedTerm("F" if kind == "hF" else "G", args))
        herbrand = frozenset(wrapped)

    return ProblemFile(problem, grammar, herbrand)


def print_problem(pf: ProblemFile) -> str:
    sig = pf.problem.signature
    lines = ["(signature"]
    for name in sorted(sig.functions):
        lines.append(f"  (fun {name} {sig.functions[name]})")
    for name in sorted(sig.predicates):
        lines.append(f"  (pred {name} {sig.predicates[name]})")
    lines.append(")")
    lines.append("(forall-vars" + "".join(f" {v}" for v in pf.problem.forall_vars) + ")")
    lines.append("(exists-vars" + "".join(f" {v}" for v in pf.problem.exists_vars) + ")")
    lines.append("(antecedent " + formula_to_sexp(pf.problem.antecedent) + ")")
    lines.append("(succedent " + formula_to_sexp(pf.problem.succedent) + ")")
    g = pf.grammar

    def tup(t: tuple[Term, ...]) -> str:
        return "(" + " ".join(term_to_sexp(x) for x in t) + ")"

    lines.append("(grammar")
    lines.append("  (f-tuples " + " ".join(tup(t) for t in g.f_tuples) + ")")
    lines.append("  (g-tuples " + " ".join(tup(t) for t in g.g_tuples) + ")")
    lines.append("  (r-terms " + " ".join(term_to_sexp(t) for t in g.r_terms) + ")")
    lines.append("  (t-terms " + " ".join(term_to_sexp(t) for t in g.t_terms) + ")")
    lines.append(")")
    if pf.herbrand_terms is not None:
        terms = sorted(pf.herbrand_terms, key=WrappedTerm.key)
        lines.append("(herbrand-terms " + " ".join(t.to_sexp() for t in terms) + ")")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Starting-set files: one clause per line, literals over x and y


def parse_starting_set(text: str, sig: Signature) -> frozenset[Clause]:
    clauses = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        stripped = raw.split(";")[0].strip()
        if not stripped:
            continue
        nodes = parse_all(stripped)
        lits = [parse_literal(n, sig, {X, Y}) for n in nodes]
        if not lits:
            continue
        clauses.append(frozenset(lits))
    return frozenset(clauses)


def print_starting_set(clauses: frozenset[Clause]) -> str:
    lines = []
    for c in sorted(clauses, key=clause_key):
        lines.append(" ".join(sorted(literal_to_sexp(l) for l in c)))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Proof files


def print_sequent(s: Sequent) -> str:
    left = " ".join(sorted(formula_to_sexp(f) for f in s.left))
    right = " ".join(sorted(formula_to_sexp(f) for f in s.right))
    lpart = f"(left {left})" if left else "(left)"
    rpart = f"(right {right})" if right else "(right)"
    return f"(sequent {lpart} {rpart})"


def _print_node(n: Node, indent: int) -> list[str]:
    pad = "  " * indent
    parts = [f"{pad}(node (rule {n.rule})"]
    if n.principal is not None:
        parts.append(f"{pad}  (principal {n.side} {formula_to_sexp(n.principal)})")
    if n.witness is not None:
        parts.append(f"{pad}  (witness {term_to_sexp(n.witness)})")
    if n.eigen is not None:
        parts.append(f"{pad}  (eigen {n.eigen})")
    if n.keep:
        parts.append(f"{pad}  (keep)")
    if n.cut_formula is not None:
        parts.append(f"{pad}  (cut-formula {formula_to_sexp(n.cut_formula)})")
    parts.append(f"{pad}  {print_sequent(n.sequent)}")
    if n.premises:
        parts.append(f"{pad}  (premises")
        for p in n.premises:
            parts.extend(_print_node(p, indent + 2))
        parts.append(f"{pad}  )")
    parts.append(f"{pad})")
    return parts


def print_proof(root: Node, sig: Signature) -> str:
    lines = ["(proof"]
    lines.append("  (signature")
    for name in sorted(sig.functions):
        lines.append(f"    (fun {name} {sig.functions[name]})")
    for name in sorted(sig.predicates):
        lines.append(f"    (pred {name} {sig.predicates[name]})")
    lines.append("  )")
    lines.extend(_print_node(root, 1))
    lines.append(")")
    return "\n".join(lines) + "\n"


_RULES = {
    calculus.AXIOM,
    calculus.NON_TAUT_LEAF,
    calculus.AND_L,
    calculus.AND_R,
    calculus.OR_L,
    calculus.OR_R,
    calculus.IMP_L,
    calculus.IMP_R,
    calculus.NOT_L,
    calculus.NOT_R,
    calculus.FORALL_L,
    calculus.FORALL_R,
    calculus.EXISTS_L,
    calculus.EXISTS_R,
    calculus.CUT,
}


def _parse_node(node: SNode, sig: Signature) -> Node:
    lst = expect_list(node, "proof node")
    if head_of(lst, "node") != "node":
        raise ParseError("expected (node ...)", lst.line, lst.col)
    rule = None
    principal = None
    side = None
    witness = None
    eigen = None
    keep = False
    cut_formula = None
    sequent = None
    premises: tuple[Node, ...] = ()
    for item in lst.items[1:]:
        part = expect_list(item, "node part")
        head = head_of(part, "node part")
        if head == "rule":
            rule = expect_atom(part.items[1], "rule name").value
            if rule not in _RULES:
                raise ParseError(f"unknown rule '{rule}'", part.line, part.col)
        elif head == "principal":
            side = expect_atom(part.items[1], "side").value
            principal = parse_formula(part.items[2], sig, None)
        elif head == "witness":
            witness = parse_term(part.items[1], sig, None)
        elif head == "eigen":
            eigen = expect_atom(part.items[1], "eigenvariable").value
        elif head == "keep":
            keep = True
        elif head == "cut-formula":
            cut_formula = parse_formula(part.items[1], sig, None)
        elif head == "sequent":
            left: list[Formula] = []
            right: list[Formula] = []
            for sub in part.items[1:]:
                sublist = expect_list(sub, "sequent side")
                which = head_of(sublist, "left or right")
                target = left if which == "left" else right
                for f in sublist.items[1:]:
                    target.append(parse_formula(f, sig, None))
            sequent = Sequent.of(left, right)
        elif head == "premises":
            premises = tuple(_parse_node(p, sig) for p in part.items[1:])
        else:
            raise ParseError(f"unknown node part '{head}'", part.line, part.col)
    if rule is None or sequent is None:
        raise ParseError("node needs a rule and a sequent", lst.line, lst.col)
    return Node(
        rule,
        sequent,
        premises,
        principal=principal,
        side=side,
        witness=witness,
        eigen=eigen,
        keep=keep,
        cut_formula=cut_formula,
    )


def parse_proof(text: str) -> tuple[Node, Signature]:
    nodes = parse_all(text)
    if len(nodes) != 1:
        raise ParseError("expected a single (proof ...) form", 1, 1)
    lst = expect_list(nodes[0], "proof")
    if head_of(lst, "proof") != "proof" or len(lst.items) != 3:
        raise ParseError("expected (proof (signature ...) (node ...))", lst.line, lst.col)
    sig_list = expect_list(lst.items[1], "signature")
    if head_of(sig_list, "signature") != "signature":
        raise ParseError("expected (signature ...)", sig_list.line, sig_list.col)
    functions: dict[str, int] = {}
    predicates: dict[str, int] = {}
    for item in sig_list.items[1:]:
        decl = expect_list(item, "symbol declaration")
        kind = head_of(decl, "fun or pred")
        name = expect_atom(decl.items[1], "symbol name").value
        arity_tok = expect_atom(decl.items[2], "arity")
        if not arity_tok.value.isdigit():
            raise ParseError("arity must be a number", arity_tok.line, arity_tok.col)
        (functions if kind == "fun" else predicates)[name] = int(arity_tok.value)
    sig = Signature(functions, predicates)
    return _parse_node(lst.items[2], sig), sig
