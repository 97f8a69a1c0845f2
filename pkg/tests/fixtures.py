"""Loaders for the bundled problem files plus their instance data."""

from __future__ import annotations

from pathlib import Path

from pi2cut.herbrand import HerbrandInstanceSet
from pi2cut.problem_io import ProblemFile, parse_problem
from pi2cut.syntax import App, Atom, Literal, Var, X, Y, const

PROBLEM_DIR = Path(__file__).resolve().parent.parent / "problems"


def load(name: str) -> ProblemFile:
    return parse_problem((PROBLEM_DIR / name).read_text(encoding="utf-8"))


def two_step() -> ProblemFile:
    return load("two_step.p2")


def two_step_instances() -> HerbrandInstanceSet:
    r1 = const("r1")
    t1 = lambda t: App("t1", (t,))
    t2 = lambda t: App("t2", (t,))
    r2 = lambda t: App("r2", (t,))
    f_tuples = ((r1,), (r2(t1(r1)),), (r2(t2(r1)),))
    g_tuples = (
        (t1(r1), t1(r2(t1(r1)))),
        (t1(r1), t2(r2(t1(r1)))),
        (t2(r1), t1(r2(t2(r1)))),
        (t2(r1), t2(r2(t2(r1)))),
    )
    return HerbrandInstanceSet(f_tuples, g_tuples)


def shared_base() -> ProblemFile:
    return load("unsolvable_shared_base.p2")


def two_bases() -> ProblemFile:
    return load("unsolvable_two_bases.p2")


def swap_pair() -> ProblemFile:
    return load("swap_pair.p2")


def unbalanced_pair() -> ProblemFile:
    return load("unbalanced_pair.p2")


def lit(pred: str, *args) -> Literal:
    return Literal(True, Atom(pred, tuple(args)))


def nlit(pred: str, *args) -> Literal:
    return Literal(False, Atom(pred, tuple(args)))


x = Var(X)
y = Var(Y)
