"""Minimal s-expression reader with source positions.

Atoms are bare tokens, lists are parenthesised; ``;`` starts a comment
running to the end of the line.
"""

from __future__ import annotations

from dataclasses import dataclass


class ParseError(Exception):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col


@dataclass(frozen=True)
class SAtom:
    value: str
    line: int
    col: int


@dataclass(frozen=True)
class SList:
    items: tuple["SNode", ...]
    line: int
    col: int


SNode = SAtom | SList


def _tokens(text: str):
    line, col = 1, 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
        elif ch in " \t\r":
            col += 1
            i += 1
        elif ch == ";":
            while i < len(text) and text[i] != "\n":
                i += 1
        elif ch in "()":
            yield (ch, line, col)
            col += 1
            i += 1
        else:
            start = i
            start_col = col
            while i < len(text) and text[i] not in " \t\r\n();":
                i += 1
                col += 1
            yield (text[start:i], line, start_col)


def parse_all(text: str) -> list[SNode]:
    stack: list[tuple[list[SNode], int, int]] = []
    top: list[SNode] = []
    for tok, line, col in _tokens(text):
        if tok == "(":
            stack.append((top, line, col))
            top = []
        elif tok == ")":
            if not stack:
                raise ParseError("unmatched ')'", line, col)
            parent, l0, c0 = stack.pop()
            parent.append(SList(tuple(top), l0, c0))
            top = parent
        else:
            top.append(SAtom(tok, line, col))
    if stack:
        _, line, col = stack[-1]
        raise ParseError("unclosed '('", line, col)
    return top


def expect_list(node: SNode, what: str) -> SList:
    if not isinstance(node, SList):
        raise ParseError(f"expected {what}, got atom '{node.value}'", node.line, node.col)
    return node


def expect_atom(node: SNode, what: str) -> SAtom:
    if not isinstance(node, SAtom):
        raise ParseError(f"expected {what}, got a list", node.line, node.col)
    return node


def head_of(node: SList, what: str) -> str:
    if not node.items:
        raise ParseError(f"empty list where {what} was expected", node.line, node.col)
    return expect_atom(node.items[0], f"{what} keyword").value
