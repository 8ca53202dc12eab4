"""Tiny arithmetic expression language shared by the polynomial parser and
the algebra identity checker.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := ('-' factor) | atom ('^' exponent)?
    atom   := INTEGER | IDENT | '(' expr ')'

Exponents are (possibly negative) integer literals.  Evaluation is generic:
values come from an environment and must support the usual operator dunders,
so the same parser serves commutative polynomial rings and non-commutative
structure-constant algebras (where operand order matters and is preserved).
"""

from __future__ import annotations

from typing import Any, Callable, Mapping


class ExprError(ValueError):
    """Malformed expression or unknown identifier."""


_IDENT_START = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_")
_IDENT_CONT = _IDENT_START | set("0123456789")


def tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("int", text[i:j]))
            i = j
            continue
        if ch in _IDENT_START:
            j = i
            while j < n and text[j] in _IDENT_CONT:
                j += 1
            tokens.append(("name", text[i:j]))
            i = j
            continue
        if ch in "+-*/^()":
            tokens.append((ch, ch))
            i += 1
            continue
        raise ExprError(f"unexpected character {ch!r} at position {i}")
    return tokens


def parse(text: str):
    """Parse ``text`` into a small AST of nested tuples."""
    tokens = tokenize(text)
    pos = 0

    def peek():
        return tokens[pos][0] if pos < len(tokens) else None

    def take(kind):
        nonlocal pos
        if peek() != kind:
            raise ExprError(f"expected {kind!r} at token {pos} in {text!r}")
        tok = tokens[pos]
        pos += 1
        return tok

    def parse_expr():
        node = parse_term()
        while peek() in ("+", "-"):
            op = take(peek())[0]
            rhs = parse_term()
            node = ("add" if op == "+" else "sub", node, rhs)
        return node

    def parse_term():
        node = parse_factor()
        while peek() in ("*", "/"):
            op = take(peek())[0]
            rhs = parse_factor()
            node = ("mul" if op == "*" else "div", node, rhs)
        return node

    def parse_factor():
        if peek() == "-":
            take("-")
            return ("neg", parse_factor())
        node = parse_atom()
        if peek() == "^":
            take("^")
            sign = 1
            if peek() == "-":
                take("-")
                sign = -1
            exp = int(take("int")[1]) * sign
            node = ("pow", node, exp)
        return node

    def parse_atom():
        kind = peek()
        if kind == "int":
            return ("int", int(take("int")[1]))
        if kind == "name":
            return ("name", take("name")[1])
        if kind == "(":
            take("(")
            node = parse_expr()
            take(")")
            return node
        raise ExprError(f"unexpected token at position {pos} in {text!r}")

    node = parse_expr()
    if pos != len(tokens):
        raise ExprError(f"trailing tokens in {text!r}")
    return node


def evaluate(node, env: Mapping[str, Any], from_int: Callable[[int], Any]):
    """Evaluate an AST against ``env``; integers go through ``from_int``."""
    kind = node[0]
    if kind == "int":
        return from_int(node[1])
    if kind == "name":
        name = node[1]
        if name not in env:
            raise ExprError(f"unknown identifier {name!r}")
        return env[name]
    if kind == "neg":
        return -evaluate(node[1], env, from_int)
    if kind == "add":
        return evaluate(node[1], env, from_int) + evaluate(node[2], env, from_int)
    if kind == "sub":
        return evaluate(node[1], env, from_int) - evaluate(node[2], env, from_int)
    if kind == "mul":
        return evaluate(node[1], env, from_int) * evaluate(node[2], env, from_int)
    if kind == "div":
        return evaluate(node[1], env, from_int) / evaluate(node[2], env, from_int)
    if kind == "pow":
        return evaluate(node[1], env, from_int) ** node[2]
    raise ExprError(f"bad AST node {node!r}")


def parse_eval(text: str, env: Mapping[str, Any], from_int: Callable[[int], Any]):
    return evaluate(parse(text), env, from_int)
