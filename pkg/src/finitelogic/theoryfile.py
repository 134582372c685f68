"""Text formats for theories and modelling maps.

Theory file::

    signature {
      letters: "0", "'";
      constants: "0", "'", "0'";
      functions: c/2;
      predicates: C/3;
    }
    axiom C("0", "'", "0'");
    structure {
      universe: "0", "'", "0'";
      fun c: ("0", "'") -> "0'";
      rel C: ("0", "'", "0'");
    }

Map file::

    map {
      pred C -> C(x1, x2, x3);
      const "0" -> "'";
      fun c -> c(x1, x2);
      eq -> x1 = x2;
      guard -> NUMERAL(x1);
    }

``#`` starts a comment outside quotes.  Statements end with ``;``.
"""

from __future__ import annotations

import re

from .modelling import ModellingMap, TermTemplate
from .structures import FiniteStructure, Theory
from .syntax import (App, Atom, Const, ParseError, PredTemplate, Signature, Var, parse,
                     parse_term, to_text)

__all__ = ["TheoryFileError", "load_theory", "dump_theory", "load_map", "quote"]

_STRING = r'"(?:[^"\\]|\\.)*"'


class TheoryFileError(ValueError):
    def __init__(self, msg: str, line: int = 0, col: int = 0):
        self.line, self.col = line, col
        super().__init__(f"{line}:{col}: {msg}" if line else msg)


def quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _unquote(tok: str) -> str:
    return re.sub(r"\\(.)", r"\1", tok[1:-1])


def _position(text: str, offset: int) -> tuple:
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


def _statements(text: str) -> list:
    """Split into (offset, statement, block) with comments removed.

    ``block`` is the name of the enclosing ``name { ... }`` or None.
    """
    out, buf, start, block = [], [], None, None
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == '"':
            m = re.compile(_STRING).match(text, i)
            if not m:
                raise TheoryFileError("unterminated string", *_position(text, i))
            if start is None:
                start = i
            buf.append(m.group())
            i = m.end()
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch == "{":
            head = "".join(buf).strip()
            if block is not None or not re.fullmatch(r"[A-Za-z]+", head):
                raise TheoryFileError(f"unexpected block {head!r}", *_position(text, i))
            block, buf, start = head, [], None
        elif ch == "}":
            if block is None:
                raise TheoryFileError("unmatched '}'", *_position(text, i))
            if "".join(buf).strip():
                out.append((start, "".join(buf).strip(), block))
            block, buf, start = None, [], None
        elif ch == ";":
            stmt = "".join(buf).strip()
            if stmt:
                out.append((start, stmt, block))
            buf, start = [], None
        else:
            if start is None and not ch.isspace():
                start = i
            buf.append(ch)
        i += 1
    if block is not None:
        raise TheoryFileError(f"block {block!r} is not closed", *_position(text, n))
    if "".join(buf).strip():
        raise TheoryFileError("statement without ';'", *_position(text, start or 0))
    return out


def _unbracket(s: str) -> str:
    s = s.strip()
    if s.startswith("[") and s.endswith("]"):
        return s[1:-1]
    return s


def _strings(s: str) -> list:
    s = _unbracket(s)
    toks = re.findall(_STRING, s)
    rest = re.sub(_STRING, "", s).replace(",", "").strip()
    if rest:
        raise ValueError(f"expected quoted strings, found {rest!r}")
    return [_unquote(t) for t in toks]


def _arities(s: str) -> list:
    out = []
    for part in filter(None, (p.strip() for p in s.split(","))):
        m = re.fullmatch(r"([A-Za-z_][A-Za-z0-9_]*)\s*/\s*(\d+)", part)
        if not m:
            raise ValueError(f"expected name/arity, found {part!r}")
        out.append((m.group(1), int(m.group(2))))
    return out


def _tuples(s: str) -> list:
    s = _unbracket(s)
    out = []
    for m in re.finditer(r"\(([^()]*)\)", s):
        out.append(tuple(_strings(m.group(1))))
    if re.sub(r"\(([^()]*)\)", "", s).replace(",", "").strip():
        raise ValueError("expected a list of parenthesised tuples")
    return out


def load_theory(text: str, name: str = "") -> Theory:
    sig_fields: dict = {}
    axioms_src, universe, carrier, consts, funcs, rels = [], None, None, {}, {}, {}
    for offset, stmt, block in _statements(text):
        try:
            if block == "signature":
                key, _, val = stmt.partition(":")
                key = key.strip()
                if key in ("letters", "constants"):
                    sig_fields[key] = tuple(_strings(val))
                elif key in ("functions", "predicates"):
                    sig_fields[key] = tuple(_arities(val))
                elif key in ("equality", "numerals"):
                    sig_fields["includes_equality" if key == "equality" else key] = \
                        val.strip() in ("yes", "true")
                else:
                    raise ValueError(f"unknown signature field {key!r}")
            elif block == "structure":
                key, _, val = stmt.partition(":")
                key = key.strip()
                if key == "universe":
                    universe = _strings(val)
                elif key == "carrier":
                    carrier = _strings(val)
                elif key.startswith("const "):
                    consts[_strings(key[6:])[0]] = _strings(val)[0]
                elif key.startswith("rel "):
                    rels[key[4:].strip()] = frozenset(_tuples(val))
                elif key.startswith("fun "):
                    table = {}
                    for entry in filter(None, (e.strip() for e in re.split(r",(?=\s*\()", _unbracket(val)))):
                        args, _, out = entry.partition("->")
                        (tup,) = _tuples(args)
                        table[tup] = _strings(out)[0]
                    funcs[key[4:].strip()] = table
                else:
                    raise ValueError(f"unknown structure field {key!r}")
            elif block is None and stmt.startswith("axiom "):
                axioms_src.append((offset, stmt[6:].strip()))
            else:
                raise ValueError(f"unexpected statement {stmt[:30]!r}")
        except (ValueError, ParseError) as e:
            raise TheoryFileError(str(e), *_position(text, offset)) from None
    try:
        sig = Signature(**sig_fields)
    except ValueError as e:
        raise TheoryFileError(f"bad signature: {e}") from None
    axioms = []
    for offset, src in axioms_src:
        try:
            axioms.append(parse(src, sig))
        except (ParseError, ValueError) as e:
            raise TheoryFileError(str(e), *_position(text, offset)) from None
    structure = None
    if universe is not None:
        cmap = {c: c for c in sig.constants if c in set(universe) | set(carrier or ())}
        cmap.update(consts)
        try:
            structure = FiniteStructure(tuple(universe), cmap, funcs, rels,
                                        carrier=tuple(carrier) if carrier is not None else None)
        except ValueError as e:
            raise TheoryFileError(f"bad structure: {e}") from None
    try:
        return Theory(sig, tuple(axioms), structure, name=name)
    except ValueError as e:
        raise TheoryFileError(str(e)) from None


def dump_theory(th: Theory) -> str:
    sig = th.sig
    lines = [f"# {th.name}"] if th.name else []
    lines.append("signature {")
    if sig.letters:
        lines.append(f"  letters: {', '.join(map(quote, sig.letters))};")
    if sig.constants:
        lines.append(f"  constants: {', '.join(map(quote, sig.constants))};")
    if sig.functions:
        lines.append(f"  functions: {', '.join(f'{n}/{k}' for n, k in sig.functions)};")
    if sig.predicates:
        lines.append(f"  predicates: {', '.join(f'{n}/{k}' for n, k in sig.predicates)};")
    if not sig.includes_equality:
        lines.append("  equality: no;")
    if sig.numerals:
        lines.append("  numerals: yes;")
    lines.append("}")
    lines += [f"axiom {to_text(a)};" for a in th.axioms]
    s = th.structure
    if s is not None:
        lines.append("structure {")
        lines.append(f"  universe: {', '.join(map(quote, s.universe))};")
        if tuple(s.carrier) != tuple(s.universe):
            lines.append(f"  carrier: {', '.join(map(quote, s.carrier))};")
        for c, v in s.constant_map.items():
            if c != v:
                lines.append(f"  const {quote(c)}: {quote(v)};")
        for f, table in s.function_tables.items():
            entries = [f"({', '.join(map(quote, k))}) -> {quote(v)}" for k, v in sorted(table.items())]
            lines.append(f"  fun {f}: {', '.join(entries)};")
        for r, rows in s.relation_tables.items():
            lines.append(f"  rel {r}: {', '.join('(' + ', '.join(map(quote, t)) + ')' for t in sorted(rows))};")
        lines.append("}")
    return "\n".join(lines) + "\n"


def _params(k: int) -> tuple:
    return tuple(f"x{i}" for i in range(1, k + 1))


def load_map(text: str, source: Theory, target: Theory, name: str = "") -> ModellingMap:
    """Read a map file; symbols it does not mention map to the same-named target symbol."""
    consts, funcs, preds, eq, guard = {}, {}, {}, None, None
    src, tgt = source.sig, target.sig
    for offset, stmt, block in _statements(text):
        try:
            if block != "map":
                raise ValueError("statements must sit inside 'map { ... }'")
            lhs, arrow, rhs = stmt.partition("->")
            if not arrow:
                raise ValueError("expected '->'")
            lhs, rhs = lhs.strip(), rhs.strip()
            kind, _, sym = lhs.partition(" ")
            sym = sym.strip()
            if kind == "const":
                (c,) = _strings(sym)
                consts[c] = parse_term(rhs, tgt)
            elif kind == "fun":
                k = src.function_arity[sym]
                funcs[sym] = TermTemplate(_params(k), parse_term(rhs, tgt))
            elif kind == "pred":
                k = src.predicate_arity[sym]
                preds[sym] = PredTemplate(_params(k), parse(rhs, tgt))
            elif kind == "eq":
                eq = PredTemplate(("x1", "x2"), parse(rhs, tgt))
            elif kind == "guard":
                guard = PredTemplate(("x1",), parse(rhs, tgt))
            else:
                raise ValueError(f"unknown map entry {kind!r}")
        except KeyError as e:
            raise TheoryFileError(f"symbol {e} is not in the source signature",
                                  *_position(text, offset)) from None
        except (ValueError, ParseError) as e:
            raise TheoryFileError(str(e), *_position(text, offset)) from None
    for c in src.constants:
        if c not in consts and tgt.has_constant(c):
            consts[c] = Const(c)
    for f, k in src.functions:
        if f not in funcs and tgt.function_arity.get(f) == k:
            funcs[f] = TermTemplate(_params(k), App(f, tuple(Var(v) for v in _params(k))))
    for p, k in src.predicates:
        if p not in preds and tgt.predicate_arity.get(p) == k:
            preds[p] = PredTemplate(_params(k), Atom(p, tuple(Var(v) for v in _params(k))))
    try:
        return ModellingMap(source, target, consts, funcs, preds, eq, guard, name=name)
    except ValueError as e:
        raise TheoryFileError(str(e)) from None

