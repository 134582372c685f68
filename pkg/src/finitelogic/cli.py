"""Command-line front end.

Exit codes: 0 when every check passes, 1 when a check fails, 2 for usage
or input errors.  Reports go to stdout; ``--format json`` emits sorted keys
so identical invocations give identical bytes.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Callable, Optional

from . import concat, diagonal, inductive, modelling, paradox, proofs, shots, structures, syntax
from .derivation import ReplayError
from .theoryfile import TheoryFileError, dump_theory, load_map, load_theory

# Module operation -> the one subcommand that runs it.
OPERATIONS = {
    "parse": ("logic", "parse"),
    "substitute": ("logic", "subst"),
    "classify_role": ("logic", "role"),
    "generate_concat_n": ("concat", "gen"),
    "decide": ("concat", "decide"),
    "check_nested": ("concat", "nested"),
    "eval_inductive": ("concat", "inductive"),
    "prov": ("concat", "prov"),
    "extend": ("model", "extend"),
    "verify": ("model", "verify"),
    "elementarily_equivalent": ("model", "equiv"),
    "restrict": ("model", "restrict"),
    "peano_check": ("model", "peano"),
    "godel_embedding_check": ("model", "godel"),
    "tarskian_image": ("model", "tarski"),
    "build_dn": ("diag", "dn"),
    "cauchy_check": ("diag", "cauchy"),
    "limit_check": ("diag", "limit"),
    "universal_check": ("diag", "table"),
    "minor_theorem_check": ("diag", "minor"),
    "enumerate_structures": ("shot", "enum"),
    "exten": ("shot", "exten"),
    "shot_search": ("shot", "search"),
    "core_check": ("shot", "core"),
    "finite_comprehension_check": ("shot", "fincomp"),
    "derive_concat": ("paradox", "concat"),
    "derive_collapse": ("paradox", "eden"),
    "derive_general_paradox": ("paradox", "general"),
    "tamed_eval": ("paradox", "tamed"),
}


class InputError(Exception):
    """Bad file or argument content; reported with a position and exit code 2."""


@dataclass
class Report:
    record: dict
    ok: bool = True
    text: Optional[str] = None


# ------------------------------------------------------------------ inputs

def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}") from None


def _letters(s: str) -> tuple:
    out = tuple(x.strip() for x in s.split(",") if x.strip())
    if not out:
        raise InputError("--letters needs at least one letter")
    return out


def _names(s: str) -> tuple:
    return tuple(x.strip() for x in s.split(",") if x.strip())


def _theory(ref: str) -> structures.Theory:
    """``@concatN``, ``@concatN-plain``, ``@simplified``, ``@toy``, ``@peano`` or a theory file.

    ``-plain`` leaves out the defined LETTER, NUMERAL and ``c``.
    """
    if ref.startswith("@"):
        name = ref[1:]
        plain = name.endswith("-plain")
        digits = name[6:-6] if plain else name[6:]
        if name.startswith("concat") and digits.isdigit() and int(digits) > 0:
            return concat.generate_concat_n(("0", "'"), int(digits), defined=not plain)
        builtins = {"simplified": concat.simplified_concat2, "toy": modelling.toy_decidable_theory,
                    "peano": modelling.peano_theory}
        if name not in builtins:
            raise InputError(f"unknown built-in theory {ref!r}")
        return builtins[name]()
    try:
        return load_theory(_read(ref), name=ref)
    except TheoryFileError as e:
        raise InputError(f"{ref}:{e}") from None


def _map(ref: str, source, target) -> modelling.ModellingMap:
    """``@identity``, ``@swap`` (exchange the letters 0 and ') or a map file path."""
    if ref == "@identity":
        return modelling.identity_map(source, target)
    if ref == "@swap":
        return modelling.permutation_map(source, {"0": "'", "'": "0"})
    if ref.startswith("@"):
        raise InputError(f"unknown built-in map {ref!r}")
    try:
        return load_map(_read(ref), source, target, name=ref)
    except TheoryFileError as e:
        raise InputError(f"{ref}:{e}") from None


def _formula(text: str, sig=None, what: str = "formula"):
    try:
        return syntax.parse(text, sig)
    except syntax.ParseError as e:
        raise InputError(f"{what}: {e}\n  {text}\n  {' ' * e.pos}^") from None


def _lines(path: str) -> list:
    out = []
    for n, raw in enumerate(_read(path).splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((n, line))
    return out


def _predicate_list(path: str) -> list:
    entries = _lines(path)
    seq = diagonal.from_list([t for _, t in entries])
    for i, (n, _) in enumerate(entries):
        try:
            seq(i)
        except ValueError as e:
            raise InputError(f"{path}:{n}: {e}") from None
    return [t for _, t in entries]


def _sequence(ref: str) -> diagonal.PredicateSequence:
    """``@rule`` (e.g. ``@enumeration``, ``@D-diagonal-of shift``) or a sequence file."""
    if ref.startswith("@"):
        text = "rule: " + ref[1:]
    else:
        entries = _lines(ref)
        if not (len(entries) == 1 and entries[0][1].startswith("rule:")):
            return diagonal.from_list(_predicate_list(ref))
        text = entries[0][1]
    try:
        return diagonal.load_sequence(text)
    except (ValueError, KeyError) as e:
        raise InputError(f"{ref}: {e}") from None


def _pool(path: Optional[str]) -> tuple:
    if path is None:
        return shots.DEFAULT_POOL
    out = []
    for n, line in _lines(path):
        try:
            shots.SetPredicate.of(line)
        except ValueError as e:
            raise InputError(f"{path}:{n}: {e}") from None
        out.append(line)
    return tuple(out)


def _structure(rows: str) -> shots.MembershipStructure:
    parts = [r for r in rows.split(",") if r] if rows != "-" else []
    if any(set(r) - {"0", "1"} for r in parts):
        raise InputError("--rows takes 0/1 rows separated by commas (use - for k = 0)")
    try:
        ms = shots.MembershipStructure.from_rows(parts)
    except ValueError as e:
        raise InputError(str(e)) from None
    if not ms.extensional:
        raise InputError("structure is not extensional: two elements have the same members")
    return ms


def _language(args) -> paradox.WildLanguage:
    if getattr(args, "lang", None):
        try:
            return paradox.load_language(_read(args.lang))
        except ValueError as e:
            raise InputError(f"{args.lang}: {e}") from None
    return paradox.circular_language(_names(args.terms))


def _derivation_report(lang, d) -> Report:
    try:
        ok, why = paradox.replay_wild(lang, d), None
    except ReplayError as e:
        ok, why = False, str(e)
    rec = {"steps": d.to_records(), "conclusion": d.render(d.conclusion),
           "replays": ok, "replay_error": why}
    text = d.to_text() + f"\nreplay: {'PASS' if ok else 'FAIL: ' + why}"
    return Report(rec, ok, text)


# ---------------------------------------------------------------- handlers

def cmd_logic_parse(a) -> Report:
    sig = _theory(a.theory).sig if a.theory else None
    f = _formula(a.formula, sig)
    return Report({"formula": syntax.to_text(f), "free_vars": sorted(syntax.free_vars(f)),
                   "sentence": syntax.is_sentence(f), "size": syntax.size(f)})


def cmd_logic_subst(a) -> Report:
    sig = _theory(a.theory).sig if a.theory else None
    f = _formula(a.formula, sig)
    try:
        t = syntax.parse_term(a.term, sig)
    except syntax.ParseError as e:
        raise InputError(f"term: {e}") from None
    return Report({"result": syntax.to_text(syntax.substitute(f, a.var, t))})


def cmd_logic_role(a) -> Report:
    sig = _theory(a.theory).sig if a.theory else None
    return Report({"text": a.text, "role": syntax.classify_role(a.text, sig).value})


def cmd_concat_gen(a) -> Report:
    if a.simplified:
        th = concat.simplified_concat2()
    else:
        try:
            th = concat.generate_concat_n(_letters(a.letters), a.n, cap=a.cap,
                                          defined=not a.no_defined)
        except concat.InstanceCapExceeded as e:
            raise InputError(str(e)) from None
    text = dump_theory(th)
    return Report({"theory": text, "axioms": len(th.axioms),
                   "universe": len(th.structure.universe)}, True, text.rstrip("\n"))


def cmd_concat_decide(a) -> Report:
    th = _theory(a.theory)
    if th.structure is None:
        raise InputError("decide needs a theory with a structure")
    s = _formula(a.sentence, th.sig, "sentence")
    if not syntax.is_sentence(s):
        raise InputError(f"not a sentence: free variables {sorted(syntax.free_vars(s))}")
    pool = modelling.predicate_pool(th, a.pool_size) if a.pool_size else None
    try:
        verdict = structures.decide(th, s, pool=pool)
    except structures.EvaluationError as e:
        raise InputError(str(e)) from None
    return Report({"sentence": syntax.to_text(s), "verdict": verdict})


def cmd_concat_nested(a) -> Report:
    letters = _letters(a.letters)
    if a.m is not None and a.n is not None:
        pairs = [(a.m, a.n)]
    else:
        pairs = [(m, n) for n in range(2, a.max_n + 1) for m in range(1, n)]
    theories = {k: concat.generate_concat_n(letters, k) for p in pairs for k in p}
    results, ok = [], True
    for m, n in pairs:
        try:
            r = concat.check_nested(theories[m], theories[n], m, n, a.depth,
                                    relativized=not a.unrelativized)
        except ValueError as e:
            raise InputError(str(e)) from None
        ok &= r.passed
        results.append({"m": m, "n": n, "checked": r.checked, "verdict": "PASS" if r.passed else "FAIL",
                        "first_divergence": list(r.first_divergence) if r.first_divergence else None})
    return Report({"relativized": not a.unrelativized, "depth": a.depth, "pairs": results}, ok)


def cmd_concat_inductive(a) -> Report:
    if a.predicate == "numeral":
        p = inductive.numeral_predicate()
    else:
        p = inductive.letter_predicate(_letters(a.letters))
    try:
        verdict = inductive.eval_inductive(p, a.string, a.bound)
    except ValueError as e:
        raise InputError(str(e)) from None
    return Report({"predicate": p.name, "string": a.string, "verdict": verdict})


def cmd_concat_prov(a) -> Report:
    th = _theory(a.theory)
    s = _formula(a.sentence, th.sig, "sentence")
    if not syntax.is_sentence(s):
        raise InputError("prov needs a sentence")
    res = proofs.prov(th, s, a.bound)
    rec = {"sentence": syntax.to_text(s), "status": res.status, "bound": a.bound,
           "derivation": res.derivation.to_records() if res.derivation else None}
    text = f"{res.status}: {syntax.to_text(s)}"
    if res.derivation:
        text += "\n" + res.derivation.to_text()
    return Report(rec, res.proved, text)


def _map_args(a):
    source = _theory(a.source)
    target = _theory(a.target) if a.target else source
    return source, target, _map(a.map, source, target)


def cmd_model_extend(a) -> Report:
    source, _, mm = _map_args(a)
    f = _formula(a.formula, source.sig)
    try:
        image = modelling.extend(mm, f)
    except modelling.UnmappedSymbol as e:
        raise InputError(f"unmapped symbol {e}") from None
    return Report({"formula": syntax.to_text(f), "image": syntax.to_text(image)})


def cmd_model_verify(a) -> Report:
    _, target, mm = _map_args(a)
    pool = modelling.predicate_pool(target, a.pool_size) if a.pool_size else None
    try:
        rep = modelling.verify(mm, pool=pool, proof_bound=a.proof_bound)
    except modelling.UnmappedSymbol as e:
        raise InputError(f"unmapped symbol {e}") from None
    obligations = [{k: v for k, v in ob.items()} for ob in rep.obligations]
    return Report({"verdict": rep.verdict, "method": rep.method,
                   "counterexample": rep.counterexample, "obligations": obligations}, rep.valid)


def cmd_model_equiv(a) -> Report:
    source = _theory(a.source)
    t1 = _theory(a.target) if a.target else source
    t2 = _theory(a.target2) if a.target2 else t1
    m1, m2 = _map(a.map, source, t1), _map(a.map2, source, t2)
    try:
        rep = modelling.elementarily_equivalent(m1, m2, a.depth, collect=a.collect)
    except (modelling.UnmappedSymbol, structures.EvaluationError) as e:
        raise InputError(str(e)) from None
    rec = {"verdict": rep.label, "depth": rep.depth, "checked": rep.checked,
           "witness": rep.witness, "verdicts": list(rep.verdicts) if rep.verdicts else None}
    if a.collect:
        rec["differing"] = list(rep.differing)
    return Report(rec, rep.passed)


def cmd_model_restrict(a) -> Report:
    th = _theory(a.theory)
    u = _formula(a.by, th.sig, "restricting predicate")
    try:
        out = modelling.restrict(th, u)
    except (ValueError, modelling.PreconditionError) as e:
        raise InputError(str(e)) from None
    text = dump_theory(out)
    return Report({"theory": text}, True, text.rstrip("\n"))


def cmd_model_peano(a) -> Report:
    rep = modelling.peano_check(a.n, pool_size=a.pool_size)
    return Report({"n": rep.n, "pool_size": rep.pool_size, "longest_numeral": rep.longest_numeral,
                   "rows": rep.rows, "verdict": "PASS" if rep.passed else "FAIL"}, rep.passed)


def cmd_model_godel(a) -> Report:
    th = _theory(a.theory)
    try:
        rep = modelling.godel_embedding_check(th, a.bound)
    except modelling.PreconditionError as e:
        raise InputError(str(e)) from None
    return Report({"bound": rep.bound, "verdict": rep.verdict, "obligations": rep.obligations},
                  rep.verdict == "PASS")


def cmd_model_tarski(a) -> Report:
    th = _theory(a.theory)
    text = modelling.tarskian_image(th)
    return Report({"image": text}, True, text)


def cmd_diag_dn(a) -> Report:
    seq = _sequence(a.seq)
    d = diagonal.build_dn(seq, a.n)
    rows = [{"i": i, "P_i(i)": seq.value(i, i), "D(i)": d.value(i)} for i in range(a.n + 1)]
    ok = all(r["P_i(i)"] != r["D(i)"] for r in rows)
    return Report({"n": a.n, "D": d.text, "values": rows, "verdict": "PASS" if ok else "FAIL"}, ok)


def _check_report(res: diagonal.CheckResult) -> Report:
    rec = res.to_record()
    if res.failures:
        rec["failures"] = [list(f) for f in res.failures]
    return Report(rec, res.passed)


def cmd_diag_cauchy(a) -> Report:
    return _check_report(diagonal.cauchy_check(_sequence(a.seq), a.M, a.W))


def cmd_diag_limit(a) -> Report:
    seq = _sequence(a.seq)
    try:
        return _check_report(diagonal.limit_check(seq, a.limit, a.M))
    except (syntax.ParseError, ValueError) as e:
        raise InputError(f"limit predicate: {e}") from None


def cmd_diag_table(a) -> Report:
    return _check_report(diagonal.universal_check(_sequence(a.seq), a.M))


def cmd_diag_minor(a) -> Report:
    preds = _predicate_list(a.list)
    rows = diagonal.minor_theorem_check(preds)
    text = "\n".join(f"{r['witness']:>3}  P={r['P']!s:<5}  D={r['D']!s:<5}  {r['predicate']}"
                     for r in rows) or "(empty list)"
    return Report({"witnesses": rows}, True, text)


def cmd_shot_enum(a) -> Report:
    try:
        found = list(shots.enumerate_structures(a.k, cap=a.cap))
    except shots.CapExceeded as e:
        raise InputError(str(e)) from None
    rec = {"k": a.k, "count": len(found)}
    if a.show:
        rec["structures"] = [ms.bit_rows() for ms in found]
    return Report(rec)


def cmd_shot_exten(a) -> Report:
    try:
        pred = shots.SetPredicate.of(a.pred)
    except (syntax.ParseError, ValueError) as e:
        raise InputError(f"predicate: {e}") from None
    if a.rows is not None:
        ms = _structure(a.rows)
        return Report({"predicate": pred.text, "structure": ms.bit_rows(),
                       "witness": shots.exten(ms, pred)})
    per_k, first = [], None
    for k in range(a.k_max + 1):
        hits = 0
        for ms in shots.enumerate_structures(k, cap=max(a.k_max, shots.DEFAULT_CAP)):
            w = shots.exten(ms, pred)
            if w is not None:
                hits += 1
                if first is None:
                    first = {"structure": ms.bit_rows(), "witness": w}
        per_k.append({"k": k, "structures": shots.count_structures(k), "with_extension": hits})
    return Report({"predicate": pred.text, "k_max": a.k_max, "per_k": per_k, "first": first})


def cmd_shot_search(a) -> Report:
    shot = shots.shot_search(_pool(a.pool), a.k_max, a.profile)
    rec = shot.to_record()
    rec["realizable_assignments"] = shot.realizable
    return Report(rec, shot.audit_passed)


def cmd_shot_core(a) -> Report:
    if a.rows is not None:
        rep = shots.core_check(_structure(a.rows))
        return Report(rep.to_record(), rep.equation_holds)
    totals, pairs, ok, count = {}, 0, True, 0
    for ms in shots.enumerate_structures(a.k):
        rep = shots.core_check(ms)
        count += 1
        pairs += rep.equation_pairs
        ok &= rep.equation_holds
        for name, total in rep.total.items():
            totals[name] = totals.get(name, 0) + int(total)
    return Report({"k": a.k, "structures": count, "total_in": totals,
                   "equation_pairs": pairs, "equation_holds": ok}, ok)


def cmd_shot_fincomp(a) -> Report:
    if a.rows is not None:
        rep = shots.finite_comprehension_check(_structure(a.rows))
        return Report(rep.to_record(), rep.passed or not (rep.closed_under_s_union or rep.locally_closed))
    closed = local = closed_fail = local_fail = 0
    for k in range(a.k_max + 1):
        for ms in shots.enumerate_structures(k):
            rep = shots.finite_comprehension_check(ms)
            if rep.closed_under_s_union:
                closed += 1
                closed_fail += not rep.passed
            if rep.locally_closed:
                local += 1
                local_fail += not rep.passed
    ok = closed_fail == 0 and local_fail == 0
    return Report({"k_max": a.k_max, "closed_under_s_union": closed, "closed_failures": closed_fail,
                   "locally_closed": local, "local_failures": local_fail,
                   "verdict": "PASS" if ok else "FAIL"}, ok)


def cmd_paradox_concat(a) -> Report:
    lang = _language(a)
    try:
        d = paradox.derive_concat(lang)
    except paradox.NotCircular as e:
        return Report({"verdict": "not-circular", "reason": str(e)}, False)
    return _derivation_report(lang, d)


def cmd_paradox_eden(a) -> Report:
    lang = _language(a)
    try:
        d = paradox.derive_collapse(lang)
    except paradox.ConsistentLanguage as e:
        return Report({"verdict": "consistent", "reason": str(e)}, True, f"consistent: {e}")
    except paradox.NotCircular as e:
        return Report({"verdict": "not-circular", "reason": str(e)}, False)
    return _derivation_report(lang, d)


def cmd_paradox_general(a) -> Report:
    if a.preset not in paradox.PRESETS:
        raise InputError(f"unknown preset {a.preset!r}; choose from {sorted(paradox.PRESETS)}")
    lang = _language(a) if a.lang else paradox.preset_language(a.preset)
    try:
        d = paradox.derive_general_paradox(lang, a.preset)
    except paradox.MissingFunctor as e:
        return Report({"verdict": "no-paradox", "reason": str(e)}, False)
    rep = _derivation_report(lang, d)
    unifies = paradox.traces_unify(d, paradox.derive_general_paradox())
    rep.record["unifies_with_canonical"] = unifies
    rep.text += f"\nunifies with canonical: {unifies}"
    rep.ok = rep.ok and unifies
    return rep


def cmd_paradox_tamed(a) -> Report:
    lang = paradox.preset_language(a.preset)
    ext = {}
    for item in a.ext or ():
        name, eq, members = item.partition("=")
        if not eq:
            raise InputError(f"--ext expects NAME=a,b; got {item!r}")
        ext[name.strip()] = _names(members)
    try:
        verdict = paradox.tamed_eval(lang, _names(a.domain), a.sentence, ext)
    except ValueError as e:
        raise InputError(str(e)) from None
    return Report({"sentence": a.sentence, "domain": list(_names(a.domain)), "verdict": verdict})


# ------------------------------------------------------------------ parser

def _positive(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _natural(s: str) -> int:
    v = int(s)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="finitelogic", description="Finite-scale formal-theory workbench.")
    p.add_argument("--format", choices=("text", "json"), default="text")
    groups = p.add_subparsers(dest="group", required=True)

    def sub(group, name, fn: Callable, help_: str):
        q = group.add_parser(name, help=help_)
        # accepted after the subcommand too; SUPPRESS keeps the top-level value otherwise
        q.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
        q.set_defaults(func=fn)
        return q

    g = groups.add_parser("logic", help="formula syntax").add_subparsers(dest="cmd", required=True)
    q = sub(g, "parse", cmd_logic_parse, "parse and print a formula")
    q.add_argument("formula")
    q.add_argument("--theory")
    q = sub(g, "subst", cmd_logic_subst, "capture-avoiding substitution")
    q.add_argument("formula")
    q.add_argument("--var", required=True)
    q.add_argument("--term", required=True)
    q.add_argument("--theory")
    q = sub(g, "role", cmd_logic_role, "classify a string as term, formula or sentence")
    q.add_argument("text")
    q.add_argument("--theory")

    g = groups.add_parser("concat", help="concatenation theories").add_subparsers(dest="cmd", required=True)
    q = sub(g, "gen", cmd_concat_gen, "generate CONCAT_n as a theory file")
    q.add_argument("--letters", default="0,'")
    q.add_argument("--n", type=_positive, default=2)
    q.add_argument("--simplified", action="store_true")
    q.add_argument("--no-defined", action="store_true", help="omit LETTER, NUMERAL and c")
    q.add_argument("--cap", type=_positive, default=concat.DEFAULT_INSTANCE_CAP)
    q = sub(g, "decide", cmd_concat_decide, "evaluate a sentence in the theory's structure")
    q.add_argument("sentence")
    q.add_argument("--theory", default="@simplified")
    q.add_argument("--pool-size", type=_positive, help="predicate pool for second-order sentences")
    q = sub(g, "nested", cmd_concat_nested, "compare bounded sentences across CONCAT_m and CONCAT_n")
    q.add_argument("--letters", default="0,'")
    q.add_argument("--m", type=_positive)
    q.add_argument("--n", type=_positive)
    q.add_argument("--max-n", type=_positive, default=4)
    q.add_argument("--depth", type=_positive, default=2)
    q.add_argument("--unrelativized", action="store_true")
    q = sub(g, "inductive", cmd_concat_inductive, "evaluate an inductive string predicate")
    q.add_argument("predicate", choices=("numeral", "letter"))
    q.add_argument("string")
    q.add_argument("--letters", default="0,'")
    q.add_argument("--bound", type=_natural)
    q = sub(g, "prov", cmd_concat_prov, "bounded proof search")
    q.add_argument("sentence")
    q.add_argument("--theory", default="@toy")
    q.add_argument("--bound", type=_positive, default=20)

    g = groups.add_parser("model", help="modelling maps").add_subparsers(dest="cmd", required=True)
    for name, fn, help_ in (("extend", cmd_model_extend, "image of a formula under a map"),
                            ("verify", cmd_model_verify, "check a map is a modelling map")):
        q = sub(g, name, fn, help_)
        q.add_argument("--source", default="@concat2")
        q.add_argument("--target")
        q.add_argument("--map", default="@identity")
        if name == "extend":
            q.add_argument("formula")
        else:
            q.add_argument("--proof-bound", type=_positive, default=20)
            q.add_argument("--pool-size", type=_positive)
    q = sub(g, "equiv", cmd_model_equiv, "compare two maps on all small sentences")
    q.add_argument("--source", default="@concat2")
    q.add_argument("--target")
    q.add_argument("--target2")
    q.add_argument("--map", default="@identity")
    q.add_argument("--map2", default="@swap")
    q.add_argument("--depth", type=_positive, default=5)
    q.add_argument("--collect", action="store_true")
    q = sub(g, "restrict", cmd_model_restrict, "restrict a theory to a unary predicate")
    q.add_argument("--theory", default="@concat4")
    q.add_argument("--by", default="NUMERAL(x)")
    q = sub(g, "peano", cmd_model_peano, "map Peano's axioms into restricted CONCAT_n")
    q.add_argument("--n", type=_positive, default=4)
    q.add_argument("--pool-size", type=_positive, default=5)
    q = sub(g, "godel", cmd_model_godel, "bounded Goedel embedding of a decidable theory")
    q.add_argument("--theory", default="@toy")
    q.add_argument("--bound", type=_positive, default=50)
    q = sub(g, "tarski", cmd_model_tarski, "set-theoretic existential image of a theory")
    q.add_argument("--theory", default="@simplified")

    g = groups.add_parser("diag", help="diagonal predicate sequences").add_subparsers(dest="cmd", required=True)
    seq_help = "sequence file or @rule (@enumeration, @shift, @constant, '@T-table enumeration', ...)"
    q = sub(g, "dn", cmd_diag_dn, "build D_n and compare with the diagonal")
    q.add_argument("--seq", default="@enumeration", help=seq_help)
    q.add_argument("--n", type=_natural, default=8)
    q = sub(g, "cauchy", cmd_diag_cauchy, "Cauchy convergence at one bound")
    q.add_argument("--seq", default="@enumeration", help=seq_help)
    q.add_argument("--M", type=_natural, default=5)
    q.add_argument("--W", type=_positive, default=4)
    q = sub(g, "limit", cmd_diag_limit, "compare a candidate limit with the sequence")
    q.add_argument("--seq", default="@D-diagonal-of enumeration", help=seq_help)
    q.add_argument("--limit", required=True)
    q.add_argument("--M", type=_natural, default=8)
    q = sub(g, "table", cmd_diag_table, "universal table check")
    q.add_argument("--seq", default="@enumeration", help=seq_help)
    q.add_argument("--M", type=_natural, default=8)
    q = sub(g, "minor", cmd_diag_minor, "diagonal witness against every listed predicate")
    q.add_argument("--list", required=True)

    g = groups.add_parser("shot", help="membership structures and shots").add_subparsers(dest="cmd", required=True)
    q = sub(g, "enum", cmd_shot_enum, "enumerate extensional structures of size k")
    q.add_argument("--k", type=_natural, default=2)
    q.add_argument("--cap", type=_natural, default=shots.DEFAULT_CAP)
    q.add_argument("--show", action="store_true")
    q = sub(g, "exten", cmd_shot_exten, "look for a set with a predicate's extension")
    q.add_argument("--pred", required=True)
    q.add_argument("--rows", help="one structure as 0/1 rows, e.g. 01,10")
    q.add_argument("--k-max", type=_natural, default=4)
    q = sub(g, "search", cmd_shot_search, "maximal realizable EXTEN assignment")
    q.add_argument("--pool")
    q.add_argument("--k-max", type=_natural, default=3)
    q.add_argument("--profile", choices=(shots.UNCONSTRAINED, shots.BOOLEAN), default=shots.UNCONSTRAINED)
    q = sub(g, "core", cmd_shot_core, "totality of the core operations")
    q.add_argument("--rows")
    q.add_argument("--k", type=_natural, default=3)
    q = sub(g, "fincomp", cmd_shot_fincomp, "finite comprehension")
    q.add_argument("--rows")
    q.add_argument("--k-max", type=_natural, default=4)

    g = groups.add_parser("paradox", help="derivations in wild languages").add_subparsers(dest="cmd", required=True)
    for name, fn, help_ in (("concat", cmd_paradox_concat, "derive the concatenation functor"),
                            ("eden", cmd_paradox_eden, "collapse of two primitive terms")):
        q = sub(g, name, fn, help_)
        q.add_argument("--terms", default="a,b")
        q.add_argument("--lang", help="language file")
    q = sub(g, "general", cmd_paradox_general, "the diagonal paradox from truth and substitution")
    q.add_argument("--preset", default="canonical")
    q.add_argument("--lang", help="language file (display follows the preset)")
    q = sub(g, "tamed", cmd_paradox_tamed, "evaluate over an explicit finite domain")
    q.add_argument("sentence")
    q.add_argument("--domain", default="A,B")
    q.add_argument("--ext", action="append", help="NAME=a,b: members of a predicate object")
    q.add_argument("--preset", default="canonical", choices=sorted(paradox.PRESETS))
    return p


# ------------------------------------------------------------------ output

def _text(value, indent: int = 0) -> list:
    pad = "  " * indent
    if isinstance(value, dict):
        out = []
        for k in sorted(value):
            v = value[k]
            if isinstance(v, (dict, list)) and v:
                out.append(f"{pad}{k}:")
                out += _text(v, indent + 1)
            else:
                out.append(f"{pad}{k}: {_scalar(v)}")
        return out
    if isinstance(value, list):
        out = []
        for item in value:
            if isinstance(item, dict):
                lines = _text(item, indent + 1)
                out.append(pad + "- " + lines[0].lstrip())
                out += lines[1:]
            else:
                out.append(f"{pad}- {_scalar(item)}")
        return out
    return [pad + _scalar(value)]


def _scalar(v) -> str:
    if isinstance(v, (list, dict)):
        return json.dumps(v, sort_keys=True, ensure_ascii=False)
    return "none" if v is None else str(v)


def render(report: Report, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report.record, sort_keys=True, indent=2, ensure_ascii=False)
    return report.text if report.text is not None else "\n".join(_text(report.record))


def run(argv) -> tuple:
    """Parse ``argv`` and run it; returns (exit code, stdout text, stderr text)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0), "", ""
    try:
        report = args.func(args)
    except InputError as e:
        return 2, "", f"finitelogic: error: {e}"
    except RecursionError:
        return 2, "", "finitelogic: error: input too deeply nested"
    return (0 if report.ok else 1), render(report, args.format), ""


def main(argv=None) -> int:
    code, out, err = run(sys.argv[1:] if argv is None else argv)
    if out:
        print(out)
    if err:
        print(err, file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
