"""Command-line front end: batch session scripts.

A script declares one base field, optionally adjoins square roots and
extra transcendentals, binds diagonal forms, and then runs commands:

    field GF2(t1,t2)
    adjoin r1 = sqrt(t1)
    form p = <t1, t2, t1+t2>
    invariants p
    tower p
    check p q
    example46 p 1 1 0
    fuzz 50

Expressions use +, *, /, integer powers ^, parentheses, names and the
constants 0 and 1; # starts a comment. Scripts are parsed and validated
(declaration before use) before anything runs. Reports print as text or,
with --json, as one stable JSON document ("schema": "quasilin/1").

Exit codes: 0 clean, 1 a proven statement failed, 2 script or usage
error, 3 a resource budget refusal.
"""

import argparse
import json
import os
import sys
import time

from .errors import BudgetExceededError, QuasilinError, ScriptError
from .harness import (InstanceSpec, build_optimality_example, check_conjecture,
                      defect, fuzz_campaign)
from .qform import QForm, form_to_str
from .splitting import (DEFAULT_VAR_BUDGET, affine_function_field,
                        check_tower_invariants, extend_and_index,
                        knebusch_tower)
from .tower import FieldTower

EXIT_OK = 0
EXIT_STATEMENT_FAILED = 1
EXIT_SCRIPT_ERROR = 2
EXIT_BUDGET_REFUSED = 3


# ---------------------------------------------------------------------------
# Tokens and parsing
# ---------------------------------------------------------------------------

_SYMBOLS = ("(", ")", "<", ">", ",", "=", "+", "*", "/", "^")


class _Token:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind, text, line, col):
        self.kind = kind
        self.text = text
        self.line = line
        self.col = col


def _tokenize(text):
    tokens = []
    line, col = 1, 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < len(text) and text[i] != "\n":
                i += 1
            continue
        if ch in _SYMBOLS:
            tokens.append(_Token("sym", ch, line, col))
            i += 1
            col += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(_Token("int", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token("name", text[i:j], line, col))
            col += j - i
            i = j
            continue
        raise ScriptError("unexpected character %r" % ch, line, col)
    tokens.append(_Token("eof", "", line, col))
    return tokens


class SessionScript:
    """Parsed script: the statement list, already validated so that every
    referenced name is declared before use."""

    __slots__ = ("statements",)

    def __init__(self, statements):
        self.statements = statements


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, message, tok=None):
        tok = tok or self.peek()
        raise ScriptError(message, tok.line, tok.col)

    def expect(self, kind, text=None):
        tok = self.next()
        if tok.kind != kind or (text is not None and tok.text != text):
            want = text if text is not None else kind
            self.fail("expected %r, found %r" % (want, tok.text or "<eof>"), tok)
        return tok

    def parse(self):
        statements = []
        while self.peek().kind != "eof":
            statements.append(self.statement())
        script = SessionScript(statements)
        _validate(script)
        return script

    def statement(self):
        tok = self.next()
        if tok.kind != "name":
            self.fail("expected a statement keyword", tok)
        if tok.text == "field":
            self.expect("name", "GF2")
            self.expect("sym", "(")
            names = []
            if not (self.peek().kind == "sym" and self.peek().text == ")"):
                names.append(self.expect("name").text)
                while self.peek().text == ",":
                    self.next()
                    names.append(self.expect("name").text)
            self.expect("sym", ")")
            return ("field", tuple(names), tok)
        if tok.text == "adjoin":
            nxt = self.expect("name")
            if nxt.text == "var":
                name = self.expect("name").text
                return ("adjoin_var", name, tok)
            self.expect("sym", "=")
            self.expect("name", "sqrt")
            self.expect("sym", "(")
            expr = self.expr()
            self.expect("sym", ")")
            return ("adjoin_sqrt", nxt.text, expr, tok)
        if tok.text == "form":
            name = self.expect("name").text
            self.expect("sym", "=")
            self.expect("sym", "<")
            coeffs = [self.expr()]
            while self.peek().text == ",":
                self.next()
                coeffs.append(self.expr())
            self.expect("sym", ">")
            return ("form", name, tuple(coeffs), tok)
        if tok.text in ("invariants", "tower"):
            return (tok.text, self.expect("name").text, tok)
        if tok.text == "check":
            return ("check", self.expect("name").text,
                    self.expect("name").text, tok)
        if tok.text == "example46":
            name = self.expect("name").text
            a = int(self.expect("int").text)
            k = int(self.expect("int").text)
            l = int(self.expect("int").text)
            return ("example46", name, (a, k, l), tok)
        if tok.text == "fuzz":
            count = int(self.expect("int").text)
            return ("fuzz", count, tok)
        self.fail("unknown statement %r" % tok.text, tok)

    # expr := term (+ term)* ; term := factor ((*|/) factor)* ;
    # factor := primary (^ int)? ; primary := name | 0 | 1 | ( expr )
    def expr(self):
        node = self.term()
        while self.peek().text == "+":
            self.next()
            node = ("+", node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.peek().text in ("*", "/"):
            op = self.next().text
            node = (op, node, self.factor())
        return node

    def factor(self):
        node = self.primary()
        while self.peek().text == "^":
            self.next()
            exp = self.expect("int")
            node = ("^", node, int(exp.text))
        return node

    def primary(self):
        tok = self.next()
        if tok.kind == "int":
            if tok.text in ("0", "1"):
                return ("const", int(tok.text))
            self.fail("only the constants 0 and 1 exist over GF(2)", tok)
        if tok.kind == "name":
            return ("name", tok.text, tok)
        if tok.text == "(":
            node = self.expr()
            self.expect("sym", ")")
            return node
        self.fail("expected an expression", tok)


def _expr_names(node, out):
    if node[0] == "name":
        out.append((node[1], node[2]))
    elif node[0] in ("+", "*", "/"):
        _expr_names(node[1], out)
        _expr_names(node[2], out)
    elif node[0] == "^":
        _expr_names(node[1], out)


def _validate(script):
    field_seen = False
    elements = set()
    forms = set()

    def need_field(tok):
        if not field_seen:
            raise ScriptError("no field declared yet", tok.line, tok.col)

    def check_expr(expr):
        names = []
        _expr_names(expr, names)
        for name, tok in names:
            if name not in elements:
                raise ScriptError("use of undeclared name %r" % name,
                                  tok.line, tok.col)

    for st in script.statements:
        kind = st[0]
        if kind == "field":
            if field_seen:
                raise ScriptError("field already declared",
                                  st[-1].line, st[-1].col)
            field_seen = True
            elements.update(st[1])
        elif kind == "adjoin_var":
            need_field(st[-1])
            if st[1] in elements or st[1] in forms:
                raise ScriptError("name %r already in use" % st[1],
                                  st[-1].line, st[-1].col)
            elements.add(st[1])
        elif kind == "adjoin_sqrt":
            need_field(st[-1])
            if st[1] in elements or st[1] in forms:
                raise ScriptError("name %r already in use" % st[1],
                                  st[-1].line, st[-1].col)
            check_expr(st[2])
            elements.add(st[1])
        elif kind == "form":
            need_field(st[-1])
            if st[1] in elements:
                raise ScriptError("name %r already in use" % st[1],
                                  st[-1].line, st[-1].col)
            for expr in st[2]:
                check_expr(expr)
            forms.add(st[1])
        elif kind in ("invariants", "tower"):
            need_field(st[-1])
            if st[1] not in forms:
                raise ScriptError("unknown form %r" % st[1],
                                  st[-1].line, st[-1].col)
        elif kind == "check":
            need_field(st[-1])
            for name in (st[1], st[2]):
                if name not in forms:
                    raise ScriptError("unknown form %r" % name,
                                      st[-1].line, st[-1].col)
        elif kind == "example46":
            need_field(st[-1])
            if st[1] not in forms:
                raise ScriptError("unknown form %r" % st[1],
                                  st[-1].line, st[-1].col)


def parse(text):
    """Parse and validate a session script."""
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# Running
# ---------------------------------------------------------------------------

def _eval_expr(node, tower):
    kind = node[0]
    if kind == "const":
        return tower.one() if node[1] else tower.zero()
    if kind == "name":
        return tower.named(node[1])
    if kind == "+":
        return _eval_expr(node[1], tower) + _eval_expr(node[2], tower)
    if kind == "*":
        return _eval_expr(node[1], tower) * _eval_expr(node[2], tower)
    if kind == "/":
        return _eval_expr(node[1], tower) / _eval_expr(node[2], tower)
    if kind == "^":
        return _eval_expr(node[1], tower) ** node[2]
    raise ScriptError("bad expression node %r" % (kind,))


class SessionRunner:
    """Executes a validated script; collects one report dict per command
    and remembers whether any proven statement failed."""

    def __init__(self, var_budget=DEFAULT_VAR_BUDGET, seed=0, timeout_s=None):
        self.var_budget = var_budget
        self.seed = seed
        self.deadline = (time.monotonic() + timeout_s) if timeout_s else None
        self.tower = None
        self.forms = {}
        self.reports = []
        self.statement_failed = False

    def _check_deadline(self):
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise BudgetExceededError("run exceeded the time budget")

    def run(self, script):
        for st in script.statements:
            self._check_deadline()
            getattr(self, "_do_" + st[0])(st)
        return self.reports

    def _current_form(self, name):
        return self.forms[name].embed_into(self.tower)

    def _do_field(self, st):
        self.tower = FieldTower.rational(*st[1])

    def _do_adjoin_var(self, st):
        self.tower = self.tower.adjoin_transcendentals((st[1],))

    def _do_adjoin_sqrt(self, st):
        radicand = _eval_expr(st[2], self.tower)
        self.tower = self.tower.adjoin_sqrt(radicand, root_name=st[1])

    def _do_form(self, st):
        coeffs = [_eval_expr(e, self.tower) for e in st[2]]
        self.forms[st[1]] = QForm(self.tower, coeffs)

    def _do_invariants(self, st):
        q = self._current_form(st[1])
        an = q.anisotropic_part()
        report = {
            "command": "invariants",
            "form": st[1],
            "dim": q.dim,
            "i0": q.isotropy_index(),
            "d": defect(q),
            "anisotropic_part": form_to_str(an),
        }
        if an.dim:
            report["lndeg"] = an.lndeg()
            report["d0"] = an.divisibility_index()
            report["qpn"] = (an.is_quasi_pfister_neighbour()
                             if an.dim >= 1 else None)
        self.reports.append(report)

    def _do_tower(self, st):
        q = self._current_form(st[1])
        record = knebusch_tower(q, self.var_budget)
        inv = check_tower_invariants(record)
        if not inv.ok:
            self.statement_failed = True
        report = {"command": "tower", "form": st[1]}
        report.update(record.as_dict())
        report["invariants"] = inv.as_dict()
        self.reports.append(report)

    def _do_check(self, st):
        p = self._current_form(st[1])
        q = self._current_form(st[2])
        conj = check_conjecture(p, q, self.var_budget)
        if conj.proven_failures:
            self.statement_failed = True
        report = {"command": "check", "p": st[1], "q": st[2]}
        report.update(conj.as_dict())
        self.reports.append(report)

    def _do_example46(self, st):
        p = self._current_form(st[1])
        a, k, l = st[2]
        ex = build_optimality_example(p, a, k, l, self.var_budget)
        step = affine_function_field(ex.p, self.var_budget)
        measured = extend_and_index(ex.q, step)
        ok = (measured.isotropy_index == ex.predicted_i0
              and measured.defect == ex.predicted_k)
        if not ok:
            self.statement_failed = True
        self.reports.append({
            "command": "example46", "p": st[1],
            "a": a, "k": k, "l": l, "eps": ex.eps,
            "dim_q": ex.q.dim,
            "q": form_to_str(ex.q),
            "predicted_i0": ex.predicted_i0,
            "measured_i0": measured.isotropy_index,
            "predicted_k": ex.predicted_k,
            "measured_k": measured.defect,
            "verdict": "pass" if ok else "fail",
        })

    def _do_fuzz(self, st):
        timeout = None
        if self.deadline is not None:
            timeout = max(0.0, self.deadline - time.monotonic())
        spec = InstanceSpec(seed=self.seed, count=st[1],
                            var_budget=self.var_budget, timeout_s=timeout)
        campaign = fuzz_campaign(spec)
        if campaign.failed_statements:
            self.statement_failed = True
        report = {"command": "fuzz"}
        report.update(campaign.as_dict())
        self.reports.append(report)


# ---------------------------------------------------------------------------
# Report printing
# ---------------------------------------------------------------------------

def _print_human(reports, out):
    for report in reports:
        cmd = report["command"]
        out.write("== %s ==\n" % cmd)
        for key in sorted(report):
            if key == "command":
                continue
            value = report[key]
            if isinstance(value, (dict, list)):
                value = json.dumps(value, sort_keys=True)
            out.write("  %s: %s\n" % (key, value))
    out.flush()


def run_text(text, var_budget=DEFAULT_VAR_BUDGET, seed=0, timeout_s=None):
    """Parse and execute a script; returns (reports, statement_failed)."""
    script = parse(text)
    runner = SessionRunner(var_budget=var_budget, seed=seed,
                           timeout_s=timeout_s)
    runner.run(script)
    return runner.reports, runner.statement_failed


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="quasilin",
        description="Exact invariants of quasilinear quadratic forms over "
                    "GF(2) function fields: batch script runner.")
    parser.add_argument("script", nargs="?", default="-",
                        help="script file, or - for stdin (default)")
    parser.add_argument("--json", action="store_true",
                        help="emit one JSON document instead of text")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for fuzz campaigns (default 0)")
    parser.add_argument("--var-budget", type=int,
                        default=int(os.environ.get("QUASILIN_VAR_BUDGET",
                                                   DEFAULT_VAR_BUDGET)),
                        help="max total transcendentals per tower "
                             "(default 12; env QUASILIN_VAR_BUDGET)")
    parser.add_argument("--timeout-s", type=float, default=None,
                        help="soft wall-clock budget for the whole run")
    args = parser.parse_args(argv)

    try:
        if args.script == "-":
            text = sys.stdin.read()
        else:
            with open(args.script, "r", encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_SCRIPT_ERROR

    try:
        reports, failed = run_text(text, var_budget=args.var_budget,
                                   seed=args.seed, timeout_s=args.timeout_s)
    except ScriptError as exc:
        print("script error: %s" % exc, file=sys.stderr)
        return EXIT_SCRIPT_ERROR
    except BudgetExceededError as exc:
        print("resource budget refused: %s" % exc, file=sys.stderr)
        return EXIT_BUDGET_REFUSED
    except QuasilinError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_SCRIPT_ERROR

    if args.json:
        doc = {"schema": "quasilin/1", "reports": reports}
        print(json.dumps(doc, sort_keys=True, indent=2))
    else:
        _print_human(reports, sys.stdout)
    return EXIT_STATEMENT_FAILED if failed else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
