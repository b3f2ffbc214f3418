"""Direct check of the saturation conditions on a branch.

This deliberately does not reuse the engine's instance generator: each
condition is read off the branch contents, so agreement between the two is
a real cross-check.  Conditions are numbered i..xix; ``dec`` and
``dec-id`` are the extra conditions for the decreasing calculus and the ``d-*`` names cover the
optional derived rules for |, -> and [k].
"""

from __future__ import annotations

from dataclasses import dataclass

from .engine import Branch, BranchFormula, Mode, double, single1, single2
from .syntax import And, At, Box, Dia, Implies, Nom1, Nom2, Not, Or


@dataclass(frozen=True)
class Violation:
    condition: str
    witnesses: tuple[int, ...]
    missing: str

    def __str__(self) -> str:
        return f"condition {self.condition} at {list(self.witnesses)}: needs {self.missing}"


def is_saturated(b: Branch, mode: Mode | str) -> list[Violation]:
    mode = Mode(mode)
    dep = mode.dependent
    out: list[Violation] = []
    F = b.formulas

    def need(cond: str, wit: tuple[int, ...], *bfs: BranchFormula) -> None:
        missing = [bf for bf in bfs if bf not in b]
        if missing:
            out.append(Violation(cond, wit, ", ".join(map(str, missing))))

    def need_one(cond: str, wit: tuple[int, ...], *bfs: BranchFormula) -> None:
        if not any(bf in b for bf in bfs):
            out.append(Violation(cond, wit, " or ".join(map(str, bfs))))

    links1: dict = {}
    links2: dict = {}
    dia1: dict = {}
    dia2: dict = {}
    ddia2: dict = {}
    dia1_rev: dict = {}
    for k, bf in enumerate(F):
        body = bf.body
        if bf.is_double:
            if isinstance(body, Dia) and body.dim == 2 and isinstance(body.arg, Nom2):
                ddia2.setdefault((bf.i, bf.a), []).append((k, body.arg))
        elif bf.i is not None:
            if isinstance(body, Nom1):
                links1.setdefault(bf.i, []).append((k, body))
            elif isinstance(body, Dia) and body.dim == 1 and isinstance(body.arg, Nom1):
                dia1.setdefault(bf.i, []).append((k, body.arg))
                dia1_rev.setdefault(body.arg, []).append((k, bf.i))
        else:
            if isinstance(body, Nom2):
                links2.setdefault(bf.a, []).append((k, body))
            elif isinstance(body, Dia) and body.dim == 2 and isinstance(body.arg, Nom2):
                dia2.setdefault(bf.a, []).append((k, body.arg))

    def witnessed1(i, a, phi) -> bool:
        return any(double(j, a, phi) in b for _, j in dia1.get(i, ()))

    def witnessed2(i, a, phi) -> bool:
        if dep:
            return any(double(i, c, phi) in b for _, c in ddia2.get((i, a), ()))
        return any(double(i, c, phi) in b for _, c in dia2.get(a, ()))

    for k, bf in enumerate(F):
        i, a, body = bf.i, bf.a, bf.body
        w = (k,)
        neg = body.arg if isinstance(body, Not) else None
        if bf.is_double:
            if isinstance(neg, Not):
                need("i", w, double(i, a, neg.arg))
            elif isinstance(body, And):
                need("ii", w, double(i, a, body.left), double(i, a, body.right))
            elif isinstance(neg, And):
                need_one("iii", w, double(i, a, Not(neg.left)), double(i, a, Not(neg.right)))
            elif isinstance(body, Dia) and body.dim == 1:
                if not witnessed1(i, a, body.arg):
                    out.append(Violation("iv", w, f"a <1>-witness for {bf}"))
            elif isinstance(body, Dia):
                if not (dep and bf.accessibility) and not witnessed2(i, a, body.arg):
                    out.append(Violation("v", w, f"a <2>-witness for {bf}"))
            elif isinstance(neg, Dia) and neg.dim == 1:
                for l, j in dia1.get(i, ()):
                    need("vi", (k, l), double(j, a, Not(neg.arg)))
            elif isinstance(neg, Dia):
                partners = ddia2.get((i, a), ()) if dep else dia2.get(a, ())
                for l, c in partners:
                    need("vii", (k, l), double(i, c, Not(neg.arg)))
            elif isinstance(body, At):
                n = body.nominal
                if isinstance(n, Nom1):
                    need("viii", w, double(n, a, body.arg))
                else:
                    need("ix", w, double(i, n, body.arg))
            elif isinstance(neg, At):
                n = neg.nominal
                if isinstance(n, Nom1):
                    need("x", w, double(n, a, Not(neg.arg)))
                else:
                    need("xi", w, double(i, n, Not(neg.arg)))
            elif isinstance(body, Or):
                need_one("d-or", w, double(i, a, body.left), double(i, a, body.right))
            elif isinstance(neg, Or):
                need("d-negor", w, double(i, a, Not(neg.left)), double(i, a, Not(neg.right)))
            elif isinstance(body, Implies):
                need_one("d-imp", w, double(i, a, Not(body.left)), double(i, a, body.right))
            elif isinstance(neg, Implies):
                need("d-negimp", w, double(i, a, neg.left), double(i, a, Not(neg.right)))
            elif isinstance(body, Box) and body.dim == 1:
                for l, j in dia1.get(i, ()):
                    need("d-box1", (k, l), double(j, a, body.arg))
            elif isinstance(body, Box):
                for l, c in ddia2.get((i, a), ()) if dep else dia2.get(a, ()):
                    need("d-box2", (k, l), double(i, c, body.arg))
            elif isinstance(neg, Box):
                ok = witnessed1(i, a, Not(neg.arg)) if neg.dim == 1 else witnessed2(i, a, Not(neg.arg))
                if not ok:
                    out.append(Violation("d-negbox", w, f"a witness for {bf}"))
            if isinstance(body, Nom1) or isinstance(neg, Nom1):
                need("xii", w, single1(i, body))
            if isinstance(body, Nom2) or isinstance(neg, Nom2):
                need("xiii", w, single2(a, body))
            if not (dep and bf.accessibility):
                for l, j in links1.get(i, ()):
                    need("xvi", (k, l), double(j, a, body))
                for l, c in links2.get(a, ()):
                    need("xvii", (k, l), double(i, c, body))
            if mode is Mode.HDPL_DEC and bf.accessibility:
                for l, src in dia1_rev.get(i, ()):
                    need("dec", (l, k), double(src, a, body))
        elif i is not None:
            if isinstance(neg, Nom1):
                need("xiv", w, single1(neg, neg))
            if mode is Mode.HDPL_DEC and isinstance(body, Dia) and body.dim == 1 and isinstance(body.arg, Nom1):
                for l, c in links1.get(body.arg, ()):
                    need("dec-id", (k, l), single1(i, Dia(1, c)))
            if isinstance(body, Nom1) or isinstance(neg, Nom1):
                for l, j in links1.get(i, ()):
                    need("xviii", (k, l), single1(j, body))
        else:
            if isinstance(neg, Nom2):
                need("xv", w, single2(neg, neg))
            if isinstance(body, Nom2) or isinstance(neg, Nom2):
                for l, c in links2.get(a, ()):
                    need("xix", (k, l), single2(c, body))
    return out
