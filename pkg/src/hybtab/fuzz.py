"""Differential testing of the prover against exhaustive small-model search."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .bruteforce import find_countermodel_bruteforce
from .engine import Budget, EngineError, Mode, Proved, Refuted, Unknown, prove
from .extract import ExtractionError
from .semantics import evaluate
from .syntax import Formula, Vocab, print_formula, random_formula


@dataclass
class FuzzReport:
    mode: str
    count: int = 0
    proved: int = 0
    refuted: int = 0
    unknown: int = 0
    soundness_failures: list[str] = field(default_factory=list)
    refutation_failures: list[str] = field(default_factory=list)
    invariant_failures: list[str] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def failures(self) -> int:
        return len(self.soundness_failures) + len(self.refutation_failures) + len(self.invariant_failures)

    @property
    def unknown_rate(self) -> float:
        return self.unknown / self.count if self.count else 0.0

    def as_dict(self) -> dict:
        return {
            "mode": self.mode, "count": self.count, "proved": self.proved, "refuted": self.refuted,
            "unknown": self.unknown, "unknown_rate": round(self.unknown_rate, 4),
            "soundness_failures": self.soundness_failures,
            "refutation_failures": self.refutation_failures,
            "invariant_failures": self.invariant_failures,
            "seconds": round(self.seconds, 2),
        }

    def summary(self) -> str:
        return (
            f"{self.mode}: {self.count} formulas, {self.proved} proved, {self.refuted} refuted, "
            f"{self.unknown} unknown ({self.unknown_rate:.1%}), {self.failures} failures, {self.seconds:.1f}s"
        )


def formula_for(seed: int, k: int, max_size: int, vocab: Vocab) -> Formula:
    """The k-th formula of a fuzz run; independent of how the run is sharded."""
    return random_formula(seed * 1_000_003 + k, max_size, vocab)


def fuzz(
    mode: Mode | str = Mode.HPL, count: int = 100, seed: int = 0, max_size: int = 8,
    vocab: Vocab = Vocab(), budget: Budget = Budget(2000), oracle_bounds: tuple[int, int] = (2, 2),
    check_invariants: bool = False, derived_rules: bool = False,
) -> FuzzReport:
    mode = Mode(mode)
    rep = FuzzReport(mode.value)
    start = time.perf_counter()
    for k in range(count):
        f = formula_for(seed, k, max_size, vocab)
        text = print_formula(f)
        rep.count += 1
        try:
            v = prove(f, mode, budget, derived_rules)
        except (EngineError, ExtractionError) as e:
            rep.refutation_failures.append(f"{text}: {e}")
            continue
        if isinstance(v, Proved):
            rep.proved += 1
            cm = find_countermodel_bruteforce(f, oracle_bounds, mode.frame_class)
            if cm is not None:
                rep.soundness_failures.append(f"{text}: proved but falsified at {tuple(cm[1])}")
        elif isinstance(v, Refuted):
            rep.refuted += 1
            if evaluate(v.model, v.designated, f, strict=True):
                rep.refutation_failures.append(f"{text}: countermodel satisfies the formula")
        else:
            rep.unknown += 1
        if check_invariants and not isinstance(v, Unknown):
            from .checks import verdict_problems

            rep.invariant_failures += [f"{text}: {p}" for p in verdict_problems(v)]
    rep.seconds = time.perf_counter() - start
    return rep
