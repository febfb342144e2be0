"""Exhaustive desk-scale verification: enumeration, oracle and pairwise
comparison, entry-growth audits and DFA extraction for unary machines.

Words are enumerated in length-then-lexicographic order, where symbols are
ordered as they appear in the machine's ``alphabet`` tuple.  Simulation shares
work between words with a common prefix, so checking every word up to length
n costs one step per node of the prefix tree rather than n steps per word.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import ceil
from typing import Callable, Iterator, Optional, Sequence, Union

from .linalg import mul_raw
from .machine import (
    DEFAULT_MAX_CONFIGS,
    HVA,
    BudgetExceeded,
    HVAError,
    _advance,
    format_word,
    run,
)

Predicate = Callable[[Sequence[str]], bool]


class BoundViolation(HVAError, AssertionError):
    pass


class ExtractionError(HVAError, AssertionError):
    pass


def all_words(alphabet: Sequence[str], maxlen: int) -> Iterator[tuple[str, ...]]:
    for n in range(maxlen + 1):
        yield from product(alphabet, repeat=n)


def word_key(alphabet: Sequence[str]) -> Callable[[Sequence[str]], tuple]:
    order = {s: i for i, s in enumerate(alphabet)}
    return lambda w: (len(w), tuple(order[s] for s in w))


@dataclass(frozen=True)
class Disagreement:
    word: tuple[str, ...]
    left: bool
    right: bool


@dataclass
class CheckResult:
    """Outcome of comparing two acceptors on every word up to ``maxlen``.

    ``left`` is the machine under test; ``right`` is the oracle or the second
    machine.  ``accepted`` counts words the left side accepts.
    """

    maxlen: int
    checked: int = 0
    accepted: int = 0
    disagreement: Optional[Disagreement] = None
    left_name: str = "machine"
    right_name: str = "reference"

    @property
    def passed(self) -> bool:
        return self.disagreement is None

    def summary(self) -> str:
        if self.passed:
            return (
                f"pass: {self.checked} words up to length {self.maxlen}, "
                f"{self.accepted} accepted, no disagreement"
            )
        d = self.disagreement
        verdict = lambda b: "accept" if b else "reject"  # noqa: E731
        return (
            f"disagreement at {format_word(d.word)!r}: "
            f"{self.left_name} {verdict(d.left)}s, {self.right_name} {verdict(d.right)}s"
        )


@dataclass
class _Scan:
    checked: int = 0
    accepted: list = field(default_factory=list)
    n_accepted: int = 0
    disagreement: Optional[Disagreement] = None


def _scan(
    machines: tuple[HVA, ...],
    reference: Optional[Predicate],
    prefix: tuple[str, ...],
    maxlen: int,
    max_configs: int,
    collect: bool,
) -> _Scan:
    """Depth-first walk over every word that extends ``prefix`` up to ``maxlen``."""
    alphabet = machines[0].alphabet
    key = word_key(alphabet)
    out = _Scan()
    best = None

    def record(word, verdicts):
        nonlocal best
        out.checked += 1
        if verdicts[0]:
            out.n_accepted += 1
            if collect:
                out.accepted.append(word)
        if len(verdicts) > 1 and verdicts[0] != verdicts[1]:
            k = key(word)
            if best is None or k < best:
                best = k
                out.disagreement = Disagreement(word, verdicts[0], verdicts[1])

    def advance(m, cs, word):
        nxt = _advance(m, cs, word[-1])
        if len(nxt) > max_configs:
            raise BudgetExceeded(
                f"{m.name}: {len(nxt)} configurations exceed max_configs={max_configs} "
                f"on {format_word(word)!r}",
                word,
            )
        return nxt

    def visit(word, sets):
        verdicts = [any(m.is_accepting(c) for c in cs) for m, cs in zip(machines, sets)]
        if reference is not None:
            verdicts.append(bool(reference(word)))
        record(word, verdicts)
        room = maxlen - len(word)
        if room <= 0:
            return
        if not any(sets):
            # every extension is rejected by every machine
            if reference is None:
                out.checked += sum(len(alphabet) ** n for n in range(1, room + 1))
            else:
                dead = [False] * len(machines)
                for n in range(1, room + 1):
                    for ext in product(alphabet, repeat=n):
                        w = word + ext
                        record(w, dead + [bool(reference(w))])
            return
        for sym in alphabet:
            w = word + (sym,)
            visit(w, [advance(m, cs, w) for m, cs in zip(machines, sets)])

    start = []
    for m in machines:
        cs = {m.initial_config}
        for n in range(len(prefix)):
            cs = advance(m, cs, prefix[: n + 1])
        start.append(cs)
    if len(prefix) <= maxlen:
        visit(prefix, start)
    return out


def _scan_all(machines, reference, maxlen, max_configs, collect, jobs) -> _Scan:
    if jobs <= 1 or maxlen == 0:
        return _scan(machines, reference, (), maxlen, max_configs, collect)
    # the empty word on its own, then one subtree per first symbol
    tasks = [((), 0)] + [((s,), maxlen) for s in machines[0].alphabet]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [
            pool.submit(_scan, machines, reference, p, n, max_configs, collect) for p, n in tasks
        ]
        parts = [f.result() for f in futures]
    key = word_key(machines[0].alphabet)
    merged = _Scan()
    for part in parts:
        merged.checked += part.checked
        merged.n_accepted += part.n_accepted
        merged.accepted += part.accepted
        d = part.disagreement
        if d is not None and (merged.disagreement is None or key(d.word) < key(merged.disagreement.word)):
            merged.disagreement = d
    merged.accepted.sort(key=key)
    return merged


def enumerate_language(
    machine: HVA, maxlen: int, max_configs: int = DEFAULT_MAX_CONFIGS, jobs: int = 1
) -> list[tuple[str, ...]]:
    """Every accepted word of length at most ``maxlen``, in length-lex order."""
    if maxlen < 0:
        raise ValueError("maxlen must be >= 0")
    scan = _scan_all((machine,), None, maxlen, max_configs, True, jobs)
    return sorted(scan.accepted, key=word_key(machine.alphabet))


def cross_check(
    machine: HVA,
    reference: Predicate,
    maxlen: int,
    max_configs: int = DEFAULT_MAX_CONFIGS,
    jobs: int = 1,
) -> CheckResult:
    """Compare ``machine`` with a membership predicate on every word up to ``maxlen``."""
    if maxlen < 0:
        raise ValueError("maxlen must be >= 0")
    scan = _scan_all((machine,), reference, maxlen, max_configs, False, jobs)
    return CheckResult(maxlen, scan.checked, scan.n_accepted, scan.disagreement, machine.name)


def cross_check_words(
    machine: HVA,
    reference: Predicate,
    words,
    max_configs: int = DEFAULT_MAX_CONFIGS,
) -> CheckResult:
    """Like :func:`cross_check` but over an explicit collection of words."""
    key = word_key(machine.alphabet)
    result = CheckResult(max((len(w) for w in words), default=0), left_name=machine.name)
    for w in sorted((tuple(w) for w in words), key=key):
        try:
            got = run(machine, w, max_configs=max_configs).accepted
        except BudgetExceeded as exc:
            exc.word = w
            raise
        want = bool(reference(w))
        result.checked += 1
        result.accepted += got
        if got != want and result.disagreement is None:
            result.disagreement = Disagreement(w, got, want)
    return result


def equivalence(
    a: HVA, b: HVA, maxlen: int, max_configs: int = DEFAULT_MAX_CONFIGS, jobs: int = 1
) -> CheckResult:
    """Compare two machines over the same alphabet on every word up to ``maxlen``."""
    if set(a.alphabet) != set(b.alphabet):
        raise ValueError(f"alphabets differ: {a.alphabet} vs {b.alphabet}")
    if maxlen < 0:
        raise ValueError("maxlen must be >= 0")
    scan = _scan_all((a, b), None, maxlen, max_configs, False, jobs)
    return CheckResult(maxlen, scan.checked, scan.n_accepted, scan.disagreement, a.name, b.name)


# -- growth bounds ----------------------------------------------------------


def entry_bound(m: int, k: int, n: int) -> int:
    """Largest possible |entry| after n steps with entries (matrix and initial
    vector) in [-m, m] and dimension k: m^(n+1) k^n."""
    if m < 1 or k < 1 or n < 0:
        raise ValueError("need m, k >= 1 and n >= 0")
    return m ** (n + 1) * k**n


def config_count_bound(s: int, m: int, k: int, n: int) -> int:
    """Number of distinct configurations reachable after n steps is at most
    s (2 m^(n+1) k^n + 1)^k for an integer machine with s states."""
    if s < 1:
        raise ValueError("need s >= 1")
    return s * (2 * entry_bound(m, k, n) + 1) ** k


@dataclass(frozen=True)
class LevelReport:
    n: int
    max_entry: Fraction
    entry_bound: int
    configurations: int
    config_bound: int


@dataclass
class BoundReport:
    machine: str
    m: int
    k: int
    s: int
    premise: bool
    levels: list[LevelReport]

    @property
    def n(self) -> int:
        return self.levels[-1].n

    @property
    def max_entry(self) -> Fraction:
        return max(lv.max_entry for lv in self.levels)

    @property
    def bound(self) -> int:
        return self.levels[-1].entry_bound

    @property
    def config_bound(self) -> int:
        return self.levels[-1].config_bound

    def violations(self) -> list[LevelReport]:
        if not self.premise:
            return []
        return [lv for lv in self.levels if lv.max_entry > lv.entry_bound]

    def lines(self) -> list[str]:
        head = f"{self.machine}: m={self.m} k={self.k} s={self.s}"
        if not self.premise:
            head += " (initial vector outside [-m, m]; bound not asserted)"
        rows = [head]
        for lv in self.levels:
            rows.append(
                f"n={lv.n} max|entry|={lv.max_entry} bound={lv.entry_bound} "
                f"configs={lv.configurations}"
            )
        rows.append(f"violations: {len(self.violations())}")
        return rows


def machine_entry_scale(machine: HVA) -> int:
    """Smallest positive integer m with every matrix entry in [-m, m]."""
    biggest = max((t.matrix.max_abs() for t in machine.transitions), default=Fraction(1))
    return max(1, ceil(biggest))


def growth_audit(machine: HVA, maxlen: int, max_configs: int = 5_000_000) -> BoundReport:
    """Track every configuration reachable by some word of each length up to
    ``maxlen`` and compare the largest |entry| against :func:`entry_bound`.

    Raises :class:`BoundViolation` if an observed entry exceeds the bound while
    the premise holds (matrix and initial entries within [-m, m]); for integer
    machines the distinct configuration count is held to its bound as well.
    """
    m = machine_entry_scale(machine)
    k = machine.dimension
    s = len(machine.states)
    premise = machine.initial_vector.max_abs() <= m
    integral = machine.initial_vector.is_integral() and all(
        t.matrix.is_integral() for t in machine.transitions
    )
    level = {(machine.initial_state, machine.initial_vector.raw)}
    levels = []
    for n in range(maxlen + 1):
        if n:
            nxt = set()
            home = machine.initial_vector.raw
            for q, raw in level:
                at_home = raw == home
                for sym in machine.alphabet:
                    for t in machine.outgoing(q, sym):
                        if t.guard.admits(at_home):
                            nxt.add((t.target, mul_raw(raw[0], raw[1], t.matrix)))
            if len(nxt) > max_configs:
                raise BudgetExceeded(
                    f"{machine.name}: {len(nxt)} reachable configurations at length {n} "
                    f"exceed {max_configs}"
                )
            level = nxt
        biggest = max(
            (Fraction(max(abs(x) for x in nums), den) for _, (nums, den) in level),
            default=Fraction(0),
        )
        report = LevelReport(n, biggest, entry_bound(m, k, n), len(level), config_count_bound(s, m, k, n))
        levels.append(report)
        if premise and biggest > report.entry_bound:
            raise BoundViolation(
                f"{machine.name}: |entry| {biggest} after {n} steps exceeds {report.entry_bound}"
            )
        if premise and integral and len(level) > report.config_bound:
            raise BoundViolation(
                f"{machine.name}: {len(level)} configurations after {n} steps exceed "
                f"{report.config_bound}"
            )
    return BoundReport(machine.name, m, k, s, premise, levels)


# -- unary DFA extraction ---------------------------------------------------


@dataclass(frozen=True)
class DFA:
    """Unary DFA with states 0..n-1, initial state 0 and ``successor[q]``
    the state reached from q on ``a``."""

    successor: tuple[int, ...]
    accepting: frozenset[int]
    symbol: str = "a"
    initial: int = 0

    @property
    def states(self) -> range:
        return range(len(self.successor))

    def accepts_length(self, n: int) -> bool:
        q = self.initial
        for _ in range(n):
            q = self.successor[q]
        return q in self.accepting

    def accepts(self, word: Sequence[str]) -> bool:
        if any(s != self.symbol for s in word):
            return False
        return self.accepts_length(len(word))

    def to_dict(self) -> dict:
        return {
            "states": len(self.successor),
            "initial": self.initial,
            "accepting": sorted(self.accepting),
            "successor": list(self.successor),
            "symbol": self.symbol,
        }

    def to_text(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


@dataclass(frozen=True)
class Undetermined:
    """No configuration repeated within the step budget."""

    budget: int
    reason: str


def unary_dfa_extract(machine: HVA, budget: int) -> Union[DFA, Undetermined]:
    """Find a DFA for the language of a deterministic unary machine.

    Simulates a^0, a^1, ... a^budget and waits for two lengths ``i < j`` that
    reach the same configuration.  Two accepted lengths ending in the same
    accept state are the typical case, since acceptance pins the vector to
    the initial one; a run that dies counts as well (the empty configuration
    repeats).  Determinism makes the run periodic from ``i`` with period
    ``p = j - i``, so the DFA is a chain of ``i + 1`` states followed by
    ``p - 1`` loop states returning to state i.

    Returns :class:`Undetermined` when nothing repeats within the budget.
    The DFA is checked against direct simulation on every length up to
    ``j + 2 * budget``; a mismatch raises :class:`ExtractionError`.
    """
    if len(machine.alphabet) != 1:
        raise ValueError(f"{machine.name} is not unary: alphabet {machine.alphabet}")
    if not machine.deterministic:
        raise ValueError(f"{machine.name} is not deterministic")
    (sym,) = machine.alphabet

    def lengths(limit):
        """(configurations, accepted) for a^0 .. a^limit."""
        configs = frozenset({machine.initial_config})
        for n in range(limit + 1):
            if n:
                configs = frozenset(_advance(machine, configs, sym))
            yield n, configs, any(machine.is_accepting(c) for c in configs)

    first_seen: dict[frozenset, int] = {}
    accepted: list[bool] = []
    repeat = None
    for n, configs, ok in lengths(budget):
        if configs in first_seen:
            repeat = (first_seen[configs], n)
            break
        first_seen[configs] = n
        accepted.append(ok)
    if repeat is None:
        return Undetermined(
            budget,
            f"no configuration repeated within {budget} steps "
            "(the loop may be longer than the budget, or the vector may never return)",
        )
    i, j = repeat
    p = j - i
    dfa = DFA(
        successor=tuple(range(1, j)) + (i,),
        accepting=frozenset(q for q in range(j) if accepted[q]),
        symbol=sym,
    )
    q = dfa.initial
    for n, _, ok in lengths(j + 2 * budget):
        if (q in dfa.accepting) != ok:
            raise ExtractionError(
                f"{machine.name}: extracted DFA (period {p}) disagrees with the machine at length {n}"
            )
        q = dfa.successor[q]
    return dfa


__all__ = [
    "BoundReport",
    "BoundViolation",
    "CheckResult",
    "DFA",
    "Disagreement",
    "ExtractionError",
    "LevelReport",
    "Undetermined",
    "all_words",
    "config_count_bound",
    "cross_check",
    "cross_check_words",
    "entry_bound",
    "enumerate_language",
    "equivalence",
    "growth_audit",
    "machine_entry_scale",
    "unary_dfa_extract",
    "word_key",
]
