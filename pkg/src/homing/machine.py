"""Homing vector automata and their real-time run semantics.

A machine carries a rational row vector that every transition multiplies on
the right by a matrix.  A non-blind machine may branch on whether the vector
currently equals the initial vector; a blind one may not.  A run accepts when
it ends in an accept state with the vector back at its initial value.

Words are sequences of symbols.  A plain ``str`` works as a word whenever every
symbol is a single character; multi-character symbols (``a_1``, ``#``, ...)
need a tuple or list.
"""

from __future__ import annotations

import enum
import json
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence

from .linalg import Matrix, Vector, format_rational, vec_mat_mul

DEFAULT_MAX_CONFIGS = 100_000

Word = Sequence[str]


class HVAError(Exception):
    """Base class for errors raised by this package."""


class MachineFormatError(HVAError, ValueError):
    def __init__(self, message: str, violations: Sequence[str] = ()):
        super().__init__(message)
        self.violations = list(violations)


class BudgetExceeded(HVAError):
    """A run needed more configurations or steps than its budget allows."""

    def __init__(self, message: str, word: Optional[Word] = None):
        super().__init__(message)
        self.word = word


class UnknownSymbol(HVAError, ValueError):
    pass


class Guard(enum.Enum):
    EQ = "eq"
    NEQ = "neq"
    ANY = "any"

    def admits(self, at_home: bool) -> bool:
        if self is Guard.ANY:
            return True
        return at_home == (self is Guard.EQ)


@dataclass(frozen=True)
class Transition:
    source: str
    symbol: str
    guard: Guard
    target: str
    matrix: Matrix


@dataclass(frozen=True)
class Configuration:
    state: str
    vector: Vector

    def __str__(self) -> str:
        return f"{self.state}: {self.vector}"


@dataclass(frozen=True)
class HVA:
    """A homing vector automaton.

    ``transitions`` may be partial; a (state, symbol, guard) with no entry
    simply kills that branch of the computation.
    """

    name: str
    dimension: int
    alphabet: tuple[str, ...]
    states: tuple[str, ...]
    initial_state: str
    accept_states: frozenset[str]
    initial_vector: Vector
    transitions: tuple[Transition, ...]
    deterministic: bool = True
    blind: bool = False
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "accept_states", frozenset(self.accept_states))
        object.__setattr__(self, "transitions", tuple(self.transitions))
        index = defaultdict(list)
        for t in self.transitions:
            index[t.source, t.symbol].append(t)
        object.__setattr__(self, "_index", {key: tuple(ts) for key, ts in index.items()})

    def outgoing(self, state: str, symbol: str) -> tuple[Transition, ...]:
        return self._index.get((state, symbol), ())

    @property
    def initial_config(self) -> Configuration:
        return Configuration(self.initial_state, self.initial_vector)

    def is_accepting(self, config: Configuration) -> bool:
        return config.state in self.accept_states and config.vector == self.initial_vector

    def matrices(self) -> list[Matrix]:
        return [t.matrix for t in self.transitions]


@dataclass(frozen=True)
class RunResult:
    accepted: bool
    final_configs: frozenset[Configuration]
    steps: int
    max_configs: int
    max_entry: Fraction


def validate(machine: HVA) -> list[str]:
    """Return every violated structural invariant, as human-readable lines."""
    problems = []
    k = machine.dimension
    states = set(machine.states)
    alphabet = set(machine.alphabet)
    if k < 1:
        problems.append(f"dimension must be >= 1, got {k}")
    if len(states) != len(machine.states):
        problems.append("duplicate state names")
    if len(alphabet) != len(machine.alphabet):
        problems.append("duplicate alphabet symbols")
    for sym in machine.alphabet:
        if not sym:
            problems.append("empty alphabet symbol")
    if machine.initial_state not in states:
        problems.append(f"initial state {machine.initial_state!r} is not a state")
    for q in sorted(machine.accept_states - states):
        problems.append(f"accept state {q!r} is not a state")
    if len(machine.initial_vector) != k:
        problems.append(f"initial vector has dimension {len(machine.initial_vector)}, expected {k}")

    for n, t in enumerate(machine.transitions):
        label = f"transition #{n} ({t.source} --{t.symbol}/{t.guard.value}--> {t.target})"
        if t.source not in states:
            problems.append(f"{label}: unknown source state")
        if t.target not in states:
            problems.append(f"{label}: unknown target state")
        if t.symbol not in alphabet:
            problems.append(f"{label}: symbol not in alphabet")
        if t.matrix.dim != k:
            problems.append(f"{label}: matrix is {t.matrix.dim}x{t.matrix.dim}, expected {k}x{k}")
        if machine.blind and t.guard is not Guard.ANY:
            problems.append(f"{label}: blind machine uses guard {t.guard.value!r}")

    if machine.deterministic:
        groups = defaultdict(list)
        for t in machine.transitions:
            groups[t.source, t.symbol].append(t.guard)
        for (q, sym), guards in sorted(groups.items()):
            for at_home in (True, False):
                live = [g for g in guards if g.admits(at_home)]
                if len(live) > 1:
                    omega = "=" if at_home else "!="
                    problems.append(
                        f"determinism: state {q!r} on {sym!r} has {len(live)} transitions "
                        f"applicable when the vector is {omega} the initial vector"
                    )
                    break
    return problems


def check_word(machine: HVA, word: Word) -> tuple[str, ...]:
    word = tuple(word)
    alphabet = set(machine.alphabet)
    for sym in word:
        if sym not in alphabet:
            raise UnknownSymbol(f"symbol {sym!r} is not in the alphabet of {machine.name}")
    return word


def step(machine: HVA, config: Configuration, symbol: str) -> frozenset[Configuration]:
    """All successors of ``config`` on ``symbol``; empty when the branch dies.

    The guard looks at the vector before this step's matrix is applied.
    """
    at_home = config.vector == machine.initial_vector
    return frozenset(
        Configuration(t.target, vec_mat_mul(config.vector, t.matrix))
        for t in machine.outgoing(config.state, symbol)
        if t.guard.admits(at_home)
    )


def _advance(machine: HVA, configs: Iterable[Configuration], symbol: str) -> set[Configuration]:
    home = machine.initial_vector
    out = set()
    for c in configs:
        at_home = c.vector == home
        for t in machine.outgoing(c.state, symbol):
            if t.guard.admits(at_home):
                out.add(Configuration(t.target, vec_mat_mul(c.vector, t.matrix)))
    return out


def run(
    machine: HVA,
    word: Word,
    max_configs: int = DEFAULT_MAX_CONFIGS,
    max_steps: Optional[int] = None,
    dedup: bool = True,
) -> RunResult:
    """Run ``machine`` on ``word`` in real time, one step per symbol.

    Nondeterminism is simulated breadth-first over sets of configurations.
    ``dedup=False`` keeps duplicate configurations (one per computation path);
    it exists so deduplication itself can be cross-checked.

    Raises :class:`BudgetExceeded` when a configuration set grows past
    ``max_configs`` or the word is longer than ``max_steps``.
    """
    word = check_word(machine, word)
    if max_steps is not None and len(word) > max_steps:
        raise BudgetExceeded(f"input of length {len(word)} exceeds max_steps={max_steps}", word)
    configs: Any = [machine.initial_config]
    biggest = 1
    max_entry = machine.initial_vector.max_abs()
    for sym in word:
        if dedup:
            configs = _advance(machine, configs, sym)
        else:
            configs = [nxt for c in configs for nxt in step(machine, c, sym)]
        if len(configs) > max_configs:
            raise BudgetExceeded(
                f"{len(configs)} configurations exceed max_configs={max_configs}", word
            )
        biggest = max(biggest, len(configs))
        for c in configs:
            e = c.vector.max_abs()
            if e > max_entry:
                max_entry = e
        if not configs:
            break
    finals = frozenset(configs)
    return RunResult(
        accepted=any(machine.is_accepting(c) for c in finals),
        final_configs=finals,
        steps=len(word),
        max_configs=biggest,
        max_entry=max_entry,
    )


def accepts(machine: HVA, word: Word, max_configs: int = DEFAULT_MAX_CONFIGS) -> bool:
    return run(machine, word, max_configs=max_configs).accepted


def trace(
    machine: HVA, word: Word, max_configs: int = DEFAULT_MAX_CONFIGS
) -> list[frozenset[Configuration]]:
    """Configuration set after each prefix of ``word``, starting with the empty prefix."""
    word = check_word(machine, word)
    sets = [frozenset([machine.initial_config])]
    for sym in word:
        nxt = frozenset(_advance(machine, sets[-1], sym))
        if len(nxt) > max_configs:
            raise BudgetExceeded(f"{len(nxt)} configurations exceed max_configs={max_configs}", word)
        sets.append(nxt)
    return sets


# -- machine definition files ----------------------------------------------


def machine_to_dict(machine: HVA) -> dict:
    return {
        "name": machine.name,
        "dimension": machine.dimension,
        "alphabet": list(machine.alphabet),
        "states": list(machine.states),
        "initial_state": machine.initial_state,
        "accept_states": [q for q in machine.states if q in machine.accept_states],
        "deterministic": machine.deterministic,
        "blind": machine.blind,
        "initial_vector": [format_rational(x) for x in machine.initial_vector],
        "transitions": [
            {
                "from": t.source,
                "symbol": t.symbol,
                "guard": t.guard.value,
                "to": t.target,
                "matrix": t.matrix.to_text(),
            }
            for t in machine.transitions
        ],
    }


def _require(data: dict, key: str, kind: type, where: str = "machine"):
    if key not in data:
        raise MachineFormatError(f"{where}: missing field {key!r}")
    value = data[key]
    if kind is int and isinstance(value, bool) or not isinstance(value, kind):
        raise MachineFormatError(f"{where}: field {key!r} must be {kind.__name__}")
    return value


def machine_from_dict(data: dict) -> HVA:
    """Build and validate a machine from its decoded JSON form.

    Raises :class:`MachineFormatError` on malformed data or any violation
    reported by :func:`validate`.
    """
    if not isinstance(data, dict):
        raise MachineFormatError("machine definition must be a JSON object")
    try:
        transitions = []
        for n, t in enumerate(_require(data, "transitions", list)):
            where = f"transition #{n}"
            if not isinstance(t, dict):
                raise MachineFormatError(f"{where}: must be an object")
            try:
                guard = Guard(_require(t, "guard", str, where))
            except ValueError:
                raise MachineFormatError(f"{where}: guard must be one of eq, neq, any") from None
            transitions.append(
                Transition(
                    source=_require(t, "from", str, where),
                    symbol=_require(t, "symbol", str, where),
                    guard=guard,
                    target=_require(t, "to", str, where),
                    matrix=Matrix(_require(t, "matrix", list, where)),
                )
            )
        machine = HVA(
            name=_require(data, "name", str),
            dimension=_require(data, "dimension", int),
            alphabet=tuple(_require(data, "alphabet", list)),
            states=tuple(_require(data, "states", list)),
            initial_state=_require(data, "initial_state", str),
            accept_states=frozenset(_require(data, "accept_states", list)),
            initial_vector=Vector(_require(data, "initial_vector", list)),
            transitions=tuple(transitions),
            deterministic=_require(data, "deterministic", bool),
            blind=_require(data, "blind", bool),
        )
    except MachineFormatError:
        raise
    except (ValueError, TypeError) as exc:
        raise MachineFormatError(f"malformed machine definition: {exc}") from None
    for sym in machine.alphabet + machine.states:
        if not isinstance(sym, str):
            raise MachineFormatError(f"states and symbols must be strings, got {sym!r}")
    problems = validate(machine)
    if problems:
        raise MachineFormatError(f"machine {machine.name!r} is invalid", problems)
    return machine


def dumps_machine(machine: HVA) -> str:
    return json.dumps(machine_to_dict(machine), indent=2)


def loads_machine(text: str) -> HVA:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MachineFormatError(f"not valid JSON: {exc}") from None
    return machine_from_dict(data)


def load_machine(path) -> HVA:
    return loads_machine(Path(path).read_text())


def format_word(word: Word) -> str:
    """Render a word for display: plain concatenation when every symbol is a
    single character, comma-separated otherwise; the empty word is ``ε``."""
    word = tuple(word)
    if not word:
        return "ε"
    if all(len(s) == 1 for s in word):
        return "".join(word)
    return ",".join(word)


def parse_word(text: str, csv: bool = False) -> tuple[str, ...]:
    if text in ("", "ε"):
        return ()
    if csv:
        return tuple(s.strip() for s in text.split(",") if s.strip())
    return tuple(text)


__all__ = [
    "BudgetExceeded",
    "Configuration",
    "DEFAULT_MAX_CONFIGS",
    "Guard",
    "HVA",
    "HVAError",
    "MachineFormatError",
    "RunResult",
    "Transition",
    "UnknownSymbol",
    "accepts",
    "check_word",
    "dumps_machine",
    "format_word",
    "load_machine",
    "loads_machine",
    "machine_from_dict",
    "machine_to_dict",
    "parse_word",
    "run",
    "step",
    "trace",
    "validate",
]
