"""Real-time deterministic counter automata and their compilation into
homing vector automata.

A blind k-counter machine becomes a blind machine of dimension k+1 whose
vector is ``[1 + c_1, ..., 1 + c_k, 1]``.  A one-counter machine that accepts
on an empty counter becomes a dimension-2 machine whose zero tests are home
checks on ``[1 + c, 1]``.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from .linalg import Matrix, Vector
from .machine import HVA, Guard, HVAError, MachineFormatError, Transition, Word, check_word

STATE_ONLY = "state"
STATE_AND_ZERO = "state_and_zero"


class CompileError(HVAError, ValueError):
    pass


@dataclass(frozen=True)
class CounterTransition:
    source: str
    symbol: str
    target: str
    increments: tuple[int, ...]
    # one Guard.EQ (counter is zero) / Guard.NEQ per counter; None for blind machines
    zero_pattern: Optional[tuple[Guard, ...]] = None


@dataclass(frozen=True)
class CounterConfig:
    state: str
    counters: tuple[int, ...]


@dataclass(frozen=True)
class CounterMachine:
    name: str
    k: int
    blind: bool
    alphabet: tuple[str, ...]
    states: tuple[str, ...]
    initial_state: str
    accept_states: frozenset[str]
    transitions: tuple[CounterTransition, ...]
    acceptance: str = STATE_AND_ZERO
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "accept_states", frozenset(self.accept_states))
        object.__setattr__(self, "transitions", tuple(self.transitions))
        index = {}
        for t in self.transitions:
            key = (t.source, t.symbol) if self.blind else (t.source, t.symbol, t.zero_pattern)
            if key in index:
                raise MachineFormatError(f"{self.name}: two transitions for {key}")
            index[key] = t
        object.__setattr__(self, "_index", index)
        problems = self.problems()
        if problems:
            raise MachineFormatError(f"counter machine {self.name!r} is invalid", problems)

    def problems(self) -> list[str]:
        out = []
        states = set(self.states)
        if self.k < 1:
            out.append("need at least one counter")
        if self.initial_state not in states:
            out.append(f"initial state {self.initial_state!r} is not a state")
        for q in sorted(self.accept_states - states):
            out.append(f"accept state {q!r} is not a state")
        if self.acceptance not in (STATE_ONLY, STATE_AND_ZERO):
            out.append(f"unknown acceptance convention {self.acceptance!r}")
        if self.blind and self.acceptance != STATE_AND_ZERO:
            out.append("blind machines accept on state and zero counters")
        for n, t in enumerate(self.transitions):
            label = f"transition #{n} ({t.source} --{t.symbol}--> {t.target})"
            if t.source not in states or t.target not in states:
                out.append(f"{label}: unknown state")
            if t.symbol not in self.alphabet:
                out.append(f"{label}: symbol not in alphabet")
            if len(t.increments) != self.k or any(c not in (-1, 0, 1) for c in t.increments):
                out.append(f"{label}: increments must be {self.k} values in {{-1, 0, 1}}")
            if self.blind and t.zero_pattern is not None:
                out.append(f"{label}: blind machines cannot test counters")
            if not self.blind and (
                t.zero_pattern is None
                or len(t.zero_pattern) != self.k
                or any(g not in (Guard.EQ, Guard.NEQ) for g in t.zero_pattern)
            ):
                out.append(f"{label}: zero pattern must give eq/neq for each of {self.k} counters")
        return out

    def transition(self, config: CounterConfig, symbol: str) -> Optional[CounterTransition]:
        if self.blind:
            return self._index.get((config.state, symbol))
        pattern = tuple(Guard.EQ if c == 0 else Guard.NEQ for c in config.counters)
        return self._index.get((config.state, symbol, pattern))

    @property
    def initial_config(self) -> CounterConfig:
        return CounterConfig(self.initial_state, (0,) * self.k)

    def is_accepting(self, config: CounterConfig) -> bool:
        if config.state not in self.accept_states:
            return False
        return self.acceptance == STATE_ONLY or not any(config.counters)


def counter_trace(machine: CounterMachine, word: Word) -> list[CounterConfig]:
    """Configurations after each prefix of ``word``; stops early if the machine
    has no transition to take."""
    word = check_word(machine, word)
    configs = [machine.initial_config]
    for sym in word:
        cur = configs[-1]
        t = machine.transition(cur, sym)
        if t is None:
            break
        configs.append(
            CounterConfig(t.target, tuple(c + d for c, d in zip(cur.counters, t.increments)))
        )
    return configs


def run_counter(machine: CounterMachine, word: Word) -> bool:
    configs = counter_trace(machine, word)
    return len(configs) == len(word) + 1 and machine.is_accepting(configs[-1])


def increment_matrix(increments: Sequence[int]) -> Matrix:
    """Identity of size k+1 with the counter increments in the last row."""
    k = len(increments)
    rows = [[1 if i == j else 0 for j in range(k + 1)] for i in range(k + 1)]
    for i, c in enumerate(increments):
        rows[k][i] = c
    return Matrix(rows)


def compile_blind(machine: CounterMachine) -> HVA:
    if not machine.blind:
        raise CompileError(f"{machine.name}: compile_blind needs a blind counter machine")
    return HVA(
        name=f"{machine.name}_hva",
        dimension=machine.k + 1,
        alphabet=machine.alphabet,
        states=machine.states,
        initial_state=machine.initial_state,
        accept_states=machine.accept_states,
        initial_vector=Vector.ones(machine.k + 1),
        transitions=tuple(
            Transition(t.source, t.symbol, Guard.ANY, t.target, increment_matrix(t.increments))
            for t in machine.transitions
        ),
        deterministic=True,
        blind=True,
    )


def compile_one_counter(machine: CounterMachine) -> HVA:
    """Dimension-2 machine for a one-counter machine accepting on an empty counter.

    Zero tests become home checks, since ``[1 + c, 1]`` equals ``[1, 1]``
    exactly when the counter is zero.  With more than one counter the
    individual zero tests cannot be expressed, so that is rejected.
    """
    if machine.k != 1:
        raise CompileError(f"{machine.name}: one-counter compilation needs k = 1, got {machine.k}")
    if machine.acceptance != STATE_AND_ZERO:
        raise CompileError(f"{machine.name}: needs acceptance on state and empty counter")
    ts = []
    for t in machine.transitions:
        guard = Guard.ANY if machine.blind else t.zero_pattern[0]
        ts.append(Transition(t.source, t.symbol, guard, t.target, increment_matrix(t.increments)))
    return HVA(
        name=f"{machine.name}_hva",
        dimension=2,
        alphabet=machine.alphabet,
        states=machine.states,
        initial_state=machine.initial_state,
        accept_states=machine.accept_states,
        initial_vector=Vector.ones(2),
        transitions=tuple(ts),
        deterministic=True,
        blind=machine.blind,
    )


def random_blind_counter_machine(
    rng: random.Random,
    k: int,
    n_states: int = 4,
    alphabet: Sequence[str] = ("a", "b"),
    density: float = 0.85,
) -> CounterMachine:
    """A random blind machine; each (state, symbol) gets a transition with
    probability ``density``."""
    states = tuple(f"q{i}" for i in range(n_states))
    ts = []
    for q in states:
        for sym in alphabet:
            if rng.random() < density:
                ts.append(
                    CounterTransition(
                        q, sym, rng.choice(states), tuple(rng.choice((-1, 0, 1)) for _ in range(k))
                    )
                )
    accept = frozenset(q for q in states if rng.random() < 0.5) or frozenset({rng.choice(states)})
    return CounterMachine(
        name=f"random_k{k}",
        k=k,
        blind=True,
        alphabet=tuple(alphabet),
        states=states,
        initial_state=states[0],
        accept_states=accept,
        transitions=tuple(ts),
    )


# -- counter machine files --------------------------------------------------


def counter_machine_to_dict(machine: CounterMachine) -> dict:
    out = {
        "name": machine.name,
        "counters": machine.k,
        "blind": machine.blind,
        "acceptance": machine.acceptance,
        "alphabet": list(machine.alphabet),
        "states": list(machine.states),
        "initial_state": machine.initial_state,
        "accept_states": [q for q in machine.states if q in machine.accept_states],
        "transitions": [],
    }
    for t in machine.transitions:
        d = {"from": t.source, "symbol": t.symbol, "to": t.target, "increments": list(t.increments)}
        if t.zero_pattern is not None:
            d["zero_pattern"] = [g.value for g in t.zero_pattern]
        out["transitions"].append(d)
    return out


def counter_machine_from_dict(data: dict) -> CounterMachine:
    try:
        ts = []
        for t in data["transitions"]:
            zp = t.get("zero_pattern")
            if zp is not None:
                zp = tuple(Guard(g) for g in zp)
                if any(g is Guard.ANY for g in zp):
                    raise ValueError("zero_pattern entries must be eq or neq")
            ts.append(
                CounterTransition(
                    source=t["from"],
                    symbol=t["symbol"],
                    target=t["to"],
                    increments=tuple(int(c) for c in t["increments"]),
                    zero_pattern=zp,
                )
            )
        return CounterMachine(
            name=data.get("name", "counter_machine"),
            k=int(data["counters"]),
            blind=bool(data["blind"]),
            alphabet=tuple(data["alphabet"]),
            states=tuple(data["states"]),
            initial_state=data["initial_state"],
            accept_states=frozenset(data["accept_states"]),
            transitions=tuple(ts),
            acceptance=data.get("acceptance", STATE_AND_ZERO),
        )
    except MachineFormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise MachineFormatError(f"malformed counter machine definition: {exc!r}") from None


def load_counter_machine(path) -> CounterMachine:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise MachineFormatError(f"not valid JSON: {exc}") from None
    return counter_machine_from_dict(data)
