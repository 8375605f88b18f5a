"""Probabilistic finite-state machines that score strings per row type.

Each machine defines a probability distribution over finite strings: at a
state the run either stops (``stop`` probability) or takes a transition,
emitting one character drawn uniformly from the transition's character class.
``log_prob`` sums over all accepting paths with the forward algorithm, in
log space throughout, so entries up to tens of thousands of characters never
underflow.

Machines are not written out state by state. They are compiled from small
weighted-grammar fragments (literal, class, sequence, weighted alternation,
option, geometric repeat) via a Thompson-style construction whose epsilon
edges are eliminated at build time. By construction every state satisfies
stop + sum(transition probabilities) == 1.

The six built-in machines (integer, float, date, string, missing, anomaly)
take all numeric parameters from :class:`colcat.config.MachineParams`.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from typing import Iterable

from .config import DEFAULT_MACHINE_PARAMS, MISSING_VOCABULARY, MachineParams

LOG_ZERO = float("-inf")

# The declared alphabet: printable ASCII. Open classes ("any") use its size as
# the per-character mass divisor but still accept characters outside it, so
# log_prob stays a total function over arbitrary Unicode input.
PRINTABLE = "".join(chr(c) for c in range(0x20, 0x7F))


def log_add(a: float, b: float) -> float:
    """log(exp(a) + exp(b)) without leaving log space."""
    if a == LOG_ZERO:
        return b
    if b == LOG_ZERO:
        return a
    if a < b:
        a, b = b, a
    return a + math.log1p(math.exp(b - a))


def log_sum(values: Iterable[float]) -> float:
    total = LOG_ZERO
    for v in values:
        total = log_add(total, v)
    return total


@dataclass(frozen=True)
class CharClass:
    """A named set of characters; ``chars is None`` means "any character".

    ``size`` is the divisor used to split the class transition probability
    uniformly per character. For open classes it is the declared alphabet
    size, and membership is total.
    """

    name: str
    chars: frozenset[str] | None
    size: int

    def contains(self, ch: str) -> bool:
        return self.chars is None or ch in self.chars

    def sample(self, rng: random.Random) -> str:
        pool = PRINTABLE if self.chars is None else "".join(sorted(self.chars))
        return pool[rng.randrange(len(pool))]


def _cls(name: str, chars: str) -> CharClass:
    cs = frozenset(chars)
    return CharClass(name, cs, len(cs))


DIGIT = _cls("digit", "0123456789")
SIGN = _cls("sign", "+-−")
SPACE = _cls("space", " ")
ANY = CharClass("any", None, len(PRINTABLE))


@dataclass
class TypeMachine:
    """A compiled recognizer. State 0 is the unique initial state.

    ``transitions[s]`` holds ``(char_class, prob, dst)`` rows; ``stop[s]`` is
    the termination probability at ``s``. Instances are immutable after
    construction; ``log_prob`` memoizes per entry and is safe to call from
    several threads (worst case a value is computed twice).
    """

    label: str
    state_names: list[str]
    transitions: list[list[tuple[CharClass, float, int]]]
    stop: list[float]
    _memo: dict[str, float] = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        # Pre-split the per-character log mass once.
        self._log_char: list[list[tuple[CharClass, float, int]]] = [
            [(cc, math.log(p) - math.log(cc.size), dst) for cc, p, dst in rows]
            for rows in self.transitions
        ]
        self._log_stop = [math.log(s) if s > 0.0 else LOG_ZERO for s in self.stop]

    @property
    def n_states(self) -> int:
        return len(self.state_names)

    def log_prob(self, entry: str) -> float:
        """Log-probability of ``entry`` under the machine; -inf if rejected."""
        hit = self._memo.get(entry)
        if hit is not None:
            return hit
        alpha = {0: 0.0}
        for ch in entry:
            nxt: dict[int, float] = {}
            for s, lp in alpha.items():
                for cc, lpc, dst in self._log_char[s]:
                    if cc.contains(ch):
                        v = lp + lpc
                        prev = nxt.get(dst)
                        nxt[dst] = v if prev is None else log_add(prev, v)
            if not nxt:
                self._memo[entry] = LOG_ZERO
                return LOG_ZERO
            alpha = nxt
        total = log_sum(
            lp + self._log_stop[s] for s, lp in alpha.items() if self.stop[s] > 0.0
        )
        self._memo[entry] = total
        return total

    def sample(self, rng: random.Random) -> str:
        """Draw one string from the machine's distribution."""
        out: list[str] = []
        state = 0
        while True:
            r = rng.random()
            if r < self.stop[state]:
                return "".join(out)
            r -= self.stop[state]
            rows = self.transitions[state]
            taken = rows[-1]
            for row in rows:
                if r < row[1]:
                    taken = row
                    break
                r -= row[1]
            cc, _, dst = taken
            out.append(cc.sample(rng))
            state = dst

    def to_json(self) -> str:
        classes: dict[str, dict] = {}
        trans_rows = []
        for s, rows in enumerate(self.transitions):
            for cc, p, dst in rows:
                classes[cc.name] = {
                    "chars": None if cc.chars is None else "".join(sorted(cc.chars)),
                    "size": cc.size,
                }
                trans_rows.append(
                    [self.state_names[s], cc.name, self.state_names[dst], p]
                )
        doc = {
            "label": self.label,
            "states": list(self.state_names),
            "transitions": trans_rows,
            "stop": [
                [self.state_names[s], p] for s, p in enumerate(self.stop) if p > 0.0
            ],
            "classes": classes,
        }
        return json.dumps(doc, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "TypeMachine":
        doc = json.loads(text)
        names = list(doc["states"])
        index = {n: i for i, n in enumerate(names)}
        classes = {
            name: CharClass(
                name,
                None if spec["chars"] is None else frozenset(spec["chars"]),
                spec["size"],
            )
            for name, spec in doc["classes"].items()
        }
        transitions: list[list[tuple[CharClass, float, int]]] = [[] for _ in names]
        for src, cname, dst, p in doc["transitions"]:
            transitions[index[src]].append((classes[cname], p, index[dst]))
        stop = [0.0] * len(names)
        for sname, p in doc["stop"]:
            stop[index[sname]] = p
        return cls(doc["label"], names, transitions, stop)

    def check_normalized(self, tol: float = 1e-9) -> None:
        """Raise if any state's stop + outgoing transition mass is not 1."""
        for s in range(self.n_states):
            total = self.stop[s] + sum(p for _, p, _ in self.transitions[s])
            if abs(total - 1.0) > tol:
                raise ValueError(
                    f"{self.label}: state {self.state_names[s]} mass {total!r}"
                )


# ---------------------------------------------------------------------------
# Grammar-fragment compiler
# ---------------------------------------------------------------------------

_STOP = -1  # epsilon-closure key for "reached the accept node"


class _Compiler:
    """Builds one machine from weighted-grammar fragments.

    Fragments are (start, end) node pairs over a private epsilon/emit graph;
    they are single-use, so helpers that need a sub-grammar twice take a
    factory. ``compile`` eliminates epsilon edges and renumbers states.
    """

    def __init__(self):
        self._eps: list[list[tuple[float, int]]] = []
        self._emit: list[tuple[CharClass, int] | None] = []

    def _node(self) -> int:
        self._eps.append([])
        self._emit.append(None)
        return len(self._eps) - 1

    def empty(self) -> tuple[int, int]:
        start = self._node()
        end = self._node()
        self._eps[start].append((1.0, end))
        return start, end

    def cls(self, cc: CharClass) -> tuple[int, int]:
        start = self._node()
        end = self._node()
        self._emit[start] = (cc, end)
        return start, end

    def lit(self, text: str) -> tuple[int, int]:
        if not text:
            return self.empty()
        frags = [self.cls(_cls(f"lit_{ch}", ch)) for ch in text]
        return self.seq(*frags)

    def seq(self, *frags: tuple[int, int]) -> tuple[int, int]:
        for (_, end), (start, _) in zip(frags, frags[1:]):
            self._eps[end].append((1.0, start))
        return frags[0][0], frags[-1][1]

    def alt(self, weighted: list[tuple[tuple[int, int], float]]) -> tuple[int, int]:
        total = sum(w for _, w in weighted)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"alternation weights sum to {total!r}")
        start = self._node()
        end = self._node()
        for (fs, fe), w in weighted:
            self._eps[start].append((w, fs))
            self._eps[fe].append((1.0, end))
        return start, end

    def opt(self, frag: tuple[int, int], p: float) -> tuple[int, int]:
        return self.alt([(frag, p), (self.empty(), 1.0 - p)])

    def rep(self, frag: tuple[int, int], p_cont: float) -> tuple[int, int]:
        # Geometric repeat (zero or more). The body must consume at least one
        # character on every path, otherwise the epsilon graph would cycle.
        start = self._node()
        end = self._node()
        self._eps[start].append((p_cont, frag[0]))
        self._eps[start].append((1.0 - p_cont, end))
        self._eps[frag[1]].append((1.0, start))
        return start, end

    def plus(self, factory, p_cont: float) -> tuple[int, int]:
        return self.seq(factory(), self.rep(factory(), p_cont))

    def enum(self, words: Iterable[str]) -> tuple[int, int]:
        words = list(words)
        w = 1.0 / len(words)
        return self.alt([(self.lit(word), w) for word in words])

    def compile(self, label: str, frag: tuple[int, int]) -> TypeMachine:
        accept = frag[1]
        closures: dict[int, dict[int, float]] = {}
        in_progress: set[int] = set()

        def closure(n: int) -> dict[int, float]:
            if n in closures:
                return closures[n]
            if n == accept:
                closures[n] = {_STOP: 1.0}
                return closures[n]
            if self._emit[n] is not None:
                closures[n] = {n: 1.0}
                return closures[n]
            if n in in_progress:
                raise ValueError("epsilon cycle in grammar fragment")
            in_progress.add(n)
            out: dict[int, float] = {}
            for p, dst in self._eps[n]:
                for key, q in closure(dst).items():
                    out[key] = out.get(key, 0.0) + p * q
            in_progress.discard(n)
            closures[n] = out
            return out

        init = closure(frag[0])

        # Reachable consuming nodes, in deterministic discovery order.
        order: list[int] = []
        seen: set[int] = set()
        pending = [n for n in init if n != _STOP]
        while pending:
            n = pending.pop(0)
            if n in seen:
                continue
            seen.add(n)
            order.append(n)
            _, dst = self._emit[n]  # type: ignore[misc]
            for key in closure(dst):
                if key != _STOP and key not in seen:
                    pending.append(key)

        final_id = len(order) + 1  # 0 is the initial state
        state_of = {n: i + 1 for i, n in enumerate(order)}
        names = ["start"] + [f"s{i}" for i in range(1, final_id)] + ["final"]

        def rows_for(n: int, scale: float) -> list[tuple[CharClass, float, int]]:
            cc, dst = self._emit[n]  # type: ignore[misc]
            rows = []
            for key, q in closure(dst).items():
                target = final_id if key == _STOP else state_of[key]
                rows.append((cc, scale * q, target))
            return rows

        transitions: list[list[tuple[CharClass, float, int]]] = [[] for _ in names]
        stop = [0.0] * len(names)
        stop[0] = init.get(_STOP, 0.0)
        for n, q in init.items():
            if n != _STOP:
                transitions[0].extend(rows_for(n, q))
        for n in order:
            transitions[state_of[n]] = rows_for(n, 1.0)
        stop[final_id] = 1.0

        machine = TypeMachine(label, names, transitions, stop)
        machine.check_normalized()
        return machine


# ---------------------------------------------------------------------------
# Built-in machines
# ---------------------------------------------------------------------------


def _padded_number(c: _Compiler, body: tuple[int, int], p: MachineParams):
    return c.seq(
        c.opt(c.cls(SPACE), p.lead_space),
        c.opt(c.cls(SIGN), p.sign),
        body,
        c.opt(c.cls(SPACE), p.trail_space),
    )


def build_integer_machine(p: MachineParams = DEFAULT_MACHINE_PARAMS) -> TypeMachine:
    c = _Compiler()
    body = c.plus(lambda: c.cls(DIGIT), p.digit_cont)
    return c.compile("integer", _padded_number(c, body, p))


def build_float_machine(p: MachineParams = DEFAULT_MACHINE_PARAMS) -> TypeMachine:
    c = _Compiler()
    digits = lambda: c.plus(lambda: c.cls(DIGIT), p.digit_cont)
    dot = lambda: c.lit(".")
    mantissa = c.alt(
        [
            (c.seq(digits(), c.opt(c.seq(dot(), c.rep(c.cls(DIGIT), p.digit_cont)), p.float_frac)), p.float_int_branch),
            (c.seq(dot(), digits()), 1.0 - p.float_int_branch),
        ]
    )
    exponent = c.seq(
        c.cls(_cls("exp_marker", "eE")),
        c.opt(c.cls(SIGN), p.float_exp_sign),
        c.plus(lambda: c.cls(DIGIT), p.float_exp_digit_cont),
    )
    body = c.seq(mantissa, c.opt(exponent, p.float_exp))
    return c.compile("float", _padded_number(c, body, p))


MONTH_NAMES = (
    "January", "February", "March", "April", "May", "June", "July",
    "August", "September", "October", "November", "December",
)
MONTH_ABBREVS = tuple(m[:3] for m in MONTH_NAMES)
# "May" is its own abbreviation; keep distinct words only.
MONTH_WORDS = MONTH_NAMES + tuple(a for a in MONTH_ABBREVS if a not in MONTH_NAMES)


def build_date_machine(p: MachineParams = DEFAULT_MACHINE_PARAMS) -> TypeMachine:
    c = _Compiler()
    d = lambda: c.cls(DIGIT)
    yyyy = lambda: c.seq(d(), d(), d(), d())
    # strict two-digit fields
    mm2 = lambda: c.alt(
        [
            (c.seq(c.lit("0"), c.cls(_cls("d19", "123456789"))), 0.5),
            (c.seq(c.lit("1"), c.cls(_cls("d02", "012"))), 0.5),
        ]
    )
    dd2 = lambda: c.alt(
        [
            (c.seq(c.lit("0"), c.cls(_cls("d19", "123456789"))), 1 / 3),
            (c.seq(c.cls(_cls("d12", "12")), d()), 1 / 3),
            (c.seq(c.lit("3"), c.cls(_cls("d01", "01"))), 1 / 3),
        ]
    )
    # one- or two-digit fields for slash and textual forms
    mmx = lambda: c.alt(
        [
            (c.cls(_cls("d19", "123456789")), 1 / 3),
            (c.seq(c.lit("0"), c.cls(_cls("d19", "123456789"))), 1 / 3),
            (c.seq(c.lit("1"), c.cls(_cls("d02", "012"))), 1 / 3),
        ]
    )
    ddx = lambda: c.alt(
        [
            (c.cls(_cls("d19", "123456789")), 0.25),
            (c.seq(c.lit("0"), c.cls(_cls("d19", "123456789"))), 0.25),
            (c.seq(c.cls(_cls("d12", "12")), d()), 0.25),
            (c.seq(c.lit("3"), c.cls(_cls("d01", "01"))), 0.25),
        ]
    )
    hh = lambda: c.alt(
        [
            (c.seq(c.cls(_cls("d01", "01")), d()), 0.5),
            (c.seq(c.lit("2"), c.cls(_cls("d03", "0123"))), 0.5),
        ]
    )
    m60 = lambda: c.seq(c.cls(_cls("d05", "012345")), d())
    time_ = lambda: c.seq(hh(), c.lit(":"), m60(), c.lit(":"), m60())
    iso = lambda: c.seq(yyyy(), c.lit("-"), mm2(), c.lit("-"), dd2())
    month = lambda: c.enum(MONTH_WORDS)
    year_range = c.alt(
        [
            (c.seq(c.lit("18"), d(), d()), p.year_18xx),
            (c.seq(c.lit("19"), d(), d()), p.year_19xx),
            (c.seq(c.lit("20"), d(), d()), p.year_20xx),
            (c.lit("2100"), p.year_2100),
        ]
    )
    templates = [
        iso(),
        c.seq(iso(), c.lit("T"), time_()),
        c.seq(iso(), c.lit(" "), time_()),
        c.seq(ddx(), c.lit("/"), mmx(), c.lit("/"), yyyy()),
        c.seq(mmx(), c.lit("/"), ddx(), c.lit("/"), yyyy()),
        c.seq(ddx(), c.lit(" "), month(), c.lit(" "), yyyy()),
        c.seq(month(), c.lit(" "), ddx(), c.lit(" "), yyyy()),
        month(),
        year_range,
        time_(),
    ]
    frag = c.alt([(t, 1.0 / len(templates)) for t in templates])
    return c.compile("date", frag)


def build_string_machine(p: MachineParams = DEFAULT_MACHINE_PARAMS) -> TypeMachine:
    # non-empty sequences only: the empty cell belongs to the missing machine
    c = _Compiler()
    return c.compile("string", c.plus(lambda: c.cls(ANY), p.string_char_cont))


def build_anomaly_machine(p: MachineParams = DEFAULT_MACHINE_PARAMS) -> TypeMachine:
    c = _Compiler()
    return c.compile("anomaly", c.rep(c.cls(ANY), p.anomaly_char_cont))


def build_missing_machine(
    vocabulary: Iterable[str] = MISSING_VOCABULARY,
) -> TypeMachine:
    c = _Compiler()
    return c.compile("missing", c.enum(vocabulary))


_CACHE: dict[tuple, dict[str, TypeMachine]] = {}


def builtin_machines(
    params: MachineParams = DEFAULT_MACHINE_PARAMS,
    vocabulary: tuple[str, ...] = MISSING_VOCABULARY,
) -> dict[str, TypeMachine]:
    """All six machines keyed by row-type label. Cached; machines are shared."""
    key = (params, vocabulary)
    if key not in _CACHE:
        _CACHE[key] = {
            "integer": build_integer_machine(params),
            "float": build_float_machine(params),
            "date": build_date_machine(params),
            "string": build_string_machine(params),
            "missing": build_missing_machine(vocabulary),
            "anomaly": build_anomaly_machine(params),
        }
    return _CACHE[key]
