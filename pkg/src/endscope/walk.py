"""Free groups, their Cayley graphs over A^r, and bounded random walks.

Words are tuples of non-zero ints: ``i`` is the generator g_i and ``-i`` its
inverse. Letters are ordered g1 < g1^-1 < g2 < g2^-1 < ...

Random streams: every trajectory draws from its own Philox-4x64 generator
(numpy ``Philox``, counter based) keyed by ``SeedSequence([seed, index])``,
so trajectories are reproducible independently of how they are scheduled.
"""
from __future__ import annotations

import itertools
import math
import os
import re
import warnings
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import ConfigError
from .graph import INFINITE, LazyGraph

Word = tuple

IDENTITY: Word = ()
NORMALIZATION_TOL = 1e-9
TAIL_TRUNCATION = 1e-12

_LETTER = re.compile(r"g(\d+)(\^-1)?")


def reduce_word(letters: Iterable[int]) -> Word:
    stack: list[int] = []
    for x in letters:
        if x == 0:
            raise ConfigError("0 is not a letter")
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


def multiply(u: Word, v: Word) -> Word:
    i = 0
    n = min(len(u), len(v))
    while i < n and u[len(u) - 1 - i] == -v[i]:
        i += 1
    return u[: len(u) - i] + v[i:]


def inverse(w: Word) -> Word:
    return tuple(-x for x in reversed(w))


def is_reduced(w: Sequence[int]) -> bool:
    return all(x != 0 for x in w) and all(w[i] != -w[i + 1] for i in range(len(w) - 1))


def letter_key(x: int):
    return (abs(x), x < 0)


def word_key(w: Word):
    return (len(w), [letter_key(x) for x in w])


def format_word(w: Word) -> str:
    if not w:
        return "e"
    return "".join(f"g{abs(x)}" + ("^-1" if x < 0 else "") for x in w)


def parse_word(text: str) -> Word:
    text = text.strip()
    if text in ("e", ""):
        return IDENTITY
    pos = 0
    letters = []
    for m in _LETTER.finditer(text):
        if m.start() != pos:
            break
        letters.append(-int(m.group(1)) if m.group(2) else int(m.group(1)))
        pos = m.end()
    if pos != len(text) or not letters or any(x == 0 for x in letters):
        raise ConfigError(f"malformed word {text!r}")
    return reduce_word(letters)


def _words_of_length(alphabet: Sequence[int], n: int) -> Iterator[Word]:
    if n == 0:
        yield ()
        return
    for w in _words_of_length(alphabet, n - 1):
        for x in alphabet:
            if not w or w[-1] != -x:
                yield w + (x,)


class FreeGroupCayley(LazyGraph):
    """Cayley graph of the free group on ``generators`` letters w.r.t. A^r.

    ``generators=None`` means countably many generators; neighbour streams are
    then dovetailed by the largest generator index used.
    """

    def __init__(self, r: int = 1, generators: int | None = 2):
        if r < 1:
            raise ConfigError("r must be >= 1")
        if generators is not None and generators < 1:
            raise ConfigError("need at least one generator")
        self.r = r
        self.generators = generators
        self.root = IDENTITY
        k = "inf" if generators is None else generators
        self.name = f"free:r={r},k={k}"
        self._ball_words = None
        if generators is not None:
            alphabet = sorted([g for i in range(1, generators + 1) for g in (i, -i)], key=letter_key)
            self._ball_words = [w for n in range(1, r + 1) for w in _words_of_length(alphabet, n)]
            self._ball_words.sort(key=word_key)

    @property
    def alphabet_size(self) -> float:
        return INFINITE if self.generators is None else 2 * self.generators

    def step_words(self) -> Iterator[Word]:
        """A^r in stream order."""
        if self._ball_words is not None:
            yield from self._ball_words
            return
        for m in itertools.count(1):
            alphabet = sorted([g for i in range(1, m + 1) for g in (i, -i)], key=letter_key)
            fresh = [w for n in range(1, self.r + 1) for w in _words_of_length(alphabet, n) if any(abs(x) == m for x in w)]
            yield from sorted(fresh, key=word_key)

    def neighbors(self, v):
        for s in self.step_words():
            yield multiply(v, s)

    def is_adjacent(self, u, v):
        if u == v:
            return False
        if self.generators is not None and any(abs(x) > self.generators for x in u + v):
            return False
        return len(multiply(inverse(u), v)) <= self.r

    def degree_hint(self, v):
        return INFINITE if self._ball_words is None else len(self._ball_words)

    def exact_metric(self, u, v):
        return math.ceil(len(multiply(inverse(u), v)) / self.r)

    def token(self, v):
        return format_word(v)

    def default_budget(self, radius):
        return 2 * (radius + 2)


def free_group_cayley(generators: int | None = 2, r: int = 1) -> FreeGroupCayley:
    return FreeGroupCayley(r=r, generators=generators)


@dataclass(frozen=True)
class StepMeasure:
    """Finitely supported step distribution on reduced words."""

    support: tuple
    weights: tuple

    def __post_init__(self):
        if len(self.support) != len(self.weights) or not self.support:
            raise ConfigError("measure needs a non-empty support with one weight per word")
        if any(w <= 0 for w in self.weights):
            raise ConfigError("weights must be positive")
        total = math.fsum(self.weights)
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise ConfigError(f"measure is not normalized (total {total!r})")
        for w in self.support:
            if not w or not is_reduced(w):
                raise ConfigError(f"support word {format_word(w)} must be reduced and non-empty")
        if len(set(self.support)) != len(self.support):
            raise ConfigError("support words must be distinct")

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[Word, float]]) -> "StepMeasure":
        pairs = list(pairs)
        return cls(tuple(w for w, _ in pairs), tuple(float(p) for _, p in pairs))

    @classmethod
    def uniform(cls, generators: int = 2) -> "StepMeasure":
        letters = sorted([g for i in range(1, generators + 1) for g in (i, -i)], key=letter_key)
        return cls.from_pairs(((x,), 1.0 / len(letters)) for x in letters)

    @classmethod
    def point_mass(cls, word: Word) -> "StepMeasure":
        return cls((tuple(word),), (1.0,))

    @classmethod
    def truncated(cls, pairs: Iterable[tuple[Word, float]], tail: float = TAIL_TRUNCATION) -> "StepMeasure":
        """Consume an enumerated weight sequence until the remaining mass is below ``tail``."""
        kept: dict = {}
        total = 0.0
        for w, p in pairs:
            if p > 0:
                kept[tuple(w)] = kept.get(tuple(w), 0.0) + p
                total += p
            if total >= 1.0 - tail:
                break
        else:
            if abs(total - 1.0) > tail:
                raise ConfigError("enumerated weights do not sum to 1")
        return cls.from_pairs((w, p / total) for w, p in kept.items())

    @classmethod
    def parse(cls, text: str) -> "StepMeasure":
        """Parse ``word weight`` lines; ``#`` starts a comment."""
        pairs = []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ConfigError(f"line {lineno}: expected 'word weight'")
            try:
                weight = float(parts[1])
            except ValueError:
                raise ConfigError(f"line {lineno}: bad weight {parts[1]!r}") from None
            pairs.append((parse_word(parts[0]), weight))
        return cls.from_pairs(pairs)

    def max_length(self) -> int:
        return max(len(w) for w in self.support)

    def generators_used(self) -> int:
        return max(abs(x) for w in self.support for x in w)

    def check_against(self, graph: FreeGroupCayley) -> None:
        if self.max_length() > graph.r:
            raise ConfigError(f"support word longer than r={graph.r}")
        if graph.generators is not None and self.generators_used() > graph.generators:
            raise ConfigError("support uses a generator outside the graph's alphabet")

    def hypothesis_warnings(self) -> list[str]:
        out = []
        classes = {min(w, inverse(w)) for w in self.support}
        if len(classes) < 2:
            out.append(
                "support does not contain two elements a1, a2 with a1, a2, a1^-1, a2^-1 "
                "pairwise distinct; the almost-sure convergence argument does not apply"
            )
        return out


@dataclass
class Trajectory:
    seed: int
    index: int
    r: int
    support: tuple
    steps: np.ndarray
    lengths: np.ndarray
    final: Word
    prefix_stabilization: dict = field(default_factory=dict)

    @property
    def escape(self) -> np.ndarray:
        """d(o, Z_n) for n = 0..steps."""
        return -(-self.lengths // self.r)

    def positions(self) -> Iterator[Word]:
        z = IDENTITY
        yield z
        for c in self.steps:
            z = multiply(z, self.support[c])
            yield z


def _stream(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, index])))


def _run_one(args) -> Trajectory:
    support, probs, steps, seed, index, r, depth = args
    rng = _stream(seed, index)
    choices = rng.choice(len(support), size=steps, p=probs).astype(np.int32)
    stack: list[int] = []
    lengths = np.empty(steps + 1, dtype=np.int64)
    lengths[0] = 0
    last_change = [0] * (depth + 1)
    for n, c in enumerate(choices.tolist(), 1):
        m = len(stack)
        for x in support[c]:
            if stack and stack[-1] == -x:
                stack.pop()
                m = len(stack)
            else:
                stack.append(x)
        # prefix of length k is rewritten iff the stack dipped below k
        if m < depth:
            for k in range(m + 1, depth + 1):
                last_change[k] = n
        lengths[n] = len(stack)
    final = tuple(stack)
    stab = {k: (last_change[k] if len(final) >= k else None) for k in range(1, depth + 1)}
    return Trajectory(seed, index, r, support, choices, lengths, final, stab)


def simulate(
    measure: StepMeasure,
    steps: int,
    trajectories: int,
    seed: int,
    r: int | None = None,
    prefix_depth: int = 8,
    workers: int | None = None,
) -> list[Trajectory]:
    """Run independent walks Z_{n+1} = Z_n * step_n from the identity."""
    if steps < 1 or trajectories < 1:
        raise ConfigError("steps and trajectories must be >= 1")
    r = measure.max_length() if r is None else r
    if measure.max_length() > r:
        raise ConfigError("support word longer than r")
    probs = np.asarray(measure.weights, dtype=float)
    probs = probs / probs.sum()
    jobs = [(measure.support, probs, steps, seed, i, r, prefix_depth) for i in range(trajectories)]
    if workers is None:
        workers = int(os.environ.get("ENDSCOPE_THREADS", "1") or 1)
    if workers > 1 and trajectories > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_run_one, jobs, chunksize=max(1, trajectories // (4 * workers))))
    return [_run_one(job) for job in jobs]


def convergence_report(
    trajectories: Sequence[Trajectory],
    prefix_depth: int = 1,
    escape_window: int | None = None,
    measure: StepMeasure | None = None,
    alphabet_size: float | None = None,
) -> dict:
    """Prefix-cone stabilization and escape statistics.

    A trajectory counts as stabilized at depth k when its length-k prefix is
    defined at the end and has not changed during the last ``escape_window``
    steps (default: half the run).
    """
    if not trajectories:
        raise ConfigError("no trajectories")
    steps = len(trajectories[0].steps)
    window = steps // 2 if escape_window is None else escape_window
    stabilized = 0
    escaped = 0
    cones: Counter = Counter()
    rates = []
    for t in trajectories:
        if prefix_depth not in t.prefix_stabilization:
            raise ConfigError(f"trajectory recorded prefixes only up to {max(t.prefix_stabilization)}")
        s = t.prefix_stabilization[prefix_depth]
        if s is not None and s <= steps - window:
            stabilized += 1
            cones[format_word(t.final[:1])] += 1
        if len(t.final) > 0:
            escaped += 1
        rates.append(int(t.lengths[-1]) / steps)
    n = len(trajectories)
    report = {
        "trajectories": n,
        "steps": steps,
        "prefix_depth": prefix_depth,
        "escape_window": window,
        "stabilization_fraction": stabilized / n,
        "escape_fraction": escaped / n,
        "mean_length_rate": math.fsum(rates) / n,
        "stabilized_prefix_distribution": {k: cones[k] / n for k in sorted(cones)},
        "certainty": "EmpiricalWithinRun",
        "warnings": [],
    }
    if measure is not None:
        report["warnings"].extend(measure.hypothesis_warnings())
    if alphabet_size is not None and alphabet_size < 4:
        report["outside_hypothesis"] = True
        report["warnings"].append("alphabet has fewer than four elements")
    else:
        report["outside_hypothesis"] = bool(report["warnings"])
    for w in report["warnings"]:
        warnings.warn(w, stacklevel=2)
    return report
