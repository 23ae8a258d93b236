"""Generative hidden Markov model for a pair of serial episodes.

The model interleaves occurrences of two N-node episodes with uniform noise.
Its 4N^2 + 1 states split into episode states, which emit one fixed episode
symbol each, and noise states, which emit uniformly over the alphabet.  A
single noise parameter eta fixes every probability: from any state the
transition into a noise state has probability eta, and the remainder is
split equally among the reachable episode states.

State S1(i,j) emits the first episode's i-th symbol while the second
episode is waiting at position j; S2(i,j) emits the second episode's j-th
symbol while the first waits at position i.  Advancing an index wraps
modulo N, so each revisit of an episode state marks one full cycle of that
episode's symbols, i.e. one occurrence.

When the episodes share event types, designated states carry a special
transition taken with probability 1 - eta whose emission advances both
episodes at once: that one symbol is part of an occurrence of each episode
(a shared event).  Index bookkeeping here follows the transition diagrams
literally; the intended semantics (one emission, both counters move) is
what the destination indices express.

All likelihoods are computed and returned in log space, so sequences with
thousands of steps do not underflow.  The analysis behind the pairwise
comparison requires eta < M / (M + 8); model construction enforces it.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

import numpy as np

from .events import Alphabet, Event, EventDataset, SerialEpisode


class StateKind(str, Enum):
    EP1 = "S1"
    EP2 = "S2"
    NOISE1 = "N1"
    NOISE2 = "N2"
    NOISE0 = "N0"

    @property
    def is_noise(self) -> bool:
        return self in (StateKind.NOISE1, StateKind.NOISE2, StateKind.NOISE0)


@dataclass(frozen=True)
class StateId:
    """Typed state name; i and j are 1-based episode positions."""

    kind: StateKind
    i: int = 1
    j: int = 1

    def index(self, n_nodes: int) -> int:
        """Canonical dense index: N0, then S1, S2, N1, N2 blocks."""
        if self.kind is StateKind.NOISE0:
            return 0
        block = {
            StateKind.EP1: 0,
            StateKind.EP2: 1,
            StateKind.NOISE1: 2,
            StateKind.NOISE2: 3,
        }[self.kind]
        return 1 + block * n_nodes * n_nodes + (self.i - 1) * n_nodes + (self.j - 1)

    @classmethod
    def from_index(cls, index: int, n_nodes: int) -> "StateId":
        if index == 0:
            return cls(StateKind.NOISE0)
        block, rest = divmod(index - 1, n_nodes * n_nodes)
        i, j = divmod(rest, n_nodes)
        kind = (StateKind.EP1, StateKind.EP2, StateKind.NOISE1, StateKind.NOISE2)[
            block
        ]
        return cls(kind, i + 1, j + 1)

    def label(self) -> str:
        if self.kind is StateKind.NOISE0:
            return "N0"
        return f"{self.kind.value}({self.i},{self.j})"

    @classmethod
    def from_label(cls, text: str) -> "StateId":
        if text == "N0":
            return cls(StateKind.NOISE0)
        m = re.fullmatch(r"(S1|S2|N1|N2)\((\d+),(\d+)\)", text)
        if m is None:
            raise ValueError(f"bad state label {text!r}")
        return cls(StateKind(m.group(1)), int(m.group(2)), int(m.group(3)))


@dataclass(frozen=True)
class EpisodePairModel:
    """The pair model: transition matrix, initial law, and emissions."""

    alpha: SerialEpisode
    beta: SerialEpisode
    alphabet: Alphabet
    eta: float
    transitions: np.ndarray  # (n_states, n_states)
    initial: np.ndarray  # (n_states,)
    emissions: np.ndarray  # (n_states, M)
    shared_entry_edges: frozenset[tuple[int, int]]
    shared_initial_state: int | None

    @property
    def n_nodes(self) -> int:
        return self.alpha.length

    @property
    def n_states(self) -> int:
        return 4 * self.n_nodes * self.n_nodes + 1

    @property
    def alphabet_size(self) -> int:
        return self.alphabet.size

    def state(self, index: int) -> StateId:
        return StateId.from_index(index, self.n_nodes)

    def state_index(self, state: StateId) -> int:
        return state.index(self.n_nodes)


def eta_upper_bound(alphabet_size: int) -> float:
    """The analysis holds for eta strictly below M / (M + 8)."""
    return alphabet_size / (alphabet_size + 8)


def build_model(
    alpha: SerialEpisode,
    beta: SerialEpisode,
    alphabet: Alphabet,
    eta: float,
) -> EpisodePairModel:
    """Construct the pair model for two equal-length serial episodes.

    Raises on unequal lengths, symbols outside the alphabet, or eta
    outside (0, M / (M + 8)).
    """
    n = alpha.length
    if beta.length != n:
        raise ValueError(
            f"episodes must have equal length, got {alpha.length} and {beta.length}"
        )
    m = alphabet.size
    if not 0.0 < eta < eta_upper_bound(m):
        raise ValueError(
            f"eta must lie in (0, {eta_upper_bound(m):.6g}) for alphabet size {m}"
        )
    alpha_ids = [alphabet.index(sym) for sym in alpha.event_types]
    beta_ids = [alphabet.index(sym) for sym in beta.event_types]

    n_states = 4 * n * n + 1
    trans = np.zeros((n_states, n_states))
    init = np.zeros(n_states)
    emit = np.zeros((n_states, m))

    def nxt(k: int) -> int:
        return k % n + 1

    def s1(i: int, j: int) -> int:
        return StateId(StateKind.EP1, i, j).index(n)

    def s2(i: int, j: int) -> int:
        return StateId(StateKind.EP2, i, j).index(n)

    def n1(i: int, j: int) -> int:
        return StateId(StateKind.NOISE1, i, j).index(n)

    def n2(i: int, j: int) -> int:
        return StateId(StateKind.NOISE2, i, j).index(n)

    n0 = StateId(StateKind.NOISE0).index(n)
    half = (1.0 - eta) / 2.0

    for i in range(1, n + 1):
        for j in range(1, n + 1):
            trans[s1(i, j), s1(nxt(i), j)] += half
            trans[s1(i, j), s2(nxt(i), j)] += half
            trans[s1(i, j), n1(i, j)] += eta
            trans[s2(i, j), s1(i, nxt(j))] += half
            trans[s2(i, j), s2(i, nxt(j))] += half
            trans[s2(i, j), n2(i, j)] += eta
            trans[n1(i, j), s1(nxt(i), j)] += half
            trans[n1(i, j), s2(nxt(i), j)] += half
            trans[n1(i, j), n1(i, j)] += eta
            trans[n2(i, j), s1(i, nxt(j))] += half
            trans[n2(i, j), s2(i, nxt(j))] += half
            trans[n2(i, j), n2(i, j)] += eta
    trans[n0, s1(1, 1)] = half
    trans[n0, s2(1, 1)] = half
    trans[n0, n0] = eta

    # Shared-event transitions: where the next symbols of both episodes
    # coincide, the designated states move with probability 1 - eta along
    # an edge whose emission advances both episode indices.
    shared_edges: set[tuple[int, int]] = set()
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if alpha_ids[nxt(i) - 1] != beta_ids[nxt(j) - 1]:
                continue
            src_a = s1(i, nxt(j))
            dst_a = s1(nxt(i), nxt(nxt(j)))
            trans[src_a, :] = 0.0
            trans[src_a, dst_a] = 1.0 - eta
            trans[src_a, n1(i, nxt(j))] = eta
            shared_edges.add((src_a, dst_a))

            src_b = s2(nxt(i), j)
            dst_b = s2(nxt(nxt(i)), nxt(j))
            trans[src_b, :] = 0.0
            trans[src_b, dst_b] = 1.0 - eta
            trans[src_b, n2(nxt(i), j)] = eta
            shared_edges.add((src_b, dst_b))

    shared_initial: int | None = None
    if alpha_ids[0] != beta_ids[0]:
        init[n0] = eta
        init[s1(1, 1)] = half
        init[s2(1, 1)] = half
    else:
        init[n0] = eta
        shared_initial = s1(1, nxt(1))
        init[shared_initial] = 1.0 - eta

    for idx in range(n_states):
        state = StateId.from_index(idx, n)
        if state.kind is StateKind.EP1:
            emit[idx, alpha_ids[state.i - 1]] = 1.0
        elif state.kind is StateKind.EP2:
            emit[idx, beta_ids[state.j - 1]] = 1.0
        else:
            emit[idx, :] = 1.0 / m

    return EpisodePairModel(
        alpha,
        beta,
        alphabet,
        eta,
        trans,
        init,
        emit,
        frozenset(shared_edges),
        shared_initial,
    )


def default_pair_alphabet(
    alpha: SerialEpisode, beta: SerialEpisode, alphabet_size: int
) -> Alphabet:
    """Alphabet of the requested size containing both episodes' symbols.

    Episode symbols come first in order of appearance; remaining slots are
    filled with unused capital letters, then generated names.
    """
    names: list[str] = []
    for sym in alpha.event_types + beta.event_types:
        if sym not in names:
            names.append(sym)
    if alphabet_size < len(names):
        raise ValueError(
            f"alphabet size {alphabet_size} too small for "
            f"{len(names)} distinct episode symbols"
        )
    for letter in "ABCDEFGHIJKLMNOPQRSTUVWXYZ":
        if len(names) == alphabet_size:
            break
        if letter not in names:
            names.append(letter)
    k = 0
    while len(names) < alphabet_size:
        candidate = f"x{k}"
        if candidate not in names:
            names.append(candidate)
        k += 1
    return Alphabet(tuple(names))


@dataclass(frozen=True)
class Trajectory:
    """A sampled (state, output) path with generation-time shared tags."""

    states: tuple[int, ...]
    outputs: tuple[int, ...]
    shared: tuple[bool, ...]

    def __len__(self) -> int:
        return len(self.states)


def trajectory_counts(
    model: EpisodePairModel, traj: Trajectory
) -> tuple[int, int, int]:
    """(noise, unshared-episode, shared-episode) state counts of a path."""
    n_noise = sum(
        1 for idx in traj.states if model.state(idx).kind.is_noise
    )
    n_shared = sum(traj.shared)
    return n_noise, len(traj) - n_noise - n_shared, n_shared


def simulate(model: EpisodePairModel, length: int, seed: int) -> Trajectory:
    """Sample a trajectory of the given length; deterministic per seed."""
    if length < 1:
        raise ValueError("length must be >= 1")
    rng = np.random.default_rng(seed)
    init_cdf = np.cumsum(model.initial)
    trans_cdf = np.cumsum(model.transitions, axis=1)
    ep_symbol = np.argmax(model.emissions, axis=1)
    is_noise = np.array(
        [model.state(idx).kind.is_noise for idx in range(model.n_states)]
    )
    m = model.alphabet_size

    states = np.empty(length, dtype=np.int64)
    outputs = np.empty(length, dtype=np.int64)
    shared = np.zeros(length, dtype=bool)

    last = model.n_states - 1
    state = min(int(np.searchsorted(init_cdf, rng.random(), side="right")), last)
    shared[0] = state == model.shared_initial_state
    for t in range(length):
        if t > 0:
            prev = state
            state = min(
                int(np.searchsorted(trans_cdf[prev], rng.random(), side="right")),
                last,
            )
            shared[t] = (prev, state) in model.shared_entry_edges
        states[t] = state
        outputs[t] = rng.integers(0, m) if is_noise[state] else ep_symbol[state]
    return Trajectory(
        tuple(int(s) for s in states),
        tuple(int(o) for o in outputs),
        tuple(bool(b) for b in shared),
    )


def trajectory_dataset(model: EpisodePairModel, traj: Trajectory) -> EventDataset:
    """View a trajectory's output as a one-sequence dataset, times 1..T."""
    seq = tuple(Event(sym, t + 1) for t, sym in enumerate(traj.outputs))
    return EventDataset((seq,), model.alphabet)


def joint_log_likelihood(
    model: EpisodePairModel,
    outputs: Sequence[int],
    states: Sequence[int],
) -> float:
    """Log joint probability of an output sequence and a state sequence.

    Product of the initial probability, the stepwise transition
    probabilities, and the per-state emission probabilities; -inf when any
    factor is zero.
    """
    if len(outputs) != len(states):
        raise ValueError("output and state sequences must have equal length")
    if len(outputs) == 0:
        raise ValueError("sequences must be non-empty")
    p = model.initial[states[0]] * model.emissions[states[0], outputs[0]]
    if p == 0.0:
        return -math.inf
    total = math.log(p)
    for t in range(1, len(states)):
        p = (
            model.transitions[states[t - 1], states[t]]
            * model.emissions[states[t], outputs[t]]
        )
        if p == 0.0:
            return -math.inf
        total += math.log(p)
    return total


def closed_form_case1(model: EpisodePairModel, n_noise: int, n_episode: int) -> float:
    """Log joint probability from counts alone, no shared events.

    Every noise emission contributes eta/M and every episode emission
    (1 - eta)/2, so the path probability is a function of the two counts.
    """
    if n_noise < 0 or n_episode < 0:
        raise ValueError("counts must be non-negative")
    eta, m = model.eta, model.alphabet_size
    return n_noise * math.log(eta / m) + n_episode * math.log((1.0 - eta) / 2.0)


def closed_form_decomposed(
    model: EpisodePairModel, n_noise: int, n_unshared: int, n_shared: int
) -> float:
    """Log joint probability from (noise, unshared, shared) state counts.

    Shared-event emissions enter with weight 1 - eta instead of
    (1 - eta)/2; with no shared states this is the two-count form.
    """
    if min(n_noise, n_unshared, n_shared) < 0:
        raise ValueError("counts must be non-negative")
    eta = model.eta
    return closed_form_case1(model, n_noise, n_unshared) + n_shared * math.log(
        1.0 - eta
    )


def closed_form_case2(
    model: EpisodePairModel,
    f_first: int,
    f_second: int,
    n_shared_events: int,
    length: int,
) -> float:
    """Log joint probability of a path carrying complete occurrences only.

    For f occurrences of each episode sharing ``n_shared_events`` events:
    (eta/M)^T * ((1-eta)M/(2 eta))^(N f1 + N f2) * ((1-eta)M/(4 eta))^(-shared).
    """
    n = model.n_nodes
    if min(f_first, f_second, n_shared_events) < 0:
        raise ValueError("counts must be non-negative")
    if n * f_first + n * f_second - 2 * n_shared_events < 0:
        raise ValueError("more shared events than episode events")
    if n * f_first + n * f_second - n_shared_events > length:
        raise ValueError("occurrence events exceed the sequence length")
    eta, m = model.eta, model.alphabet_size
    return (
        length * math.log(eta / m)
        + (n * f_first + n * f_second) * math.log((1.0 - eta) * m / (2.0 * eta))
        - n_shared_events * math.log((1.0 - eta) * m / (4.0 * eta))
    )


def viterbi(model: EpisodePairModel, outputs: Sequence[int]) -> tuple[int, ...]:
    """Most likely state sequence for an output sequence.

    Standard log-space max-product dynamic program over all states; ties
    resolve to the lowest canonical state index.
    """
    if len(outputs) == 0:
        raise ValueError("output sequence must be non-empty")
    m = model.alphabet_size
    if any(not 0 <= o < m for o in outputs):
        raise ValueError("output symbol outside the alphabet")
    with np.errstate(divide="ignore"):
        log_trans = np.log(model.transitions)
        log_init = np.log(model.initial)
        log_emit = np.log(model.emissions)
    t_max = len(outputs)
    n_states = model.n_states
    delta = log_init + log_emit[:, outputs[0]]
    pointers = np.empty((t_max, n_states), dtype=np.int64)
    for t in range(1, t_max):
        scores = delta[:, None] + log_trans
        pointers[t] = np.argmax(scores, axis=0)
        delta = scores[pointers[t], np.arange(n_states)] + log_emit[:, outputs[t]]
    path = [int(np.argmax(delta))]
    for t in range(t_max - 1, 0, -1):
        path.append(int(pointers[t, path[-1]]))
    return tuple(reversed(path))


def overlap_score_1(n_nodes: int, f_star: int, o_star: int) -> int:
    """First pair-rating metric: N f* - O*."""
    return n_nodes * f_star - o_star


def overlap_score_2(n_nodes: int, f_star: int, o_star: int) -> Fraction:
    """Second pair-rating metric: N f* - O*/2, kept exact."""
    return Fraction(2 * n_nodes * f_star - o_star, 2)


@dataclass(frozen=True)
class PairStats:
    """Occurrence statistics of an episode pair along one state sequence."""

    n_nodes: int
    f_first: int
    f_second: int
    shared_events: int

    def __post_init__(self) -> None:
        if min(self.n_nodes, self.f_first, self.f_second, self.shared_events) < 0:
            raise ValueError("statistics must be non-negative")


def trajectory_stats(
    model: EpisodePairModel,
    states: Sequence[int],
    shared: Sequence[bool] | None = None,
) -> PairStats:
    """Complete-occurrence counts and shared events along a state sequence.

    ``shared`` flags default to the structural rule: an episode state
    entered through a probability-(1 - eta) edge emits a shared event.
    Occurrences still open when the sequence ends are not counted.
    """
    n = model.n_nodes
    if shared is None:
        flags = []
        for t, idx in enumerate(states):
            if t == 0:
                flags.append(idx == model.shared_initial_state)
            else:
                flags.append((states[t - 1], idx) in model.shared_entry_edges)
        shared = flags
    f_first = f_second = n_shared = 0

    def prev_pos(k: int) -> int:
        return n if k == 1 else k - 1

    for idx, is_shared in zip(states, shared):
        state = model.state(idx)
        if state.kind is StateKind.EP1:
            if state.i == n:
                f_first += 1
            if is_shared:
                n_shared += 1
                if prev_pos(state.j) == n:
                    f_second += 1
        elif state.kind is StateKind.EP2:
            if state.j == n:
                f_second += 1
            if is_shared:
                n_shared += 1
                if prev_pos(state.i) == n:
                    f_first += 1
    return PairStats(n, f_first, f_second, n_shared)


@dataclass(frozen=True)
class PairComparison:
    """Likelihood comparison of two candidate pairings against one episode."""

    log_ratio: float
    preferred: str  # "second-vs-first" sense: "beta", "gamma", or "tie"


def compare_pairs(
    stats_beta: PairStats,
    stats_gamma: PairStats,
    eta: float,
    alphabet_size: int,
) -> PairComparison:
    """Log likelihood ratio of the two pair models on the same output.

    Positive favors the pairing described by ``stats_beta``.  The ratio is
    ((1-eta)M/(2 eta))^(N (f_beta - f_gamma)) *
    ((1-eta)M/(4 eta))^(shared_gamma - shared_beta).
    """
    if stats_beta.n_nodes != stats_gamma.n_nodes:
        raise ValueError("pair statistics must describe equal-length episodes")
    m = alphabet_size
    if not 0.0 < eta < eta_upper_bound(m):
        raise ValueError(f"eta must lie in (0, {eta_upper_bound(m):.6g})")
    n = stats_beta.n_nodes
    log_ratio = n * (stats_beta.f_second - stats_gamma.f_second) * math.log(
        (1.0 - eta) * m / (2.0 * eta)
    ) + (stats_gamma.shared_events - stats_beta.shared_events) * math.log(
        (1.0 - eta) * m / (4.0 * eta)
    )
    if log_ratio > 0:
        preferred = "beta"
    elif log_ratio < 0:
        preferred = "gamma"
    else:
        preferred = "tie"
    return PairComparison(log_ratio, preferred)


def model_summary(model: EpisodePairModel) -> dict:
    """JSON-compatible dump: states, initial law, sparse transitions, emissions."""
    n = model.n_nodes
    labels = [model.state(idx).label() for idx in range(model.n_states)]
    transitions = [
        [labels[src], labels[dst], model.transitions[src, dst]]
        for src in range(model.n_states)
        for dst in range(model.n_states)
        if model.transitions[src, dst] > 0.0
    ]
    emissions = {}
    for idx in range(model.n_states):
        state = model.state(idx)
        if state.kind is StateKind.EP1:
            emissions[labels[idx]] = model.alpha.event_types[state.i - 1]
        elif state.kind is StateKind.EP2:
            emissions[labels[idx]] = model.beta.event_types[state.j - 1]
        else:
            emissions[labels[idx]] = "*uniform*"
    return {
        "n_nodes": n,
        "alphabet": list(model.alphabet.symbols),
        "eta": model.eta,
        "alpha": str(model.alpha),
        "beta": str(model.beta),
        "states": labels,
        "initial": {
            labels[idx]: model.initial[idx]
            for idx in range(model.n_states)
            if model.initial[idx] > 0.0
        },
        "transitions": transitions,
        "emissions": emissions,
    }
