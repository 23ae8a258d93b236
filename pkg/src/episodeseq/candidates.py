"""Depth-first enumeration of the fixed-interval episode lattice.

Every symbol present in the data roots one DFS tree.  A node is extended by
appending a symbol not already in the episode, with any gap in [1, T_g];
each child's distinct-start list is the subset of the parent's starts whose
end offset hits an event of the new symbol.  Along every root-to-leaf path
the highest-scoring episode is emitted, so the candidate set holds one
"best" episode per path, deduplicated.

Extensions are cut once the mode frequency drops below 2.  Frequency only
shrinks along extensions, so the cut branches consist of episodes that
occur at most once; no user frequency threshold is involved.  (Episodes
with f <= 2 score at most -3 and are never selected, so keeping the f = 2
branches only widens the reported candidate set, never the selection.)

Extension joins always use distinct starts; in non-overlapped mode the
stored list, frequency, and score are recomputed per node from the
greedily filtered list.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .events import EventDataset, FixedIntervalEpisode
from .mdl import score
from .occurrences import FrequencyMode, OccurrenceList, find_no_occurrences

_PRUNE_FREQUENCY = 1


@dataclass(frozen=True)
class Candidate:
    episode: FixedIntervalEpisode
    occurrences: OccurrenceList  # under the active frequency mode
    frequency: int
    score: int

    @property
    def key(self) -> str:
        return str(self.episode)


@dataclass(frozen=True)
class CandidateSet:
    """Deduplicated candidates in canonical (episode string) order."""

    episodes: tuple[Candidate, ...]
    max_gap: int
    mode: FrequencyMode

    def __len__(self) -> int:
        return len(self.episodes)

    def __iter__(self):
        return iter(self.episodes)


class _DataIndex:
    """Per-sequence lookup tables used by the DFS joins."""

    def __init__(self, data: EventDataset):
        self.data = data
        self.alphabet = data.alphabet
        # symbol id -> per-sequence sorted distinct event times
        self.times_by_type: dict[int, list[list[int]]] = {}
        # per-sequence: time -> set of symbol ids present at that time
        self.types_at_time: list[dict[int, set[int]]] = []
        for seq_idx, seq in enumerate(data.sequences):
            at_time: dict[int, set[int]] = {}
            for ev in seq:
                at_time.setdefault(ev.time, set()).add(ev.event_type)
                per_seq = self.times_by_type.setdefault(
                    ev.event_type, [[] for _ in range(data.n_sequences)]
                )
                times = per_seq[seq_idx]
                if not times or times[-1] != ev.time:
                    times.append(ev.time)
            self.types_at_time.append(at_time)

    def present_symbols(self) -> list[int]:
        return sorted(self.times_by_type)


class _PathBest:
    """Running best episode on the current root-to-node path.

    Ties prefer the longer episode, then the lexicographically smaller
    canonical string, so DFS output is deterministic.
    """

    __slots__ = ("candidate",)

    def __init__(self, candidate: Candidate | None = None) -> None:
        self.candidate = candidate

    def consider(self, cand: Candidate) -> "_PathBest":
        best = self.candidate
        if best is None:
            return _PathBest(cand)
        cand_rank = (cand.score, cand.episode.length)
        best_rank = (best.score, best.episode.length)
        if cand_rank > best_rank or (cand_rank == best_rank and cand.key < best.key):
            return _PathBest(cand)
        return self


def _dfs_root(
    index: _DataIndex, root_type: int, max_gap: int, mode: FrequencyMode
) -> dict[str, Candidate]:
    """Explore one root's subtree and collect the best episode per path."""
    alphabet = index.alphabet
    emitted: dict[str, Candidate] = {}

    def visit(
        symbols: tuple[str, ...],
        type_ids: tuple[int, ...],
        ep_span: int,
        distinct: tuple[tuple[int, ...], ...],
        gaps: tuple[int, ...],
        best: _PathBest,
    ) -> None:
        episode = FixedIntervalEpisode(symbols, gaps)
        occ = OccurrenceList(episode, distinct)
        if mode is FrequencyMode.NON_OVERLAPPED:
            occ = find_no_occurrences(occ)
        f = occ.total
        best = best.consider(Candidate(episode, occ, f, score(episode, f)))

        children: dict[tuple[int, int], list[list[int]]] = {}
        if f > _PRUNE_FREQUENCY and len(symbols) < alphabet.size:
            used = set(type_ids)
            # Gather extensions from events actually present at reachable
            # offsets instead of probing the whole alphabet blindly.
            for seq_idx, seq_starts in enumerate(distinct):
                at_time = index.types_at_time[seq_idx]
                for t in seq_starts:
                    end = t + ep_span
                    for delta in range(1, max_gap + 1):
                        for sym_id in at_time.get(end + delta, ()):
                            if sym_id in used:
                                continue
                            per_seq = children.setdefault(
                                (sym_id, delta),
                                [[] for _ in range(len(distinct))],
                            )
                            per_seq[seq_idx].append(t)

        explored = False
        for sym_id, delta in sorted(
            children, key=lambda c: (alphabet.name(c[0]), c[1])
        ):
            child_distinct = tuple(tuple(s) for s in children[(sym_id, delta)])
            child_gaps = gaps + (delta,)
            child_symbols = symbols + (alphabet.name(sym_id),)
            child_occ = OccurrenceList(
                FixedIntervalEpisode(child_symbols, child_gaps), child_distinct
            )
            child_f = (
                find_no_occurrences(child_occ).total
                if mode is FrequencyMode.NON_OVERLAPPED
                else child_occ.total
            )
            if child_f <= _PRUNE_FREQUENCY:
                continue
            explored = True
            visit(
                child_symbols,
                type_ids + (sym_id,),
                ep_span + delta,
                child_distinct,
                child_gaps,
                best,
            )
        if not explored:
            # Leaf of the explored tree: emit this path's best episode.
            assert best.candidate is not None
            emitted.setdefault(best.candidate.key, best.candidate)

    root_starts = tuple(tuple(times) for times in index.times_by_type[root_type])
    visit((alphabet.name(root_type),), (root_type,), 0, root_starts, (), _PathBest())
    return emitted


def generate_candidates(
    data: EventDataset,
    max_gap: int,
    mode: FrequencyMode = FrequencyMode.NON_OVERLAPPED,
) -> CandidateSet:
    """DFS the episode lattice and return the per-path best episodes.

    Subtrees rooted at different symbols are independent; when the
    EPISODESEQ_THREADS environment variable allows more than one worker
    they run in a thread pool, and results are merged in canonical order
    either way.
    """
    if max_gap < 1:
        raise ValueError("max_gap must be >= 1")
    index = _DataIndex(data)
    roots = index.present_symbols()
    merged: dict[str, Candidate] = {}
    workers = int(os.environ.get("EPISODESEQ_THREADS", "1") or "1")
    if workers > 1 and len(roots) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for emitted in pool.map(
                lambda r: _dfs_root(index, r, max_gap, mode), roots
            ):
                for key, cand in emitted.items():
                    merged.setdefault(key, cand)
    else:
        for root_type in roots:
            for key, cand in _dfs_root(index, root_type, max_gap, mode).items():
                merged.setdefault(key, cand)
    ordered = tuple(merged[key] for key in sorted(merged))
    return CandidateSet(ordered, max_gap, mode)
