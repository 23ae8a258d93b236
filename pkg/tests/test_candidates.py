import random

import pytest

from episodeseq import (
    EventDataset,
    FrequencyMode,
    find_distinct_starts,
    find_no_occurrences,
    generate_candidates,
    parse_episode,
    score,
)
from oracles import fixed_interval_starts, random_planted_dataset, raw_events


def test_candidates_contain_frequent_episode(sample_data):
    # brute-force enumeration over sequence (the sorted raw scan) shows
    # A -2-> B -1-> C has two distinct starts; the DFS must surface it
    ep = parse_episode("A -2-> B -1-> C")
    assert len(fixed_interval_starts(raw_events(sample_data), ep.event_types, ep.gaps)) == 2
    cands = generate_candidates(sample_data, 2, FrequencyMode.DISTINCT)
    by_key = {c.key: c for c in cands}
    assert "A -2-> B -1-> C" in by_key
    assert by_key["A -2-> B -1-> C"].frequency == 2


def test_candidates_empty_dataset():
    data = EventDataset.from_tuples([[(1, "A")]])
    empty = EventDataset(((),), data.alphabet)
    assert len(generate_candidates(empty, 3)) == 0


def test_candidates_single_type_no_multinode():
    data = EventDataset.from_tuples([[(t, "A") for t in range(1, 9)]])
    cands = generate_candidates(data, 3)
    assert all(c.episode.length == 1 for c in cands)


def test_frequency_antimonotone_along_extensions():
    rng = random.Random(5)
    for _ in range(30):
        data, _ = random_planted_dataset(rng)
        symbols = data.alphabet.symbols
        a, b = rng.sample(symbols, 2)
        gap = rng.randint(1, 3)
        parent = find_distinct_starts(data, parse_episode(a))
        child = find_distinct_starts(data, parse_episode(f"{a} -{gap}-> {b}"))
        assert child.total <= parent.total
        # and the non-overlapped frequency shrinks as well
        assert (
            find_no_occurrences(child).total <= find_no_occurrences(parent).total
        )


@pytest.mark.parametrize("n", range(1, 11))
@pytest.mark.parametrize("f", [0, 1, 2])
def test_prune_rule_is_score_barren(n, f):
    # frequency <= 2 gives score N(f-2) - (f+1) <= -3 for every length
    ep = parse_episode(" -1-> ".join(chr(ord("A") + k) for k in range(n)))
    assert score(ep, f) <= -3


def test_candidate_occurrences_verify_against_recomputation():
    rng = random.Random(9)
    for mode in FrequencyMode:
        for _ in range(10):
            data, _ = random_planted_dataset(rng)
            for cand in generate_candidates(data, 2, mode):
                occ = find_distinct_starts(data, cand.episode)
                if mode is FrequencyMode.NON_OVERLAPPED:
                    occ = find_no_occurrences(occ)
                assert cand.occurrences.starts == occ.starts
                assert cand.frequency == occ.total
                assert cand.score == score(cand.episode, occ.total)


def test_candidates_deterministic_and_thread_invariant(monkeypatch):
    rng = random.Random(13)
    data, _ = random_planted_dataset(rng, n_repetitions=8)
    first = generate_candidates(data, 2)
    second = generate_candidates(data, 2)
    assert [c.key for c in first] == [c.key for c in second]
    monkeypatch.setenv("EPISODESEQ_THREADS", "4")
    threaded = generate_candidates(data, 2)
    assert [(c.key, c.frequency, c.score) for c in threaded] == [
        (c.key, c.frequency, c.score) for c in first
    ]


def test_best_per_path_suppresses_dominated_prefixes():
    # five clean repetitions: the full episode dominates its own DFS path,
    # so the 2-node prefix (same path) is not emitted
    seq = [(t, s) for k in range(5) for t, s in ((3 * k + 1, "A"), (3 * k + 2, "B"), (3 * k + 3, "C"))]
    data = EventDataset.from_tuples([seq])
    keys = {c.key for c in generate_candidates(data, 2)}
    assert "A -1-> B -1-> C" in keys
    assert "A -1-> B" not in keys


def test_candidates_sorted_canonically(sample_data):
    cands = generate_candidates(sample_data, 2)
    keys = [c.key for c in cands]
    assert keys == sorted(keys)


def test_max_gap_validation(sample_data):
    with pytest.raises(ValueError):
        generate_candidates(sample_data, 0)
