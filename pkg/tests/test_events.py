import io

import pytest
from hypothesis import given
from hypothesis import strategies as st

from episodeseq import (
    Alphabet,
    DataValidationError,
    EpisodeSyntaxError,
    Event,
    EventDataset,
    FixedIntervalEpisode,
    SerialEpisode,
    dump_events,
    format_episode,
    load_events,
    parse_episode,
    parse_serial_episode,
    span,
)


@pytest.mark.parametrize(
    "text,expected",
    [
        ("A -2-> B -1-> C", 3),
        ("C", 0),
        ("D -2-> E -2-> C", 4),
    ],
)
def test_span(text, expected):
    assert span(parse_episode(text)) == expected


def test_parse_episode_basic():
    ep = parse_episode("A -2-> B -1-> C")
    assert ep.event_types == ("A", "B", "C")
    assert ep.gaps == (2, 1)
    assert parse_episode("C").event_types == ("C",)
    assert parse_episode("C").gaps == ()


def test_parse_episode_rejects_zero_gap():
    with pytest.raises(EpisodeSyntaxError):
        parse_episode("A -0-> B")


def test_parse_episode_rejects_duplicates():
    with pytest.raises(DataValidationError):
        parse_episode("A -2-> A")


def test_parse_episode_rejects_garbage():
    for bad in ("", "A -x-> B", "A ->", "-1-> A"):
        with pytest.raises((EpisodeSyntaxError, DataValidationError)):
            parse_episode(bad)


def test_parse_episode_checks_alphabet():
    alphabet = Alphabet(("A", "B"))
    parse_episode("A -1-> B", alphabet)
    with pytest.raises(KeyError):
        parse_episode("A -1-> Z", alphabet)


def test_parse_serial_episode():
    ep = parse_serial_episode("A -> B -> C")
    assert ep.event_types == ("A", "B", "C")
    with pytest.raises(EpisodeSyntaxError):
        parse_serial_episode("A -> -> B")


_symbol = st.text(alphabet="abcdefgXYZ09", min_size=1, max_size=4)


@st.composite
def episodes(draw):
    n = draw(st.integers(1, 5))
    symbols = draw(
        st.lists(_symbol, min_size=n, max_size=n, unique=True)
    )
    gaps = draw(st.lists(st.integers(1, 9), min_size=n - 1, max_size=n - 1))
    return FixedIntervalEpisode(tuple(symbols), tuple(gaps))


@given(episodes())
def test_parse_format_roundtrip(episode):
    assert parse_episode(format_episode(episode)) == episode


@given(episodes())
def test_format_parse_identity_on_canonical(episode):
    text = format_episode(episode)
    assert format_episode(parse_episode(text)) == text


def test_fixed_interval_invariants():
    with pytest.raises(DataValidationError):
        FixedIntervalEpisode(("A", "B"), ())
    with pytest.raises(DataValidationError):
        FixedIntervalEpisode(("A", "B"), (0,))
    with pytest.raises(DataValidationError):
        FixedIntervalEpisode((), ())
    with pytest.raises(DataValidationError):
        SerialEpisode(("A", "A"))


def test_alphabet_invariants():
    with pytest.raises(DataValidationError):
        Alphabet(("A", "A"))
    with pytest.raises(DataValidationError):
        Alphabet(("A", ""))
    alphabet = Alphabet(("B", "A"))
    assert alphabet.size == 2
    assert alphabet.index("B") == 0
    assert alphabet.name(1) == "A"


def test_dataset_sorts_and_validates():
    alphabet = Alphabet(("A", "B"))
    data = EventDataset(((Event(1, 9), Event(0, 2), Event(1, 2)),), alphabet)
    times = [ev.time for ev in data.sequences[0]]
    assert times == sorted(times)
    # ties ordered by symbol name
    assert [data.event_name(ev) for ev in data.sequences[0]] == ["A", "B", "B"]
    with pytest.raises(DataValidationError):
        EventDataset(((Event(7, 1),),), alphabet)


def test_dataset_from_tuples_builds_sorted_alphabet():
    data = EventDataset.from_tuples([[(1, "z"), (2, "a")], [(5, "m")]])
    assert data.alphabet.symbols == ("a", "m", "z")
    assert data.n_sequences == 2
    assert data.n_events == 3


def test_event_file_roundtrip(sample_data):
    buffer = io.StringIO()
    dump_events(sample_data, buffer)
    again = load_events(io.StringIO(buffer.getvalue()))
    assert again == sample_data
    second = io.StringIO()
    dump_events(again, second)
    assert second.getvalue() == buffer.getvalue()


def test_event_file_multi_sequence():
    text = "1\tA\n2\tB\n\n3\tA\n"
    data = load_events(io.StringIO(text))
    assert data.n_sequences == 2
    assert [len(s) for s in data.sequences] == [2, 1]
    out = io.StringIO()
    dump_events(data, out)
    assert out.getvalue() == text


def test_event_file_rejects_bad_lines():
    with pytest.raises(DataValidationError):
        load_events(io.StringIO("1 A\n"))
    with pytest.raises(DataValidationError):
        load_events(io.StringIO("x\tA\n"))
