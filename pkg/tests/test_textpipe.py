import io
import math

import numpy as np
import pytest

from episodeseq import (
    Corpus,
    FrequencyMode,
    PreprocessOptions,
    build_dictionary_I,
    build_dictionary_II,
    compute_idf,
    corpus_to_events,
    evaluate,
    forced_selection,
    load_corpus,
    load_corpus_dir,
    load_dictionary,
    metrics_csv,
    mine_dictionary,
    parse_episode,
    predict,
    preprocess,
    save_corpus,
    save_dictionary,
    tfidf,
    train_nb,
)
from episodeseq.datasets import make_two_class_corpus


def corpus_of(docs, labels, names=("neg", "pos"), split="train"):
    return Corpus(tuple(tuple(d.split()) for d in docs), tuple(labels), names, split)


def test_preprocess_drops_short_tokens():
    assert preprocess("The plot, a MESS!") == ["the", "plot", "mess"]


def test_preprocess_empty():
    assert preprocess("") == []


def test_preprocess_keeps_and_the_without_stopwords():
    options = PreprocessOptions(lowercase=True, min_len=3, stopwords=frozenset())
    assert preprocess("and the", options) == ["and", "the"]


def test_preprocess_applies_stopwords_and_case():
    options = PreprocessOptions(lowercase=False, min_len=2, stopwords=frozenset({"of"}))
    assert preprocess("Of of THE cat", options) == ["Of", "THE", "cat"]


def test_corpus_to_events_positions():
    corpus = corpus_of(["a b c d e", "f g h i j"], [0, 1])
    data = corpus_to_events(corpus)
    assert data.n_sequences == 2
    for seq in data.sequences:
        assert [ev.time for ev in seq] == [1, 2, 3, 4, 5]


def test_corpus_to_events_repeated_token():
    corpus = corpus_of(["aa bb aa"], [0])
    data = corpus_to_events(corpus)
    assert [(ev.time, data.event_name(ev)) for ev in data.sequences[0]] == [
        (1, "aa"),
        (2, "bb"),
        (3, "aa"),
    ]


def test_dictionary_ii_from_selection():
    corpus = corpus_of(["aa bb cc bb dd"], [0])
    data = corpus_to_events(corpus)
    selection = forced_selection(
        data,
        [parse_episode("aa -1-> bb -2-> dd"), parse_episode("bb -1-> cc")],
        FrequencyMode.DISTINCT,
    )
    d2 = build_dictionary_II(selection)
    assert set(d2.words) == {"aa", "bb", "cc", "dd"}
    assert d2.provenance == "II"


def test_dictionary_ii_empty_warns():
    corpus = corpus_of(["aa bb"], [0])
    data = corpus_to_events(corpus)
    selection = forced_selection(data, [parse_episode("aa")])
    with pytest.warns(UserWarning):
        d2 = build_dictionary_II(selection)
    assert len(d2) == 0


def test_dictionary_ii_subset_of_dictionary_i():
    train, _ = make_two_class_corpus(n_train=60, n_test=10)
    d1 = build_dictionary_I(train)
    d2, _ = mine_dictionary(train, max_gap=3)
    assert set(d2.words) <= set(d1.words)


def test_idf_formula():
    corpus = corpus_of(["w x", "w y", "w z"], [0, 0, 1])
    d = build_dictionary_I(corpus)
    idf = compute_idf(corpus, d)
    assert idf[d.id_of("w")] == pytest.approx(1.0)  # in every document
    assert idf[d.id_of("x")] == pytest.approx(math.log(4 / 2) + 1)


def test_tfidf_rows_unit_norm():
    corpus = corpus_of(["w w x y", "x z z z", "w"], [0, 1, 0])
    d = build_dictionary_I(corpus)
    features = tfidf(corpus, d)
    norms = np.sqrt(
        np.asarray(features.matrix.multiply(features.matrix).sum(axis=1))
    ).ravel()
    assert np.allclose(norms, 1.0, atol=1e-12)


def test_tfidf_uses_train_df_for_test():
    train = corpus_of(["w x", "w y"], [0, 1])
    test = corpus_of(["w w"], [0], split="test")
    d = build_dictionary_I(train)
    idf = compute_idf(train, d)
    out = tfidf(test, d, idf)
    # single-word document: unit mass on w regardless of idf scale
    assert out.matrix[0, d.id_of("w")] == pytest.approx(1.0)
    # but the raw weight reflects the training idf, not the test df
    raw = tfidf(test, d, idf, weighting="binary")
    assert raw.matrix[0, d.id_of("w")] == 1.0


def test_tfidf_document_order_invariance():
    docs = ["w x y", "x z", "w w z"]
    c1 = corpus_of(docs, [0, 1, 0])
    c2 = corpus_of(list(reversed(docs)), [0, 1, 0])
    d = build_dictionary_I(c1)
    m1 = tfidf(c1, d).matrix.toarray()
    m2 = tfidf(c2, d).matrix.toarray()
    assert np.allclose(m1, m2[::-1])


def test_binary_weighting_is_zero_one():
    corpus = corpus_of(["w w x", "y"], [0, 1])
    d = build_dictionary_I(corpus)
    features = tfidf(corpus, d, weighting="binary")
    assert set(np.unique(features.matrix.toarray())) <= {0.0, 1.0}


def test_projection_never_increases_unnormalized_norm():
    train, _ = make_two_class_corpus(n_train=40, n_test=10)
    d1 = build_dictionary_I(train)
    idf1 = compute_idf(train, d1)
    d2, _ = mine_dictionary(train, max_gap=3)
    if len(d2) == 0:
        pytest.skip("no mined dictionary on this tiny split")
    idf2 = compute_idf(train, d2)

    def raw_norms(dictionary, idf):
        rows = []
        for doc in train.documents:
            weights = {}
            for tok in doc:
                if tok in dictionary:
                    weights[tok] = weights.get(tok, 0) + 1
            rows.append(
                math.sqrt(
                    sum(
                        (count * idf[dictionary.id_of(tok)]) ** 2
                        for tok, count in weights.items()
                    )
                )
            )
        return rows

    for n1, n2 in zip(raw_norms(d1, idf1), raw_norms(d2, idf2)):
        assert n2 <= n1 + 1e-12


def test_nb_separable_corpus_is_perfect():
    train = corpus_of(["cat cat purr", "cat purr", "dog bark", "dog dog bark"], [0, 0, 1, 1])
    test = corpus_of(["purr cat", "bark dog"], [0, 1], split="test")
    d = build_dictionary_I(train)
    idf = compute_idf(train, d)
    model = train_nb(tfidf(train, d, idf), train.labels)
    metrics = evaluate(predict(model, tfidf(test, d, idf)), test.labels)
    assert metrics["accuracy"] == 1.0 and metrics["macro_f"] == 1.0


def test_nb_memorizes_single_doc_per_class():
    train = corpus_of(["alpha beta", "gamma delta"], [0, 1])
    d = build_dictionary_I(train)
    idf = compute_idf(train, d)
    features = tfidf(train, d, idf)
    model = train_nb(features, train.labels)
    assert evaluate(predict(model, features), train.labels)["accuracy"] == 1.0


def test_evaluate_constant_predictor():
    metrics = evaluate([0, 0, 0, 0], [0, 0, 1, 1])
    assert metrics["accuracy"] == 0.5
    assert metrics["macro_f"] == pytest.approx(1 / 3)


def test_evaluate_rejects_empty_or_mismatched():
    with pytest.raises(ValueError):
        evaluate([], [])
    with pytest.raises(ValueError):
        evaluate([0], [0, 1])


def test_nb_invariant_to_all_zero_column():
    train = corpus_of(["w x w", "y z", "w x", "z y y"], [0, 0, 1, 1])
    test = corpus_of(["w x x", "y z z"], [0, 1], split="test")
    d_small = build_dictionary_I(train)
    d_big = type(d_small)(d_small.words + ("unused",), "I")
    preds = []
    for d in (d_small, d_big):
        idf = compute_idf(train, d)
        model = train_nb(tfidf(train, d, idf), train.labels)
        preds.append(predict(model, tfidf(test, d, idf)).tolist())
    assert preds[0] == preds[1]


def test_predict_rejects_dimension_mismatch():
    train = corpus_of(["w x", "y z"], [0, 1])
    d = build_dictionary_I(train)
    model = train_nb(tfidf(train, d), train.labels)
    other = type(d)(("w",), "II")
    with pytest.raises(ValueError):
        predict(model, tfidf(train, other))


def test_corpus_file_roundtrip():
    corpus = corpus_of(["aa bb", "cc dd"], [0, 1])
    out = io.StringIO()
    save_corpus(corpus, out)
    again = load_corpus(io.StringIO(out.getvalue()))
    assert again.documents == corpus.documents
    assert again.labels == corpus.labels
    assert again.label_names == corpus.label_names


def test_corpus_dir_layout(tmp_path):
    for cls, text in (("spam", "Buy NOW buy"), ("ham", "hello old friend")):
        d = tmp_path / "train" / cls
        d.mkdir(parents=True)
        (d / "doc0.txt").write_text(text, "utf-8")
    corpus = load_corpus_dir(tmp_path, "train")
    assert corpus.label_names == ("ham", "spam")
    assert corpus.documents == (("hello", "old", "friend"), ("buy", "now", "buy"))


def test_dictionary_file_roundtrip():
    d = load_dictionary(io.StringIO("aa\nbb\n"), provenance="II")
    assert d.words == ("aa", "bb")
    out = io.StringIO()
    save_dictionary(d, out)
    assert out.getvalue() == "aa\nbb\n"


def test_metrics_csv_format():
    text = metrics_csv([("I", "naive-bayes", 0.9125, 0.9)])
    assert text == "dictionary,classifier,accuracy,macro_f\nI,naive-bayes,0.912500,0.900000\n"
