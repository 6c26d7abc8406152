"""Delexicalization modes and n-gram extraction."""

from __future__ import annotations

import random
from collections import Counter

import pytest

from transvar.corpus import Token, parse_vertical
from transvar.errors import OrderOutOfRangeError
from transvar.representation import (
    MODES,
    NOUN_TAGS,
    PLACEHOLDER,
    check_mode,
    check_order,
    clean_value,
    delexicalize,
    extract_ngrams,
    featurize_instance,
    merge_features,
    ngram_key,
    parse_ngram_key,
)

from conftest import make_instance, make_tokens


@pytest.fixture
def german_sentence(sample_text):
    return parse_vertical(sample_text)[0].sentences[0]


class TestDelexicalize:
    def test_pos_mode(self, german_sentence):
        assert delexicalize(german_sentence, "POS") == [
            "ART", "ADJA", "NN", "APPRART", "NN", "ART", "NN", "VVFIN", "$.",
        ]

    def test_semi_mode_collapses_nouns(self, german_sentence):
        assert delexicalize(german_sentence, "SEMI") == [
            "Die", "weltweiten", PLACEHOLDER, "im", PLACEHOLDER,
            "der", PLACEHOLDER, "steigen", ".",
        ]

    def test_lex_mode_keeps_surface(self, german_sentence):
        values = delexicalize(german_sentence, "LEX")
        assert values[0] == "Die"
        assert values == [t.form for t in german_sentence]

    def test_proper_nouns_also_collapse(self):
        tokens = (Token("Berlin", "NE", "Berlin"), Token("liegt", "VVFIN", "liegen"))
        assert delexicalize(tokens, "SEMI") == [PLACEHOLDER, "liegt"]
        assert NOUN_TAGS == {"NN", "NE"}

    def test_pos_output_drawn_from_input_tags(self):
        rng = random.Random(1)
        tags = ["ART", "NN", "VVFIN", "$.", "ADJA"]
        for _ in range(50):
            chosen = [rng.choice(tags) for _ in range(rng.randint(1, 15))]
            tokens = make_tokens(chosen)
            assert set(delexicalize(tokens, "POS")) <= set(chosen)

    def test_semi_idempotent(self, german_sentence):
        once = delexicalize(german_sentence, "SEMI")
        as_tokens = tuple(Token(v, "XY", v) for v in once)
        assert delexicalize(as_tokens, "SEMI") == once

    def test_case_preserved(self):
        tokens = (Token("Die", "ART", "die"),)
        assert delexicalize(tokens, "LEX") == ["Die"]

    def test_whitespace_replaced(self):
        tokens = (Token("New York", "NE", "New York"),)
        assert delexicalize(tokens, "LEX") == ["New_York"]
        assert clean_value("a\tb c") == "a_b_c"

    def test_empty_value_rejected(self):
        with pytest.raises(ValueError):
            clean_value("")

    def test_bad_mode(self):
        with pytest.raises(ValueError, match="mode"):
            delexicalize((), "pos")
        assert MODES == ("LEX", "SEMI", "POS")
        assert check_mode("POS") == "POS"


class TestExtractNgrams:
    def test_counts_are_multisets(self):
        grams = extract_ngrams(["A", "B", "A", "B"], 2)
        assert grams == Counter({("A", "B"): 2, ("B", "A"): 1})

    def test_twelve_tokens_ten_trigrams(self):
        grams = extract_ngrams(["T"] * 12, 3)
        assert sum(grams.values()) == 10

    def test_single_token_unigram(self):
        assert extract_ngrams(["T"], 1) == Counter({("T",): 1})

    def test_short_sequence_empty(self):
        assert extract_ngrams(["A", "B"], 4) == Counter()
        assert extract_ngrams([], 1) == Counter()

    def test_length_law(self):
        rng = random.Random(7)
        for _ in range(200):
            seq = [rng.choice("ABC") for _ in range(rng.randint(0, 12))]
            n = rng.randint(1, 4)
            grams = extract_ngrams(seq, n)
            assert sum(grams.values()) == max(0, len(seq) - n + 1)

    @pytest.mark.parametrize("order", [0, 5, -1, 2.5, True])
    def test_order_out_of_range(self, order):
        with pytest.raises(OrderOutOfRangeError):
            check_order(order)

    def test_no_cross_sentence_windows(self):
        sentences = [["A", "B", "C"], ["D", "E", "F"]]
        merged = merge_features(extract_ngrams(s, 2) for s in sentences)
        assert ("C", "D") not in merged
        assert sum(merged.values()) == 4


class TestFeaturize:
    def test_composition_equality(self, german_sentence):
        inst = make_instance(["ART", "NN", "VVFIN"])
        for mode in MODES:
            for n in (1, 2, 3):
                direct = featurize_instance(inst, mode, n)
                composed = extract_ngrams(delexicalize(inst.tokens, mode), n)
                assert direct == composed

    def test_accepts_bare_tokens(self, german_sentence):
        assert featurize_instance(german_sentence, "POS", 2) == featurize_instance(
            make_instance([t.pos for t in german_sentence]), "POS", 2
        )


class TestCanonicalKey:
    def test_join_and_parse(self):
        gram = ("ART", "NN", "$.")
        assert ngram_key(gram) == "ART NN $."
        assert parse_ngram_key("ART NN $.") == gram

    def test_round_trip_random(self):
        rng = random.Random(3)
        parts = ["ART", "NN", "VVFIN", "$.", "PLH", "Wort"]
        for _ in range(100):
            gram = tuple(rng.choice(parts) for _ in range(rng.randint(1, 4)))
            assert parse_ngram_key(ngram_key(gram)) == gram

    @pytest.mark.parametrize("bad", ["", " ", "A  B", " A", "A "])
    def test_bad_keys_rejected(self, bad):
        with pytest.raises(ValueError):
            parse_ngram_key(bad)
