import pytest

from lexshift.errors import ParseError, ValidationError
from lexshift.stemming import english_stemmer, persian_stemmer
from lexshift.tagging import (
    ADJ_ADV,
    ALL_CONTENT,
    LexiconTagger,
    PosTag,
    TagScope,
    detect_representatives,
    load_lexicon,
    save_lexicon,
    tag,
)


class TestTag:
    def test_lookup_with_default(self):
        tagger = LexiconTagger({"salty": PosTag.ADJECTIVE})
        assert tag(tagger, ["pizza", "salty"]) == [PosTag.OTHER, PosTag.ADJECTIVE]

    def test_empty_tokens(self):
        assert tag(LexiconTagger({}), []) == []

    def test_output_length_matches(self):
        tagger = LexiconTagger({"a": PosTag.NOUN})
        tokens = ["a", "b", "a", "c"]
        assert len(tag(tagger, tokens)) == len(tokens)


class TestDetectRepresentatives:
    def test_filter(self):
        tags = [PosTag.OTHER, PosTag.ADJECTIVE, PosTag.ADVERB]
        assert detect_representatives(tags, TagScope.of(PosTag.ADJECTIVE)) == [1]

    def test_empty_when_all_other(self):
        assert detect_representatives([PosTag.OTHER] * 4, ALL_CONTENT) == []

    def test_wider_scope_is_superset(self):
        tags = [
            PosTag.ADJECTIVE, PosTag.NOUN, PosTag.VERB,
            PosTag.OTHER, PosTag.ADVERB, PosTag.NOUN,
        ]
        narrow = set(detect_representatives(tags, ADJ_ADV))
        wide = set(detect_representatives(tags, ALL_CONTENT))
        assert narrow <= wide

    def test_ascending_order(self):
        tags = [PosTag.NOUN, PosTag.OTHER, PosTag.NOUN, PosTag.VERB]
        positions = detect_representatives(tags, ALL_CONTENT)
        assert positions == sorted(positions) == [0, 2, 3]


class TestTagScope:
    def test_parse(self):
        scope = TagScope.parse("adj,adv,verb,noun")
        assert scope.included == ALL_CONTENT.included

    def test_parse_rejects_unknown(self):
        with pytest.raises(ValidationError):
            TagScope.parse("adj,banana")

    def test_empty_rejected(self):
        with pytest.raises(ValidationError):
            TagScope(frozenset())

    def test_other_rejected(self):
        with pytest.raises(ValidationError):
            TagScope.of(PosTag.OTHER)


class TestLexiconFile:
    def test_round_trip(self, tmp_path):
        lexicon = {"quick": PosTag.ADJECTIVE, "ran": PosTag.VERB, "dog": PosTag.NOUN}
        path = tmp_path / "lex.tsv"
        save_lexicon(lexicon, path)
        tagger = load_lexicon(path)
        assert tagger.lexicon == lexicon

    def test_comments_and_errors(self, tmp_path):
        path = tmp_path / "lex.tsv"
        path.write_text("# comment\nquick\tADJ\n")
        assert load_lexicon(path).lexicon == {"quick": PosTag.ADJECTIVE}
        path.write_text("quick\tSTRANGE\n")
        with pytest.raises(ParseError, match="STRANGE"):
            load_lexicon(path)
        path.write_text("quick\tADJ\nquick\tNOUN\n")
        with pytest.raises(ParseError, match="duplicate"):
            load_lexicon(path)


class TestStemmer:
    def test_shared_stem_detected(self):
        stemmer = english_stemmer()
        assert stemmer.stem("closed") == stemmer.stem("closing") == "clos"

    def test_split_and_reinflect(self):
        stemmer = english_stemmer()
        assert stemmer.split("closed") == ("clos", "ed")
        assert stemmer.split("shut") == ("shut", "")
        assert stemmer.reinflect("shutting", "ed") == "shutted"
        assert stemmer.reinflect("walk", "") == "walk"

    def test_min_stem_guard(self):
        # "sing" must not be stripped to "s"
        assert english_stemmer().stem("sing") == "sing"

    def test_persian_stub_is_identity(self):
        stemmer = persian_stemmer()
        assert stemmer.split("word") == ("word", "")
