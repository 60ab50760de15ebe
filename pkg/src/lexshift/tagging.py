"""Part-of-speech tagging behind a minimal pluggable interface.

A lexicon tagger (TSV: token<TAB>ADJ|ADV|VERB|NOUN) stands in for full
statistical taggers; the transfer engine only depends on the `Tagger`
protocol, so richer taggers can be dropped in later.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Protocol, Sequence

from .errors import ParseError, ValidationError


class PosTag(Enum):
    ADJECTIVE = "ADJ"
    ADVERB = "ADV"
    VERB = "VERB"
    NOUN = "NOUN"
    OTHER = "OTHER"


_TAG_ALIASES = {
    "adj": PosTag.ADJECTIVE,
    "adv": PosTag.ADVERB,
    "verb": PosTag.VERB,
    "noun": PosTag.NOUN,
}


@dataclass(frozen=True)
class TagScope:
    """The set of tags whose tokens count as style representatives."""

    included: frozenset

    def __post_init__(self):
        if not self.included:
            raise ValidationError("tag scope cannot be empty")
        if PosTag.OTHER in self.included:
            raise ValidationError("tag scope cannot include OTHER")

    def __contains__(self, tag: PosTag) -> bool:
        return tag in self.included

    @classmethod
    def of(cls, *tags: PosTag) -> "TagScope":
        return cls(frozenset(tags))

    @classmethod
    def parse(cls, spec: str) -> "TagScope":
        """Parse a CLI-style scope such as "adj,adv,verb,noun"."""
        tags = set()
        for name in spec.split(","):
            name = name.strip().lower()
            if not name:
                continue
            if name not in _TAG_ALIASES:
                raise ValidationError(
                    f"unknown tag {name!r}; expected one of {sorted(_TAG_ALIASES)}"
                )
            tags.add(_TAG_ALIASES[name])
        return cls(frozenset(tags))


ADJ_ADV = TagScope.of(PosTag.ADJECTIVE, PosTag.ADVERB)
ADJ_ADV_VERB = TagScope.of(PosTag.ADJECTIVE, PosTag.ADVERB, PosTag.VERB)
ALL_CONTENT = TagScope.of(PosTag.ADJECTIVE, PosTag.ADVERB, PosTag.VERB, PosTag.NOUN)


class Tagger(Protocol):
    def tag(self, tokens: Sequence[str]) -> list[PosTag]: ...


class LexiconTagger:
    """Total lookup tagger: tokens absent from the lexicon are OTHER."""

    def __init__(self, lexicon: dict[str, PosTag]):
        bad = {t: g for t, g in lexicon.items() if g is PosTag.OTHER}
        if bad:
            raise ValidationError(f"lexicon entries may not map to OTHER: {sorted(bad)[:5]!r}")
        self.lexicon = dict(lexicon)

    def tag(self, tokens: Sequence[str]) -> list[PosTag]:
        return [self.lexicon.get(tok, PosTag.OTHER) for tok in tokens]


def tag(tagger: Tagger, tokens: Sequence[str]) -> list[PosTag]:
    tags = tagger.tag(tokens)
    if len(tags) != len(tokens):
        raise ValidationError(
            f"tagger returned {len(tags)} tags for {len(tokens)} tokens"
        )
    return tags


def detect_representatives(tags: Sequence[PosTag], scope: TagScope) -> list[int]:
    """Ascending positions whose tag falls inside the scope."""
    return [i for i, t in enumerate(tags) if t in scope]


def load_lexicon(path) -> LexiconTagger:
    """TSV token<TAB>tag with tag in {ADJ, ADV, VERB, NOUN}; '#' comments."""
    lexicon = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ParseError("expected token<TAB>tag", path, line_no)
            token, tag_name = parts
            if token in lexicon:
                raise ParseError(f"duplicate lexicon token {token!r}", path, line_no)
            try:
                pos = PosTag(tag_name)
            except ValueError:
                raise ParseError(f"unknown tag {tag_name!r}", path, line_no) from None
            if pos is PosTag.OTHER:
                raise ParseError("OTHER is implicit, not a lexicon tag", path, line_no)
            lexicon[token] = pos
    return LexiconTagger(lexicon)


def save_lexicon(lexicon: dict[str, PosTag], path):
    from .fileio import atomic_write

    with atomic_write(path) as fh:
        for token in sorted(lexicon):
            fh.write(f"{token}\t{lexicon[token].value}\n")
