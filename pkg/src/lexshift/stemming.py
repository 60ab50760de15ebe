"""Suffix-stripping stemmer used by the verb-candidate agreement filter."""

from dataclasses import dataclass


@dataclass(frozen=True)
class SuffixStemmer:
    """Strips the longest known inflectional suffix, keeping a minimum stem."""

    suffixes: tuple[str, ...]
    min_stem: int = 3

    def split(self, token: str) -> tuple[str, str]:
        """(stem, suffix); suffix is "" when nothing recognized."""
        for suffix in sorted(self.suffixes, key=len, reverse=True):
            if token.endswith(suffix) and len(token) - len(suffix) >= self.min_stem:
                return token[: -len(suffix)], suffix
        return token, ""

    def stem(self, token: str) -> str:
        return self.split(token)[0]

    def reinflect(self, candidate: str, suffix: str) -> str:
        """Transplant an inflectional suffix onto a candidate's stem.

        Approximates tense/form agreement: "shut" + "ed" -> "shutted" style
        errors are accepted; no spelling rules are applied.
        """
        if not suffix:
            return candidate
        stem, _ = self.split(candidate)
        return stem + suffix


ENGLISH_VERB_SUFFIXES = ("ing", "ied", "ies", "ed", "es", "s")


def english_stemmer() -> SuffixStemmer:
    return SuffixStemmer(suffixes=ENGLISH_VERB_SUFFIXES)


def persian_stemmer() -> SuffixStemmer:
    # Suffix table intentionally empty: stemming is a no-op until a Persian
    # inflection inventory is supplied.
    return SuffixStemmer(suffixes=())
