"""Word-list configuration: topic categories, verb lexicons, gender words.

All lists ship as editable .cfg files under ``litprop/data`` and can be
overridden per run from the CLI.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path


def _read_config(path_or_name) -> configparser.ConfigParser:
    parser = configparser.ConfigParser()
    if isinstance(path_or_name, (str, Path)) and Path(path_or_name).exists():
        with open(path_or_name, encoding="utf-8") as handle:
            parser.read_file(handle)
    else:
        text = resources.files("litprop.data").joinpath(str(path_or_name)).read_text(encoding="utf-8")
        parser.read_string(text)
    return parser


def _word_set(raw: str) -> frozenset[str]:
    return frozenset(w.strip().lower() for w in raw.replace("\n", " ").split(",") if w.strip())


@dataclass(frozen=True)
class TopicLexicon:
    """Category name to lowercased word set; tuples touching any set are kept."""

    categories: dict[str, frozenset[str]] = field(default_factory=dict)

    def __post_init__(self):
        if not self.categories or any(not words for words in self.categories.values()):
            raise ValueError("every topic category must contain at least one word")

    def all_words(self) -> frozenset[str]:
        out: set[str] = set()
        for words in self.categories.values():
            out |= words
        return frozenset(out)

    def category_of(self, word: str) -> str | None:
        lowered = word.lower()
        for name, words in self.categories.items():
            if lowered in words:
                return name
        return None


def load_topic_lexicon(path=None) -> TopicLexicon:
    parser = _read_config(path if path is not None else "topic_lexicon.cfg")
    categories = {}
    for section in parser.sections():
        words = _word_set(parser.get(section, "words", fallback=""))
        words |= _word_set(parser.get(section, "synonyms", fallback=""))
        categories[section] = frozenset(words)
    return TopicLexicon(categories)


def load_communication_verbs(path=None) -> frozenset[str]:
    parser = _read_config(path if path is not None else "communication_verbs.cfg")
    return _word_set(parser.get("verbs", "words"))


def load_report_verbs(path=None) -> frozenset[str]:
    parser = _read_config(path if path is not None else "report_verbs.cfg")
    return _word_set(parser.get("verbs", "words"))


@dataclass(frozen=True)
class GenderLexicon:
    female: frozenset[str]
    male: frozenset[str]

    @staticmethod
    def normalize(surface: str) -> str:
        return surface.lower().rstrip(".")

    def gendered(self) -> frozenset[str]:
        return self.female | self.male


def load_gender_lexicon(path=None) -> GenderLexicon:
    parser = _read_config(path if path is not None else "gender_words.cfg")
    return GenderLexicon(
        female=_word_set(parser.get("female", "words")),
        male=_word_set(parser.get("male", "words")),
    )
