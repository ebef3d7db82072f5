"""Deterministic normalization of free-text metadata fields.

Everything downstream (term matrices, trends, networks) counts *normalized*
terms, so this module fixes one canonical rule chain and applies it
everywhere:

    fold diacritics -> lowercase -> split on non-alphanumerics ->
    synonym mapping -> stopword removal -> minimum-length filter

Stopword and synonym lists are plain-text files, one entry per line;
synonym lines read ``variant=canonical``. Lists are canonicalized on load so
matching is fold-consistent regardless of how the file was written.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING, Iterable, Mapping

if TYPE_CHECKING:  # pragma: no cover
    from .corpus import BibRecord

__all__ = [
    "ANALYSIS_FIELDS",
    "NormalizationConfig",
    "TermList",
    "derive_unigram_keywords",
    "fold",
    "keyword_term",
    "load_stopwords",
    "load_synonyms",
    "normalize",
    "norm_name",
    "norm_reference",
    "terms_for",
]

# Text fields an analysis may draw terms from.
ANALYSIS_FIELDS = ("title", "abstract", "author_keywords", "unigram_keywords")

_WS_RE = re.compile(r"\s+")
_SEP_RE = re.compile(r"[^0-9a-z]+")


def fold(text: str) -> str:
    """Fold diacritics to ASCII (NFKD decompose, drop marks and non-ASCII)."""
    decomposed = unicodedata.normalize("NFKD", text)
    stripped = "".join(ch for ch in decomposed if not unicodedata.combining(ch))
    return stripped.encode("ascii", "ignore").decode("ascii")


def collapse_ws(text: str) -> str:
    return _WS_RE.sub(" ", text).strip()


def norm_name(name: str) -> str:
    """Canonical person/group name: folded, lowercased, whitespace-collapsed."""
    return collapse_ws(fold(name).lower())


def norm_reference(ref: str) -> str:
    """Canonical reference string; identity for couplings is exact match."""
    return collapse_ws(fold(ref).lower())


@dataclass(frozen=True)
class NormalizationConfig:
    """Cleaning lists plus the two pipeline knobs.

    The synonym map must be acyclic: a variant never equals its canonical
    form and no canonical form appears as a variant key, so one mapping pass
    reaches a fixed point.
    """

    stopwords: frozenset[str] = frozenset()
    synonyms: Mapping[str, str] = field(default_factory=dict)
    fold_diacritics: bool = True
    min_token_length: int = 2

    def __post_init__(self) -> None:
        canon = self._canon
        stop = frozenset(canon(w) for w in self.stopwords if canon(w))
        syn = {}
        for variant, target in self.synonyms.items():
            v, t = canon(variant), canon(target)
            if not v or not t:
                continue
            if v == t:
                raise ValueError(f"synonym maps {v!r} to itself")
            syn[v] = t
        for target in syn.values():
            if target in syn:
                raise ValueError(f"synonym cycle: {target!r} is both variant and canonical")
        object.__setattr__(self, "stopwords", stop)
        object.__setattr__(self, "synonyms", syn)

    def _canon(self, text: str) -> str:
        if self.fold_diacritics:
            text = fold(text)
        return collapse_ws(text.lower())


DEFAULT_CONFIG = NormalizationConfig()


@dataclass(frozen=True)
class TermList:
    """Ordered normalized tokens extracted from one source field."""

    terms: tuple[str, ...]
    source_field: str = "title"


def _tokenize(text: str, config: NormalizationConfig) -> list[str]:
    if config.fold_diacritics:
        text = fold(text)
    return [t for t in _SEP_RE.split(text.lower()) if t]


def normalize(text: str, config: NormalizationConfig | None = None,
              source_field: str = "title") -> TermList:
    """Apply the full rule chain to free text, yielding normalized tokens.

    Synonym canonicals are re-split after mapping so a multi-word canonical
    cannot smuggle separators past the tokenizer; this keeps normalization
    idempotent at the string-join level.
    """
    config = config or DEFAULT_CONFIG
    out: list[str] = []
    for token in _tokenize(text, config):
        for mapped in _SEP_RE.split(config.synonyms.get(token, token)):
            if not mapped or mapped in config.stopwords:
                continue
            if len(mapped) < config.min_token_length:
                continue
            out.append(mapped)
    return TermList(terms=tuple(out), source_field=source_field)


def keyword_term(keyword: str, config: NormalizationConfig | None = None) -> str | None:
    """Normalize an author keyword as one whole term.

    Compound keywords stay intact ("dinamica de sistemas" is a single term;
    interior stopwords are kept). Synonyms match the whole keyword first,
    then token-by-token. Returns None when nothing survives.
    """
    config = config or DEFAULT_CONFIG
    tokens = _tokenize(keyword, config)
    if not tokens:
        return None
    joined = " ".join(tokens)
    if joined in config.synonyms:
        joined = config.synonyms[joined]
    else:
        joined = " ".join(config.synonyms.get(t, t) for t in tokens)
    if not joined or joined in config.stopwords:
        return None
    return joined


def _dedup(terms: Iterable[str]) -> list[str]:
    seen: set[str] = set()
    out: list[str] = []
    for t in terms:
        if t not in seen:
            seen.add(t)
            out.append(t)
    return out


def derive_unigram_keywords(record: "BibRecord",
                            config: NormalizationConfig | None = None) -> list[str]:
    """Split author keywords into unigrams, deduplicated in first-seen order.

    Used only when a record carries no explicit unigram keyword list.
    """
    config = config or DEFAULT_CONFIG
    unigrams: list[str] = []
    for kw in record.author_keywords:
        unigrams.extend(normalize(kw, config, source_field="unigram_keywords").terms)
    return _dedup(unigrams)


def terms_for(record: "BibRecord", source_field: str,
              config: NormalizationConfig | None = None) -> list[str]:
    """Unique normalized terms a record contributes for one analysis field.

    Term counting throughout the package is per document (presence), so the
    returned list never repeats a term.
    """
    config = config or DEFAULT_CONFIG
    if source_field == "title":
        return _dedup(normalize(record.title, config, source_field).terms)
    if source_field == "abstract":
        return _dedup(normalize(record.abstract, config, source_field).terms)
    if source_field == "author_keywords":
        terms = (keyword_term(k, config) for k in record.author_keywords)
        return _dedup(t for t in terms if t is not None)
    if source_field == "unigram_keywords":
        if record.unigram_keywords:
            unigrams: list[str] = []
            for u in record.unigram_keywords:
                unigrams.extend(normalize(u, config, source_field).terms)
            return _dedup(unigrams)
        return derive_unigram_keywords(record, config)
    raise ValueError(f"unknown analysis field {source_field!r}; expected one of {ANALYSIS_FIELDS}")


def load_stopwords(path: str | Path) -> frozenset[str]:
    """Read a stopword list, one word per line; '#' lines are comments."""
    words = set()
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if line and not line.startswith("#"):
            words.add(line)
    return frozenset(words)


def load_synonyms(path: str | Path) -> dict[str, str]:
    """Read a synonym list of ``variant=canonical`` lines."""
    mapping: dict[str, str] = {}
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line or line.startswith("#") or "=" not in line:
            continue
        variant, _, target = line.partition("=")
        mapping[variant.strip()] = target.strip()
    return mapping
