"""BibTeX ingestion for dissertation corpora.

The metadata convention differs from stock BibTeX in two ways: compound
fields (authors, keywords, affiliations, references) hold semicolon-separated
lists, and two fields are repurposed -- the first author is the student, the
remaining authors are supervisors, and ``journal`` holds the research group.
Standard " and "-separated author lists are also accepted; ";" wins when both
appear.

Parsing is resilient: a malformed entry (unbalanced braces, missing key
fields) is skipped and reported as a :class:`ParseWarning` carrying the line
it started on, and parsing resumes at the next entry. One record or one
warning is produced per entry, never both.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence, TextIO, Union

from .text import collapse_ws, norm_name, norm_reference, fold

__all__ = [
    "BibRecord",
    "Corpus",
    "DuplicateIdError",
    "EmptyCorpus",
    "ParseWarning",
    "Provenance",
    "build_corpus",
    "parse_bib",
    "parse_bib_file",
    "records_to_bibtex",
    "split_parsed",
]


class EmptyCorpus(Exception):
    """No record survived window filtering; downstream analyses need >= 1."""


class DuplicateIdError(ValueError):
    """Two records share a citation key."""


@dataclass(frozen=True)
class ParseWarning:
    line: int
    message: str
    key: str | None = None

    def __str__(self) -> str:  # pragma: no cover - convenience
        who = f" [{self.key}]" if self.key else ""
        return f"line {self.line}{who}: {self.message}"


@dataclass(frozen=True)
class BibRecord:
    """One dissertation's metadata, normalized at parse time.

    Person names and keywords are folded/lowercased so identity questions
    (same supervisor? same keyword?) reduce to string equality. Titles and
    abstracts keep their case; analysis-time normalization handles them.
    """

    id: str
    title: str
    year: int
    student: str
    supervisors: tuple[str, ...] = ()
    group: str = ""
    affiliations: tuple[str, ...] = ()
    author_keywords: tuple[str, ...] = ()
    unigram_keywords: tuple[str, ...] = ()
    abstract: str = ""
    references: tuple[str, ...] = ()
    citation_count: int = 0
    provenance_notes: tuple[str, ...] = ()

    @property
    def people(self) -> tuple[str, ...]:
        return (self.student,) + self.supervisors

    @property
    def single_authored(self) -> bool:
        return not self.supervisors


@dataclass(frozen=True)
class Provenance:
    sources: tuple[str, ...] = ()
    warnings: tuple[ParseWarning, ...] = ()
    notes: tuple[str, ...] = ()
    excluded_outside_window: int = 0

    def as_text(self) -> str:
        lines = [f"sources: {', '.join(self.sources) or '<in-memory>'}",
                 f"records excluded outside window: {self.excluded_outside_window}",
                 f"warnings: {len(self.warnings)}"]
        lines += [f"  warning {w}" for w in self.warnings]
        lines += [f"  note {n}" for n in self.notes]
        return "\n".join(lines)


@dataclass(frozen=True)
class Corpus:
    """Validated record collection over an observation window (inclusive)."""

    records: tuple[BibRecord, ...]
    window: tuple[int, int]
    provenance: Provenance = field(default_factory=Provenance)

    def __len__(self) -> int:
        return len(self.records)

    @property
    def years(self) -> range:
        return range(self.window[0], self.window[1] + 1)


# --------------------------------------------------------------------------
# Parsing
# --------------------------------------------------------------------------

Source = Union[str, Path, TextIO]

# Field-name aliases, matched after lowercasing and stripping '-'/'_'.
_FIELD_ALIASES = {
    "title": "title",
    "author": "author",
    "authors": "author",
    "year": "year",
    "journal": "group",
    "group": "group",
    "affiliation": "affiliations",
    "affiliations": "affiliations",
    "keywords": "author_keywords",
    "authorkeywords": "author_keywords",
    "unigramkeywords": "unigram_keywords",
    "unigrams": "unigram_keywords",
    "keywordsplus": "unigram_keywords",
    "abstract": "abstract",
    "summary": "abstract",
    "references": "references",
    "citedreferences": "references",
    "note": "note",
}

_SPECIAL_ENTRY_TYPES = {"comment", "string", "preamble"}
_AND_SPLIT_RE = re.compile(r"\s+and\s+", re.IGNORECASE)
_INT_RE = re.compile(r"-?\d+")


def parse_bib(source: Source, citation_field: str = "citations"
              ) -> list[BibRecord | ParseWarning]:
    """Parse a BibTeX stream into records and warnings, in file order.

    ``citation_field`` names the field holding citation counts; when absent
    an integer-valued ``note`` field is tried, then 0. Entries that cannot
    yield a valid record (no authors, no parseable year, or neither title
    nor author) are dropped with a warning locating the entry.
    """
    if isinstance(source, (str, Path)):
        text = Path(source).read_text(encoding="utf-8")
    else:
        text = source.read()
    out: list[BibRecord | ParseWarning] = []
    for entry in _scan_entries(text):
        out.append(_build_record(entry, citation_field))
    return out


def parse_bib_file(path: str | Path, citation_field: str = "citations"
                   ) -> tuple[list[BibRecord], list[ParseWarning]]:
    """Like :func:`parse_bib` but with records and warnings separated."""
    return split_parsed(parse_bib(path, citation_field))


def split_parsed(parsed: Iterable[BibRecord | ParseWarning]
                 ) -> tuple[list[BibRecord], list[ParseWarning]]:
    records = [p for p in parsed if isinstance(p, BibRecord)]
    warnings = [p for p in parsed if isinstance(p, ParseWarning)]
    return records, warnings


@dataclass
class _RawEntry:
    kind: str
    line: int
    key: str | None = None
    fields: dict[str, str] | None = None
    error: str | None = None


def _scan_entries(text: str) -> list[_RawEntry]:
    """Locate @entries by brace balancing; recover at the next line-start '@'."""
    entries: list[_RawEntry] = []
    pos = 0
    n = len(text)
    while True:
        at = text.find("@", pos)
        if at < 0:
            break
        line = text.count("\n", 0, at) + 1
        m = re.match(r"@\s*([A-Za-z]+)\s*([{(])", text[at:])
        if not m:
            pos = at + 1
            continue
        kind = m.group(1).lower()
        opener = m.group(2)
        closer = "}" if opener == "{" else ")"
        body_start = at + m.end()
        end, truncated = _find_balanced_end(text, body_start, opener, closer)
        if kind in _SPECIAL_ENTRY_TYPES:
            pos = end
            continue
        body = text[body_start:end - 1] if not truncated else text[body_start:end]
        if truncated:
            entries.append(_RawEntry(kind, line, error="unbalanced braces in entry"))
            pos = end
            continue
        key, fields, err = _parse_body(body)
        entries.append(_RawEntry(kind, line, key=key, fields=fields, error=err))
        pos = end
    return entries


def _find_balanced_end(text: str, start: int, opener: str, closer: str
                       ) -> tuple[int, bool]:
    """Return (position after the closing delimiter, truncated flag).

    A '@' at the start of a line while still inside the entry means the
    closing brace was lost; scanning stops there so the next entry parses.
    """
    depth = 1
    i = start
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == opener:
            depth += 1
        elif ch == closer:
            depth -= 1
            if depth == 0:
                return i + 1, False
        elif ch == "@" and depth >= 1:
            j = i - 1
            while j >= 0 and text[j] in " \t":
                j -= 1
            if j < 0 or text[j] == "\n":
                return i, True
        i += 1
    return n, True


def _parse_body(body: str) -> tuple[str | None, dict[str, str] | None, str | None]:
    head, sep, rest = body.partition(",")
    key = head.strip() or None
    if not sep:
        return key, {}, None
    fields: dict[str, str] = {}
    i = 0
    n = len(rest)
    while i < n:
        while i < n and (rest[i].isspace() or rest[i] == ","):
            i += 1
        if i >= n:
            break
        eq = rest.find("=", i)
        if eq < 0:
            break
        name = rest[i:eq].strip().lower().replace("-", "").replace("_", "")
        i = eq + 1
        value_parts: list[str] = []
        while True:
            while i < n and rest[i].isspace():
                i += 1
            if i >= n:
                break
            part, i = _read_value_chunk(rest, i)
            value_parts.append(part)
            while i < n and rest[i].isspace():
                i += 1
            if i < n and rest[i] == "#":  # BibTeX string concatenation
                i += 1
                continue
            break
        if name:
            fields[name] = " ".join(p for p in value_parts if p).strip()
        while i < n and rest[i] != ",":
            i += 1
    return key, fields, None


def _read_value_chunk(text: str, i: int) -> tuple[str, int]:
    n = len(text)
    if text[i] == "{":
        depth = 1
        j = i + 1
        while j < n and depth:
            if text[j] == "{":
                depth += 1
            elif text[j] == "}":
                depth -= 1
            j += 1
        return text[i + 1:j - 1], j
    if text[i] == '"':
        depth = 0
        j = i + 1
        while j < n:
            if text[j] == "{":
                depth += 1
            elif text[j] == "}":
                depth -= 1
            elif text[j] == '"' and depth == 0:
                break
            j += 1
        return text[i + 1:j], min(j + 1, n)
    j = i
    while j < n and text[j] not in ",\n":
        j += 1
    return text[i:j].strip(), j


def _clean(value: str) -> str:
    return collapse_ws(value.replace("{", "").replace("}", "").replace('"', ""))


def _split_list(value: str) -> list[str]:
    return [collapse_ws(p) for p in value.split(";") if collapse_ws(p)]


def _split_authors(value: str) -> list[str]:
    if ";" in value:
        parts = value.split(";")
    else:
        parts = _AND_SPLIT_RE.split(value)
    names = [norm_name(p) for p in parts]
    return [nm for nm in names if nm]


def _dedup_normalized(values: Iterable[str], normalizer) -> tuple[list[str], int]:
    seen: set[str] = set()
    out: list[str] = []
    dropped = 0
    for v in values:
        nv = normalizer(v)
        if not nv:
            continue
        if nv in seen:
            dropped += 1
            continue
        seen.add(nv)
        out.append(nv)
    return out, dropped


def _norm_keyword(kw: str) -> str:
    return collapse_ws(fold(kw).lower())


def _build_record(entry: _RawEntry, citation_field: str) -> BibRecord | ParseWarning:
    if entry.error:
        return ParseWarning(entry.line, entry.error, key=entry.key)
    raw = entry.fields or {}
    fields: dict[str, str] = {}
    for name, value in raw.items():
        target = _FIELD_ALIASES.get(name)
        if target:
            fields[target] = _clean(value)
    citation_raw = _clean(raw.get(_canon_field(citation_field), ""))

    title = fields.get("title", "")
    author = fields.get("author", "")
    if not title and not author:
        return ParseWarning(entry.line, "entry has neither title nor author", key=entry.key)
    authors = _split_authors(author)
    if not authors:
        return ParseWarning(entry.line, "entry has no parseable author", key=entry.key)
    year_match = _INT_RE.search(fields.get("year", ""))
    if not year_match:
        return ParseWarning(entry.line, "entry has no parseable year", key=entry.key)
    if not entry.key:
        return ParseWarning(entry.line, "entry has no citation key")

    notes: list[str] = []
    keywords, dup_kw = _dedup_normalized(_split_list(fields.get("author_keywords", "")),
                                         _norm_keyword)
    if dup_kw:
        notes.append(f"{entry.key}: dropped {dup_kw} duplicate keyword(s) after normalization")
    unigrams, dup_uni = _dedup_normalized(_split_list(fields.get("unigram_keywords", "")),
                                          _norm_keyword)
    if dup_uni:
        notes.append(f"{entry.key}: dropped {dup_uni} duplicate unigram keyword(s)")
    references, dup_ref = _dedup_normalized(_split_list(fields.get("references", "")),
                                            norm_reference)
    if dup_ref:
        notes.append(f"{entry.key}: dropped {dup_ref} duplicate reference(s)")

    citations = 0
    if citation_raw:
        m = _INT_RE.search(citation_raw)
        if m and int(m.group()) >= 0:
            citations = int(m.group())
        else:
            notes.append(f"{entry.key}: unusable citation count {citation_raw!r}, defaulting to 0")
    else:
        # notes are routinely prose ("Defended in 2013" is not a count);
        # the fallback only accepts a note that is nothing but an integer
        note_value = _clean(raw.get("note", ""))
        if note_value.isdigit():
            citations = int(note_value)

    return BibRecord(
        id=entry.key,
        title=title,
        year=int(year_match.group()),
        student=authors[0],
        supervisors=tuple(authors[1:]),
        group=collapse_ws(fold(fields.get("group", ""))),
        affiliations=tuple(_split_list(fields.get("affiliations", ""))),
        author_keywords=tuple(keywords),
        unigram_keywords=tuple(unigrams),
        abstract=fields.get("abstract", ""),
        references=tuple(references),
        citation_count=citations,
        provenance_notes=tuple(notes),
    )


def _canon_field(name: str) -> str:
    return name.strip().lower().replace("-", "").replace("_", "")


# --------------------------------------------------------------------------
# Corpus construction and serialization
# --------------------------------------------------------------------------

def build_corpus(records: Sequence[BibRecord], window: tuple[int, int],
                 warnings: Sequence[ParseWarning] = (),
                 sources: Sequence[str] = ()) -> Corpus:
    """Filter records to the observation window and validate the collection.

    Records outside the window are excluded and counted in provenance.
    Duplicate citation keys raise :class:`DuplicateIdError`; an empty result
    raises :class:`EmptyCorpus`.
    """
    start, end = window
    if start > end:
        raise ValueError(f"invalid window {window}: start > end")
    kept = [r for r in records if start <= r.year <= end]
    excluded = len(records) - len(kept)
    seen: set[str] = set()
    dupes: set[str] = set()
    for r in kept:
        (dupes if r.id in seen else seen).add(r.id)
    if dupes:
        raise DuplicateIdError(f"duplicate record ids: {', '.join(sorted(dupes))}")
    if not kept:
        raise EmptyCorpus(f"no records within window {start}-{end}")
    notes = tuple(n for r in kept for n in r.provenance_notes)
    return Corpus(
        records=tuple(kept),
        window=(start, end),
        provenance=Provenance(
            sources=tuple(str(s) for s in sources),
            warnings=tuple(warnings),
            notes=notes,
            excluded_outside_window=excluded,
        ),
    )


def records_to_bibtex(records: Iterable[BibRecord]) -> str:
    """Serialize records back to the semicolon-list BibTeX convention.

    Re-parsing the output yields field-identical records (values are already
    normalized), which is the round-trip contract the tests exercise.
    """
    chunks = []
    for r in records:
        lines = [f"@mastersthesis{{{r.id},"]
        lines.append(f"  title = {{{r.title}}},")
        lines.append(f"  author = {{{'; '.join(r.people)}}},")
        lines.append(f"  year = {{{r.year}}},")
        if r.group:
            lines.append(f"  journal = {{{r.group}}},")
        if r.affiliations:
            lines.append(f"  affiliation = {{{'; '.join(r.affiliations)}}},")
        if r.author_keywords:
            lines.append(f"  keywords = {{{'; '.join(r.author_keywords)}}},")
        if r.unigram_keywords:
            lines.append(f"  unigram_keywords = {{{'; '.join(r.unigram_keywords)}}},")
        if r.abstract:
            lines.append(f"  abstract = {{{r.abstract}}},")
        if r.references:
            lines.append(f"  references = {{{'; '.join(r.references)}}},")
        lines.append(f"  citations = {{{r.citation_count}}},")
        lines.append("}")
        chunks.append("\n".join(lines))
    return "\n\n".join(chunks) + "\n"
