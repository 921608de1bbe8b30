# The MIT License (MIT)
#
# Copyright (c) 2024- unlevents contributors
#
# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in
# all copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE.

"""
# UNL corpus IO

Each news article is a UTF-8 text file holding its UNL graph, one relation
per line, grouped into sentence blocks:

    #DOC ta_bbc_agricrisis_02_01_2011.utf8
    #TITLE crisis(icl>event) farmer(icl>person)
    #DATE 02_01_2011
    #SENT s1
    agt(wait(icl>action), farmer(icl>person))
    plc(wait(icl>action), chennai(icl>place))
    #END

Blank lines and lines starting with ";" are ignored. #TITLE and #DATE are
optional. When #DATE is missing, the publication date is read from the last
DD_MM_YYYY group of the document identifier.
"""

import datetime
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterator, List, Mapping, Optional, Text, Tuple, Union

CorpusFile = Union[Text, Path, Mapping]

CorpusFileDocString = """
Corpora can be provided to the Corpus class using different types:
    - a "str" or "Path" instance pointing to a directory of UNL documents
    - a "Mapping" with such a directory as "corpus" key: {"corpus": "/path/to/corpus"}
    - a "Mapping" with already parsed documents as "documents" key:
        {"documents": [UnlDocument(...), ...]}
"""

Constraint = Tuple[Text, Text]

DATE_FORMAT = "%d_%m_%Y"
DATE_REGEX = re.compile(r"(?<!\d)(\d{2})_(\d{2})_(\d{4})(?!\d)")

CONCEPT_REGEX = re.compile(
    r"^(?P<headword>(?:(?!\.@)[^\s(),])+)"
    r"(?:\((?P<constraints>[^()]*)\))?"
    r"(?P<attributes>(?:\.@[^\s(),.@]+)*)$"
)
RELATION_REGEX = re.compile(r"^(?P<label>[a-z]{2,4})\((?P<arguments>.*)\)$")

DIRECTIVES = ("#DOC", "#TITLE", "#DATE", "#SENT", "#END")


class MalformedConcept(ValueError):
    """Raised when a concept token does not follow the concept grammar"""


class MalformedDocument(ValueError):
    """Raised when a document cannot be parsed

    Parameters
    ----------
    message : str
        Diagnostic.
    line : int
        1-based line number the diagnostic refers to.
    doc_id : str, optional
        Document identifier, when known.
    """

    def __init__(self, message: Text, line: int, doc_id: Optional[Text] = None):
        super().__init__(message, line, doc_id)
        self.message = message
        self.line = line
        self.doc_id = doc_id

    def __str__(self) -> Text:
        where = f"{self.doc_id}:{self.line}" if self.doc_id else f"line {self.line}"
        return f"{where}: {self.message}"


class MalformedCorpus(ValueError):
    """Raised when one or more documents of a corpus cannot be parsed

    All diagnostics are collected before raising, in `errors`, a mapping
    from file name to the exception raised while parsing it.
    """

    def __init__(self, errors: Mapping[Text, Exception]):
        self.errors = dict(sorted(errors.items()))
        super().__init__(
            f"{len(self.errors)} malformed document(s): " + ", ".join(self.errors)
        )


class EmptyCorpus(ValueError):
    """Raised when there is nothing to work with"""


@dataclass(frozen=True)
class Concept:
    """UNL concept (universal word)

    Only the first constraint takes part in matching: two concepts are
    considered the same node when they share headword and first constraint.
    """

    headword: Text
    constraints: Tuple[Constraint, ...] = ()
    attributes: Tuple[Text, ...] = ()

    @property
    def constraint(self) -> Optional[Constraint]:
        return self.constraints[0] if self.constraints else None

    @property
    def key(self) -> Tuple[Text, Optional[Constraint]]:
        return self.headword, self.constraint

    @property
    def node(self) -> "Concept":
        """Same concept, reduced to headword and first constraint"""
        return Concept(headword=self.headword, constraints=self.constraints[:1])

    @property
    def label(self) -> Text:
        """"headword|key>value" label, e.g. "go|icl>action" """
        if self.constraint is None:
            return self.headword
        return "{}|{}>{}".format(self.headword, *self.constraint)

    def is_a(self, value: Text) -> bool:
        """Check whether first constraint is "icl>{value}" """
        return self.constraint == ("icl", value)

    def __str__(self) -> Text:
        return serialize_concept(self)


@dataclass(frozen=True)
class Relation:
    label: Text
    source: Concept
    target: Concept

    def __str__(self) -> Text:
        return serialize_relation(self)


@dataclass
class Sentence:
    sentence_id: Text
    relations: List[Relation] = field(default_factory=list)

    def iter_concepts(self) -> Iterator[Concept]:
        """Iterate over relation endpoints, source then target, in order"""
        for relation in self.relations:
            yield relation.source
            yield relation.target


@dataclass
class UnlDocument:
    doc_id: Text
    title_concepts: List[Concept] = field(default_factory=list)
    date: Optional[datetime.date] = None
    sentences: List[Sentence] = field(default_factory=list)
    # whether `date` comes from a #DATE directive
    explicit_date: bool = False


def _split_top_level(text: Text, separator: Optional[Text] = None) -> List[Text]:
    """Split `text` on `separator` (whitespace when None) outside parentheses"""

    parts, depth, current = [], 0, []
    for char in text:
        if char == "(":
            depth += 1
        elif char == ")":
            depth -= 1
        is_separator = char.isspace() if separator is None else char == separator
        if is_separator and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(char)
    parts.append("".join(current))

    if separator is None:
        return [part for part in parts if part]
    return [part.strip() for part in parts]


def parse_concept(token: Text) -> Concept:
    """Parse a single concept token

    Parameters
    ----------
    token : str
        Concept token, e.g. "go(icl>action).@past"

    Returns
    -------
    concept : Concept
        Parsed concept, with lower-cased headword.

    Raises
    ------
    MalformedConcept
        On unbalanced parentheses, empty headword or constraint lacking ">".
    """

    token = token.strip()

    if token.count("(") != token.count(")"):
        raise MalformedConcept(f"unbalanced parentheses in concept {token!r}")

    match = CONCEPT_REGEX.match(token)
    if match is None:
        if not token or token.startswith(("(", ".@")):
            raise MalformedConcept(f"empty headword in concept {token!r}")
        raise MalformedConcept(f"invalid concept {token!r}")

    constraints = []
    if match.group("constraints") is not None:
        for item in match.group("constraints").split(","):
            key, sep, value = item.partition(">")
            key, value = key.strip(), value.strip()
            if not sep:
                raise MalformedConcept(
                    f"constraint {item.strip()!r} lacks '>' in concept {token!r}"
                )
            if not key or not value:
                raise MalformedConcept(
                    f"incomplete constraint {item.strip()!r} in concept {token!r}"
                )
            constraints.append((key, value))

    attributes = [a for a in match.group("attributes").split(".@") if a]

    return Concept(
        headword=match.group("headword").lower(),
        constraints=tuple(constraints),
        attributes=tuple(attributes),
    )


def serialize_concept(concept: Concept) -> Text:
    text = concept.headword
    if concept.constraints:
        text += "(" + ", ".join(f"{k}>{v}" for k, v in concept.constraints) + ")"
    return text + "".join(f".@{attribute}" for attribute in concept.attributes)


def parse_relation(line: Text) -> Relation:
    """Parse a "label(source, target)" relation line

    Raises
    ------
    MalformedConcept
        When the line is not a relation or either endpoint is malformed.
    """

    line = line.strip()
    match = RELATION_REGEX.match(line)
    if match is None:
        raise MalformedConcept(f"invalid relation {line!r}")

    arguments = _split_top_level(match.group("arguments"), separator=",")
    if len(arguments) != 2:
        raise MalformedConcept(
            f"relation {line!r} has {len(arguments)} argument(s) instead of 2"
        )

    source, target = (parse_concept(argument) for argument in arguments)
    return Relation(label=match.group("label"), source=source, target=target)


def serialize_relation(relation: Relation) -> Text:
    return f"{relation.label}({relation.source}, {relation.target})"


def parse_date(text: Text) -> Optional[datetime.date]:
    """Parse a "DD_MM_YYYY" date, None when invalid"""
    match = DATE_REGEX.fullmatch(text.strip())
    if match is None:
        return None
    day, month, year = (int(group) for group in match.groups())
    try:
        return datetime.date(year, month, day)
    except ValueError:
        return None


def format_date(date: datetime.date) -> Text:
    return f"{date.day:02d}_{date.month:02d}_{date.year:04d}"


def extract_date(doc_id: Text) -> Optional[datetime.date]:
    """Extract publication date from the last DD_MM_YYYY group of `doc_id`

    Returns None when there is no such group or when it is not a valid date.
    """
    matches = DATE_REGEX.findall(doc_id)
    if not matches:
        return None
    return parse_date("_".join(matches[-1]))


def parse_document(text: Text, doc_id: Optional[Text] = None) -> UnlDocument:
    """Parse a UNL document

    Parameters
    ----------
    text : str
        Document content.
    doc_id : str, optional
        Expected document identifier (usually the file name). When provided,
        it must match the #DOC directive.

    Returns
    -------
    document : UnlDocument

    Raises
    ------
    MalformedDocument
        On the first syntax error, with its line number.
    """

    document: Optional[UnlDocument] = None
    sentence: Optional[Sentence] = None
    has_title = ended = False
    sentence_ids = set()

    def fail(message: Text, line: int):
        return MalformedDocument(
            message, line, doc_id=document.doc_id if document else doc_id
        )

    lines = text.splitlines()
    for number, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith(";"):
            continue

        if ended:
            raise fail("content after #END", number)

        directive, _, argument = line.partition(" ")
        argument = argument.strip()

        if document is None:
            if directive != "#DOC":
                raise fail("document must start with #DOC", number)
            if not argument:
                raise fail("#DOC lacks a document identifier", number)
            if doc_id is not None and argument != doc_id:
                raise fail(
                    f"#DOC identifier {argument!r} does not match {doc_id!r}", number
                )
            document = UnlDocument(doc_id=argument)
            continue

        if directive == "#DOC":
            raise fail("duplicate #DOC directive", number)

        elif directive == "#TITLE":
            if has_title or document.sentences:
                raise fail("#TITLE must appear once, before any #SENT", number)
            try:
                document.title_concepts = [
                    parse_concept(token) for token in _split_top_level(argument)
                ]
            except MalformedConcept as e:
                raise fail(str(e), number) from e
            has_title = True

        elif directive == "#DATE":
            if document.explicit_date:
                raise fail("duplicate #DATE directive", number)
            date = parse_date(argument)
            if date is None:
                raise fail(f"invalid date {argument!r} (expected DD_MM_YYYY)", number)
            document.date = date
            document.explicit_date = True

        elif directive == "#SENT":
            if not argument:
                raise fail("#SENT lacks a sentence identifier", number)
            if argument in sentence_ids:
                raise fail(f"duplicate sentence identifier {argument!r}", number)
            sentence_ids.add(argument)
            sentence = Sentence(sentence_id=argument)
            document.sentences.append(sentence)

        elif directive == "#END":
            ended = True

        elif line.startswith("#"):
            raise fail(f"unknown directive {directive!r}", number)

        else:
            if sentence is None:
                raise fail("relation outside of a #SENT block", number)
            try:
                sentence.relations.append(parse_relation(line))
            except MalformedConcept as e:
                raise fail(str(e), number) from e

    if document is None:
        raise fail("empty document", 1)

    if not ended:
        raise fail("missing #END", max(len(lines), 1))

    if not document.explicit_date:
        document.date = extract_date(document.doc_id)

    return document


def serialize_document(document: UnlDocument) -> Text:
    lines = [f"#DOC {document.doc_id}"]
    if document.title_concepts:
        lines.append("#TITLE " + " ".join(map(str, document.title_concepts)))
    if document.explicit_date and document.date is not None:
        lines.append(f"#DATE {format_date(document.date)}")
    for sentence in document.sentences:
        lines.append(f"#SENT {sentence.sentence_id}")
        lines.extend(map(str, sentence.relations))
    lines.append("#END")
    return "\n".join(lines) + "\n"


def normalize_document(text: Text) -> Text:
    """Normalized textual form of a document

    Lines are trimmed, blank and comment lines are dropped, runs of
    whitespace are collapsed and commas are followed by a single space.
    """
    normalized = []
    for raw in text.splitlines():
        line = " ".join(raw.split())
        if not line or line.startswith(";"):
            continue
        normalized.append(re.sub(r"\s*,\s*", ", ", line))
    return "\n".join(normalized) + "\n"


class Corpus:
    """UNL corpus loader

    Usage
    -----
    >>> corpus = Corpus()
    >>> documents = corpus("/path/to/corpus")
    >>> documents = corpus({"corpus": "/path/to/corpus"})

    Files are read in lexicographic order of their name, which is also used
    as document identifier. Hidden files are skipped.
    """

    @staticmethod
    def validate_file(file: CorpusFile) -> Mapping:
        """Validate corpus for use with Corpus.__call__

        Parameter
        ---------
        file: CorpusFile

        Returns
        -------
        validated_file : Mapping
            {"corpus": str, "uri": str, ...}
            {"documents": list of UnlDocument, "uri": str, ...}

        Raises
        ------
        ValueError if file format is not valid or directory does not exist.
        """

        if isinstance(file, Mapping):
            pass

        elif isinstance(file, (str, Path)):
            file = {"corpus": str(file), "uri": Path(file).name}

        else:
            raise ValueError(CorpusFileDocString)

        if "documents" in file:
            if not all(isinstance(d, UnlDocument) for d in file["documents"]):
                raise ValueError("'documents' must be a list of UnlDocument.")
            file.setdefault("uri", "documents")

        elif "corpus" in file:
            path = Path(file["corpus"])
            if not path.is_dir():
                raise ValueError(f"Directory {path} does not exist")
            file.setdefault("uri", path.name)

        else:
            raise ValueError("Neither 'documents' nor 'corpus' is available.")

        return file

    @staticmethod
    def list_files(directory: Union[Text, Path]) -> List[Path]:
        return sorted(
            path
            for path in Path(directory).iterdir()
            if path.is_file() and not path.name.startswith(".")
        )

    def __call__(self, file: CorpusFile) -> List[UnlDocument]:
        """Load every document of the corpus, caching them into `file`

        Raises
        ------
        MalformedCorpus
            Listing every file that could not be parsed.
        """

        file = self.validate_file(file)
        if "documents" in file:
            return list(file["documents"])

        documents: List[UnlDocument] = []
        errors: Dict[Text, Exception] = {}
        for path in self.list_files(file["corpus"]):
            try:
                text = path.read_text(encoding="utf-8")
                documents.append(parse_document(text, doc_id=path.name))
            except (MalformedDocument, UnicodeDecodeError) as e:
                errors[path.name] = e

        if errors:
            raise MalformedCorpus(errors)

        file["documents"] = documents
        return documents
