"""Deterministic transcript parsing for the baseline ranker.

No statistical NLP here: a verb lexicon, a stopword list, and simple
segment splitting are enough to ground the kinds of commands the engine
accepts ("Bring me that", "Pepper shaker ... Move", "Is TV on?").
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .candidates import TaskType

PRONOUNS = frozenset({"that", "this", "it", "them", "those", "these", "there"})

STOPWORDS = frozenset(
    {
        "the", "a", "an", "me", "my", "please", "of", "for", "am", "i",
        "want", "you", "your", "robot", "now", "some", "us", "we",
        "one", "two", "three", "four", "both", "all",
    }
)

USER_WORDS = frozenset({"me", "here", "you", "us"})

# Words that carry the queried state in a state question ("Is TV on?").
STATE_WORDS = {
    "on": "power",
    "off": "power",
    "open": "open_state",
    "closed": "open_state",
    "full": "fill_level",
    "empty": "fill_level",
}

DEFAULT_VERBS: dict[TaskType, frozenset[str]] = {
    TaskType.FETCH: frozenset({"bring", "take", "get", "fetch", "grab", "hand", "give"}),
    TaskType.MOVE: frozenset({"move", "put", "place", "go", "carry"}),
    TaskType.CHECK_PRESENCE: frozenset({"check", "verify", "inspect", "see"}),
    TaskType.DOCK: frozenset({"dock", "charge", "recharge"}),
    TaskType.GO_TO: frozenset({"return"}),
}

# Multiword forms checked before single verbs.
PHRASE_VERBS: tuple[tuple[str, TaskType], ...] = (
    ("come back", TaskType.GO_TO),
    ("come here", TaskType.GO_TO),
    ("come over", TaskType.GO_TO),
    ("go home", TaskType.DOCK),
    ("go to", TaskType.GO_TO),
)

DEST_MARKERS = frozenset({"to", "onto", "into", "toward", "towards"})


@dataclass(frozen=True)
class ParsedUtterance:
    raw: str
    tokens: tuple[str, ...]
    task: TaskType | None
    target_phrases: tuple[str, ...]
    pronoun_count: int
    destination_phrase: str | None
    destination_is_user: bool
    attribute: str | None
    verb_tokens: tuple[str, ...] = field(default=())

    @property
    def is_empty(self) -> bool:
        return not self.tokens


def _normalize_tokens(text: str) -> list[str]:
    cleaned = "".join(c if c.isalnum() or c in " ," else " " for c in text.lower())
    return [t for t in cleaned.replace(",", " , ").split() if t]


def parse_transcript(text: str, extra_verbs: dict[TaskType, frozenset[str]] | None = None) -> ParsedUtterance:
    """Extract task verb, named object phrases, pronoun slots, and destination."""
    verbs = {k: set(v) for k, v in DEFAULT_VERBS.items()}
    if extra_verbs:
        for task, words in extra_verbs.items():
            verbs.setdefault(task, set()).update(words)

    raw = text or ""
    tokens = _normalize_tokens(raw)
    if not tokens:
        return ParsedUtterance(raw, (), None, (), 0, None, False, None)

    joined = " ".join(t for t in tokens if t != ",")

    task: TaskType | None = None
    verb_tokens: list[str] = []

    for phrase, phrase_task in PHRASE_VERBS:
        if phrase in joined:
            task = phrase_task
            verb_tokens.extend(phrase.split())
            break

    # State questions: "is <thing> on" reads a state attribute.
    attribute = None
    if any(t in ("is", "are", "was", "were") for t in tokens):
        state_hits = [t for t in tokens if t in STATE_WORDS]
        if state_hits:
            task = TaskType.CHECK_STATE
            attribute = STATE_WORDS[state_hits[0]]
            verb_tokens.extend(["is", "are", "was", "were"])

    if task is None:
        for tok in tokens:
            for candidate_task, words in verbs.items():
                if tok in words:
                    task = candidate_task
                    verb_tokens.append(tok)
                    break
            if task is not None:
                break

    consumed_verbs = set(verb_tokens)
    state_words = set(STATE_WORDS) if task is TaskType.CHECK_STATE else set()

    # Destination split: content after a marker belongs to the destination.
    dest_tokens: list[str] = []
    body_tokens: list[str] = []
    if task in (TaskType.FETCH, TaskType.MOVE, TaskType.GO_TO):
        marker_at = None
        for i, tok in enumerate(tokens):
            if tok in DEST_MARKERS and i > 0:
                marker_at = i
        if marker_at is not None:
            body_tokens = tokens[:marker_at]
            dest_tokens = tokens[marker_at + 1 :]
    if not body_tokens and not dest_tokens:
        body_tokens = list(tokens)

    destination_phrase = None
    destination_is_user = False
    dest_content = [t for t in dest_tokens if t not in STOPWORDS and t != ","]
    if dest_content:
        if all(t in USER_WORDS for t in dest_content):
            destination_is_user = True
        else:
            destination_phrase = " ".join(
                t for t in dest_content if t not in USER_WORDS and t not in PRONOUNS
            ) or None
            if destination_phrase is None:
                destination_is_user = any(t in USER_WORDS for t in dest_content)

    # "Take X to Y" relocates; "bring X to me" is still a fetch.
    if task is TaskType.FETCH:
        if destination_phrase:
            task = TaskType.MOVE
        else:
            destination_is_user = False

    pronoun_count = sum(1 for t in body_tokens if t in PRONOUNS)

    # Remaining content words, segmented on commas / "and" / "then".
    segments: list[list[str]] = [[]]
    for tok in body_tokens:
        if tok in (",", "and", "then"):
            segments.append([])
            continue
        if (
            tok in consumed_verbs
            or tok in STOPWORDS
            or tok in PRONOUNS
            or tok in state_words
            or tok in ("is", "are", "was", "were", "whether", "still")
        ):
            continue
        segments[-1].append(tok)
    target_phrases = tuple(" ".join(seg) for seg in segments if seg)

    return ParsedUtterance(
        raw=raw,
        tokens=tuple(tokens),
        task=task,
        target_phrases=target_phrases,
        pronoun_count=pronoun_count,
        destination_phrase=destination_phrase,
        destination_is_user=destination_is_user,
        attribute=attribute,
        verb_tokens=tuple(verb_tokens),
    )
