from dataclasses import dataclass
from typing import Callable, Dict, Iterable, Optional, Tuple
import abc
import logging
import sys
import threading

from spamhunter.exceptions import ProtocolError
from spamhunter.preprocessing.store import read_jsonl

logger = logging.getLogger(__name__)

# Unicode first-strong isolate / pop directional isolate around right-to-left text
FSI = "\u2068"
PDI = "\u2069"


@dataclass(frozen=True)
class Question:
    id: str
    prompt: str
    answers: Tuple[str, ...]


TOPIC_RELEVANCE = Question(
    "topic_relevance",
    "Is the tweet topic related to the hashtag/trend it contains?",
    ("related", "unrelated"),
)
URL_RELEVANCE = Question(
    "url_relevance",
    "Where does the tweet URL lead?",
    ("related", "unrelated", "malicious"),
)
AUTOMATED_ADVERTISING = Question(
    "automated_advertising",
    "Does the tweet advertise a product or service by hijacking hashtags or mass-mentioning users?",
    ("yes", "no"),
)
RECENT_SPAM = Question(
    "recent_spam",
    "The evidence tweet is legitimate. Is there any spam among the account's recent tweets?",
    ("yes", "no"),
)
SPAM_PATTERN = Question(
    "spam_pattern",
    "The account is human-operated but tweeted spam. Is the spamming behavior constant, "
    "posted through a subscribed automated app, or an impulsive one-off?",
    ("constant", "subscribed_app", "impulsive"),
)
ACCEPT_TERM = Question(
    "accept_term",
    "Keep this frequent spam token in the spam dictionary?",
    ("accept", "reject"),
)

QUESTIONS = {
    q.id: q
    for q in (
        TOPIC_RELEVANCE,
        URL_RELEVANCE,
        AUTOMATED_ADVERTISING,
        RECENT_SPAM,
        SPAM_PATTERN,
        ACCEPT_TERM,
    )
}


class HumanVerdictProvider(abc.ABC):
    """Answers workflow questions about an account, a tweet or a dictionary term.

    ``subject`` is the account id; ``item`` narrows the question to one tweet id
    or one dictionary term.
    """

    labeler = "unknown"

    @abc.abstractmethod
    def _answer(self, subject: str, question: Question, item: Optional[str], context: str) -> str:
        raise NotImplementedError

    def ask(
        self, subject: str, question: Question, item: Optional[str] = None, context: str = ""
    ) -> str:
        answer = self._answer(subject, question, item, context)
        if answer not in question.answers:
            raise ProtocolError(
                f"answer {answer!r} to {question.id} for {subject} is not one of {question.answers}"
            )
        logger.debug("%s / %s / %s -> %s", subject, question.id, item, answer)
        return answer


class ScriptedOracle(HumanVerdictProvider):
    """Answers from line-delimited ``account_id, question_id, answer`` records.

    Records may carry an ``item`` (tweet id or term) to answer item-level
    questions; a record without item answers the question for all items of
    that account. ``default`` answers questions the script does not cover.
    """

    labeler = "scripted"

    def __init__(self, records: Iterable[dict] = (), default: Optional[Dict[str, str]] = None):
        self._answers = dict()
        for r in records:
            key = (str(r["account_id"]), r["question_id"], r.get("item"))
            self._answers.setdefault(key, r["answer"])
        self.default = dict(default or dict())

    @classmethod
    def load(cls, path, default=None) -> "ScriptedOracle":
        oracle = cls(read_jsonl(path), default=default)
        logger.info("loaded %d scripted answers from %s", len(oracle._answers), path)
        return oracle

    def _answer(self, subject, question, item, context):
        for key in ((subject, question.id, item), (subject, question.id, None)):
            if key in self._answers:
                return self._answers[key]
        if question.id in self.default:
            return self.default[question.id]
        raise ProtocolError(f"no scripted answer for {question.id} on {subject} ({item})")


class InteractiveOracle(HumanVerdictProvider):
    """Terminal prompt; all questions are serialized through one session."""

    def __init__(self, labeler: str = "human", input_fn: Callable[[str], str] = input, out=None):
        self.labeler = labeler
        self._input = input_fn
        self._out = out or sys.stderr
        self._lock = threading.Lock()

    def _answer(self, subject, question, item, context):
        with self._lock:
            print(f"\n[{subject}{'/' + item if item else ''}] {question.prompt}", file=self._out)
            if context:
                print(f"  {FSI}{context}{PDI}", file=self._out)
            choices = "/".join(question.answers)
            while True:
                answer = self._input(f"  ({choices}) > ").strip()
                if answer in question.answers:
                    return answer
                print(f"  please answer one of {choices}", file=self._out)
