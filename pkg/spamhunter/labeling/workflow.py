from dataclasses import dataclass
from typing import Dict, Iterable, List, Sequence, Tuple
import logging

from joblib import Parallel, delayed
import networkx as nx

from spamhunter.exceptions import InputError
from spamhunter.labeling.oracle import RECENT_SPAM, SPAM_PATTERN, HumanVerdictProvider
from spamhunter.labeling.rules import TweetLabel
from spamhunter.preprocessing.sources import SourceCatalog, classify_source
from spamhunter.preprocessing.store import read_jsonl, write_jsonl
from spamhunter.preprocessing.structures import (
    AUTOMATION_THRESHOLD,
    AccountClass,
    AccountSnapshot,
    Automation,
    AutomationStatus,
    SourceCategory,
)

logger = logging.getLogger(__name__)

START = "start"

# Account classification workflow: (automation, evidence) picks one of four
# paths a-d; b and d continue through the answer given by the oracle.
WORKFLOW = nx.DiGraph()
nx.add_path(WORKFLOW, [START, "a", AccountClass.SPAMMER.value])
nx.add_path(WORKFLOW, [START, "b", "b:yes", AccountClass.SPAMMER.value])
nx.add_path(WORKFLOW, ["b", "b:no", AccountClass.NON_SPAMMER.value])
nx.add_path(WORKFLOW, [START, "c", AccountClass.NON_SPAMMER.value])
nx.add_path(WORKFLOW, [START, "d", "d:constant", AccountClass.SPAMMER.value])
nx.add_path(WORKFLOW, ["d", "d:subscribed_app", AccountClass.COMPROMISED.value])
nx.add_path(WORKFLOW, ["d", "d:impulsive", AccountClass.NON_SPAMMER.value])

_RECENT_SPAM_VERDICT = {"yes": AccountClass.SPAMMER, "no": AccountClass.NON_SPAMMER}
_SPAM_PATTERN_VERDICT = {
    "constant": AccountClass.SPAMMER,
    "subscribed_app": AccountClass.COMPROMISED,
    "impulsive": AccountClass.NON_SPAMMER,
}


def is_valid_trace(trace: Sequence[str], account_class: AccountClass) -> bool:
    return nx.is_path(WORKFLOW, [START, *trace, AccountClass(account_class).value])


@dataclass(frozen=True)
class LabeledAccount:
    account_id: str
    account_class: AccountClass
    automation: AutomationStatus
    evidence_tweet_id: str
    verdict_trace: Tuple[str, ...]
    labeler: str

    def __post_init__(self):
        object.__setattr__(self, "account_class", AccountClass(self.account_class))
        object.__setattr__(self, "verdict_trace", tuple(self.verdict_trace))
        if not is_valid_trace(self.verdict_trace, self.account_class):
            raise InputError(
                f"account {self.account_id}: trace {list(self.verdict_trace)} does not lead "
                f"to {self.account_class.value}"
            )

    def to_dict(self) -> dict:
        return {
            "account_id": self.account_id,
            "class": self.account_class.value,
            "automation": self.automation.status.value,
            "automation_index": self.automation.automation_index,
            "evidence_tweet_id": self.evidence_tweet_id,
            "verdict_trace": list(self.verdict_trace),
            "labeler": self.labeler,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "LabeledAccount":
        return cls(
            str(d["account_id"]),
            AccountClass(d["class"]),
            AutomationStatus(Automation(d["automation"]), float(d["automation_index"])),
            str(d.get("evidence_tweet_id", "")),
            tuple(d["verdict_trace"]),
            d.get("labeler", "scripted"),
        )


def automation_index(
    acc: AccountSnapshot, catalog: SourceCatalog, threshold: float = AUTOMATION_THRESHOLD
) -> AutomationStatus:
    """Share of recent tweets from automated or unknown sources."""
    if not acc.recent_tweets:
        raise InputError(f"account {acc.account_id}: no recent tweets")
    flagged = (SourceCategory.AUTOMATED, SourceCategory.UNKNOWN)
    automated = sum(
        1 for t in acc.recent_tweets if classify_source(catalog, t.source_name) in flagged
    )
    return AutomationStatus.from_index(automated / len(acc.recent_tweets), threshold)


def classify_account(
    acc: AccountSnapshot,
    evidence: TweetLabel,
    automation: AutomationStatus,
    oracle: HumanVerdictProvider,
) -> LabeledAccount:
    context = evidence.text
    if automation.is_automated and evidence.is_spam:
        trace, verdict = ["a"], AccountClass.SPAMMER
    elif automation.is_automated:
        answer = oracle.ask(acc.account_id, RECENT_SPAM, context=context)
        trace, verdict = ["b", f"b:{answer}"], _RECENT_SPAM_VERDICT[answer]
    elif not evidence.is_spam:
        trace, verdict = ["c"], AccountClass.NON_SPAMMER
    else:
        answer = oracle.ask(acc.account_id, SPAM_PATTERN, context=context)
        trace, verdict = ["d", f"d:{answer}"], _SPAM_PATTERN_VERDICT[answer]
    return LabeledAccount(
        acc.account_id,
        verdict,
        automation,
        evidence.tweet_id,
        tuple(trace),
        oracle.labeler,
    )


def label_accounts(
    snapshots: Iterable[AccountSnapshot],
    catalog: SourceCatalog,
    evidence: Dict[str, TweetLabel],
    oracle: HumanVerdictProvider,
    threshold: float = AUTOMATION_THRESHOLD,
    jobs: int = 1,
) -> Tuple[List[LabeledAccount], dict]:
    """Label every snapshot with evidence; returns the labels and a summary."""
    candidates = [s for s in snapshots if s.account_id in evidence and s.recent_tweets]
    skipped = len(evidence) - len(candidates)
    if skipped:
        logger.warning("%d evidence accounts have no usable snapshot", skipped)

    def _label(acc):
        status = automation_index(acc, catalog, threshold)
        return classify_account(acc, evidence[acc.account_id], status, oracle)

    labels = Parallel(n_jobs=jobs, prefer="threads")(delayed(_label)(acc) for acc in candidates)
    used = [evidence[s.account_id] for s in candidates]
    summary = dict(
        accounts=len(labels),
        skipped=skipped,
        evidence_spam_fraction=sum(e.is_spam for e in used) / len(used) if used else 0.0,
        classes={c.value: sum(1 for l in labels if l.account_class is c) for c in AccountClass},
        oracle_paths=sum(1 for l in labels if l.verdict_trace[0] in ("b", "d")),
    )
    logger.info(
        "labeled %d accounts, spam evidence fraction %.3f, classes %s",
        summary["accounts"],
        summary["evidence_spam_fraction"],
        summary["classes"],
    )
    return labels, summary


def save_labels(labels: Iterable[LabeledAccount], path):
    write_jsonl((label.to_dict() for label in labels), path)


def load_labels(path) -> List[LabeledAccount]:
    return [LabeledAccount.from_dict(d) for d in read_jsonl(path)]
