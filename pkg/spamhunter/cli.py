"""Command-line entry point: one subcommand per pipeline stage.

Global flags go before the subcommand::

    spamhunter --jobs 4 synth --spammers 200 --legit 200 --out corpus
    spamhunter extract --snapshots corpus/snapshots.jsonl \\
        --dictionary corpus/spam_terms.txt --out features.jsonl
"""
from typing import Callable, Dict, List, Optional
import json
import logging
import os
import sys

from jsonargparse import ArgumentParser
import pandas as pd

from spamhunter import __version__
from spamhunter.config import PipelineConfig, config_path, load_config
from spamhunter.exceptions import (
    InputError,
    PresetNotFoundError,
    ProtocolError,
    TrainingError,
)
from spamhunter.features.catalog import catalog_names, extract_all, load_features, save_features
from spamhunter.features.dictionary import SpamDictionary
from spamhunter.hunter import CorpusEdgeProvider, HuntLimits, hunt, load_seeds, snapshot_index
from spamhunter.labeling.dictionary import build_spam_dictionary
from spamhunter.labeling.oracle import InteractiveOracle, ScriptedOracle
from spamhunter.labeling.rules import (
    label_evidence_tweets,
    load_evidence,
    sample_trend_tweets,
    save_evidence,
)
from spamhunter.labeling.workflow import label_accounts, load_labels, save_labels
from spamhunter.models.base import ALGORITHMS, load_model, predict, save_model, train
from spamhunter.models.selection import (
    RANKING_METHODS,
    feature_set_preset,
    load_feature_list,
    rank_features,
    select_features,
)
from spamhunter.preprocessing.datasets.base import Dataset
from spamhunter.preprocessing.datasets.synthetic import generate_corpus, write_synthetic_corpus
from spamhunter.preprocessing.reader import parse_corpus
from spamhunter.preprocessing.resolver import Blacklist, HttpResolver, MockResolver, expand_urls
from spamhunter.preprocessing.sources import (
    SourceCatalog,
    activity_frame,
    source_activity_report,
)
from spamhunter.preprocessing.store import (
    atomic_writer,
    dumps,
    load_snapshots,
    require_file,
    save_snapshots,
)
from spamhunter.result.base import write_report, write_results
from spamhunter.result.evaluation import compare

logger = logging.getLogger(__name__)

COMMANDS: Dict[str, Callable] = dict()


class RunContext:
    def __init__(self, config: PipelineConfig, jobs: int, progress: bool):
        self.config = config
        self.jobs = jobs
        self.progress = progress

    def path(self, flag: Optional[str], key: str, what: str) -> str:
        """Flag value, else the configured path for ``key``."""
        value = flag if flag is not None else getattr(self.config.paths, key)
        if value is None:
            raise InputError(f"no {what} given (flag or paths.{key} in the config)")
        return value


def command(name: str):
    def wrapper(fn):
        COMMANDS[name] = fn
        return fn

    return wrapper


def _parser(description: str) -> ArgumentParser:
    return ArgumentParser(description=description)


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(
        prog="spamhunter",
        description="Twitter spammer detection: ingestion, features, labeling, learning, hunting.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--config", type=Optional[str], default=None, help="pipeline YAML config")
    parser.add_argument("--jobs", type=Optional[int], default=None, help="worker count")
    parser.add_argument(
        "--log-level",
        type=str,
        default="INFO",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="logging level",
    )
    parser.add_argument("--quiet", action="store_true", help="hide progress bars")
    subcommands = parser.add_subcommands(required=True, dest="subcommand")

    p = _parser("Parse a line-delimited corpus into an account snapshot store.")
    p.add_argument("--corpus", type=Optional[str], default=None, help="corpus JSONL")
    p.add_argument("--out", type=Optional[str], default=None, help="snapshot store to write")
    p.add_argument("--strict", action="store_true", help="abort on the first malformed line")
    p.add_argument("--expand-urls", action="store_true", help="resolve URLs to final targets")
    p.add_argument("--redirects", type=Optional[str], default=None, help="offline url,location CSV")
    p.add_argument("--blacklist", type=Optional[str], default=None, help="blacklisted hosts")
    p.add_argument("--max-hops", type=int, default=10, help="redirect hop limit")
    subcommands.add_subcommand("ingest", p, help="parse a raw corpus")

    sources = _parser("Tweet source catalog tools.")
    subcommands.add_subcommand("sources", sources, help="source catalog tools")
    sources_sub = sources.add_subcommands(required=True, dest="action")
    p = _parser("Tweet count and share per source, most active first.")
    p.add_argument("--corpus", type=Optional[str], default=None, help="raw corpus JSONL")
    p.add_argument("--snapshots", type=Optional[str], default=None, help="snapshot store")
    p.add_argument("--catalog", type=Optional[str], default=None, help="source catalog CSV")
    p.add_argument("--out", type=str, required=True, help="report CSV")
    sources_sub.add_subcommand("report", p, help="source activity report")

    p = _parser("Compute the feature catalog for every account.")
    p.add_argument("--snapshots", type=Optional[str], default=None, help="snapshot store")
    p.add_argument(
        "--dict", "--dictionary", type=Optional[str], default=None, help="spam term file"
    )
    p.add_argument("--out", type=Optional[str], default=None, help="features JSONL")
    subcommands.add_subcommand("extract", p, help="extract features")

    p = _parser("Label accounts through the manual classification workflow.")
    p.add_argument("--snapshots", type=Optional[str], default=None, help="snapshot store")
    p.add_argument("--catalog", type=Optional[str], default=None, help="source catalog CSV")
    p.add_argument("--evidence", type=Optional[str], default=None, help="evidence tweet labels")
    p.add_argument(
        "--derive-evidence",
        action="store_true",
        help="label each account's newest tweet with the spam rule and write --evidence",
    )
    p.add_argument(
        "--hashtag",
        type=Optional[str],
        default=None,
        help="label a random sample of this trend's tweets and write --evidence",
    )
    p.add_argument("--sample-fraction", type=float, default=0.1, help="share of trend tweets")
    p.add_argument("--seed", type=Optional[int], default=None, help="sampling seed")
    p.add_argument("--blacklist", type=Optional[str], default=None, help="blacklisted hosts")
    _add_oracle_args(p, "labeler")
    p.add_argument("--out", type=Optional[str], default=None, help="labels JSONL")
    p.add_argument("--summary", type=Optional[str], default=None, help="summary JSON")
    subcommands.add_subcommand("label", p, help="label accounts")

    p = _parser("Build the spam dictionary from frequent terms of spam evidence tweets.")
    p.add_argument("--evidence", type=Optional[str], default=None, help="evidence tweet labels")
    p.add_argument("--min-freq", type=int, default=3, help="minimum term frequency")
    _add_oracle_args(p, "reviewer")
    p.add_argument("--out", type=Optional[str], default=None, help="spam term file")
    subcommands.add_subcommand("dict", p, help="build the spam dictionary")

    p = _parser("Train a classifier on labeled features.")
    _add_dataset_args(p)
    p.add_argument("--algo", type=str, default="random_forest", choices=list(ALGORITHMS))
    p.add_argument("--preset", type=str, default="paper-selected", help="feature-set preset")
    p.add_argument("--feature-list", type=Optional[str], default=None, help="feature name file")
    p.add_argument("--seed", type=Optional[int], default=None, help="random seed")
    p.add_argument("--out", type=Optional[str], default=None, help="model file")
    subcommands.add_subcommand("train", p, help="train a model")

    p = _parser("Rank features and prune correlated ones.")
    _add_dataset_args(p)
    p.add_argument("--method", type=str, default="infogain", choices=list(RANKING_METHODS))
    p.add_argument("--top", type=Optional[int], default=None, help="features kept before pruning")
    p.add_argument("--corr", type=Optional[float], default=None, help="correlation threshold")
    p.add_argument("--ranking-out", type=Optional[str], default=None, help="ranking CSV")
    p.add_argument("--out", type=Optional[str], default=None, help="selected feature list")
    subcommands.add_subcommand("select-features", p, help="feature selection")

    p = _parser("Cross-validate algorithms on feature sets.")
    _add_dataset_args(p)
    p.add_argument("--algo", type=str, default="all", choices=["all", *ALGORITHMS])
    p.add_argument(
        "--preset", type=str, nargs="+", default=["paper-selected"], help="feature-set presets"
    )
    p.add_argument("--feature-list", type=Optional[str], default=None, help="feature name file")
    p.add_argument("--k", type=Optional[int], default=None, help="folds")
    p.add_argument("--seed", type=Optional[int], default=None, help="random seed")
    p.add_argument("--out", type=str, required=True, help="report CSV")
    subcommands.add_subcommand("evaluate", p, help="cross-validation report")

    p = _parser("Apply a trained model to a features file.")
    p.add_argument("--model", type=Optional[str], default=None, help="model file")
    p.add_argument("--features", type=Optional[str], default=None, help="features JSONL")
    p.add_argument("--out", type=str, required=True, help="predictions CSV")
    subcommands.add_subcommand("classify", p, help="classify accounts")

    p = _parser("Expand detected spammers through followers and retweeters.")
    p.add_argument("--model", type=Optional[str], default=None, help="model file")
    p.add_argument("--snapshots", type=Optional[str], default=None, help="snapshot store")
    p.add_argument(
        "--dict", "--dictionary", type=Optional[str], default=None, help="spam term file"
    )
    p.add_argument("--edges", type=Optional[str], default=None, help="follower_id,followee_id CSV")
    p.add_argument("--seeds", type=str, required=True, help="seed account ids, one per line")
    p.add_argument("--max-depth", type=Optional[int], default=None, help="expansion depth")
    p.add_argument("--max-accounts", type=Optional[int], default=None, help="account limit")
    p.add_argument("--out", type=str, required=True, help="hunt CSV")
    subcommands.add_subcommand("hunt", p, help="hunt spammer neighborhoods")

    p = _parser("Generate a synthetic corpus with ground-truth labels.")
    p.add_argument("--spammers", type=int, default=100, help="spammer accounts")
    p.add_argument("--legit", type=int, default=100, help="legitimate accounts")
    p.add_argument("--compromised", type=int, default=0, help="compromised accounts")
    p.add_argument("--tweets", type=Optional[int], default=None, help="tweets per account")
    p.add_argument("--seed", type=Optional[int], default=None, help="random seed")
    p.add_argument("--out", type=str, required=True, help="output directory")
    subcommands.add_subcommand("synth", p, help="synthetic corpus")
    return parser


def _add_oracle_args(p: ArgumentParser, who: str):
    p.add_argument(
        "--answers", "--oracle", type=Optional[str], default=None, help="scripted answers JSONL"
    )
    p.add_argument("--interactive", action="store_true", help=f"ask the {who} on the terminal")
    p.add_argument("--labeler", type=str, default="human", help=f"name of the {who}")


def _add_dataset_args(p: ArgumentParser):
    p.add_argument("--features", type=Optional[str], default=None, help="features JSONL")
    p.add_argument("--labels", type=Optional[str], default=None, help="labels JSONL")


def _seed(flag: Optional[int], ctx: RunContext) -> int:
    return ctx.config.seed if flag is None else flag


def _load_dataset(args, ctx: RunContext) -> Dataset:
    vectors = load_features(ctx.path(args.features, "features", "features file"))
    labels = load_labels(ctx.path(args.labels, "labels", "labels file"))
    return Dataset.from_vectors(
        vectors, {l.account_id: l.account_class for l in labels}, catalog_names()
    )


def _feature_set(args):
    if args.feature_list is not None:
        name = os.path.splitext(os.path.basename(args.feature_list))[0]
        return name, load_feature_list(args.feature_list)
    return args.preset, feature_set_preset(args.preset)


def _oracle(args):
    if (args.answers is None) == (not args.interactive):
        raise InputError("give exactly one of --answers <script> and --interactive")
    if args.answers is not None:
        return ScriptedOracle.load(require_file(args.answers, "answer script"))
    return InteractiveOracle(args.labeler)


def _blacklist(flag: Optional[str], ctx: RunContext) -> Optional[Blacklist]:
    path = flag or ctx.config.paths.blacklist
    if path is None:
        return None
    return Blacklist.load(require_file(path, "blacklist"))


def _dictionary(flag: Optional[str], ctx: RunContext) -> SpamDictionary:
    path = ctx.path(flag, "dictionary", "spam dictionary")
    return SpamDictionary.load(require_file(path, "spam dictionary"))


@command("ingest")
def _ingest(args, ctx: RunContext):
    corpus = require_file(ctx.path(args.corpus, "corpus", "corpus"), "corpus")
    snapshots, stats = parse_corpus(corpus, strict=args.strict, progress=ctx.progress)
    if args.expand_urls:
        if args.redirects is not None:
            frame = pd.read_csv(
                require_file(args.redirects, "redirects file"), dtype=str, keep_default_na=False
            )
            client = MockResolver(dict(zip(frame["url"], frame["location"])))
        else:
            client = HttpResolver()
        blacklist = _blacklist(args.blacklist, ctx)
        snapshots, _ = expand_urls(snapshots, client, blacklist, args.max_hops, ctx.jobs)
    save_snapshots(snapshots, ctx.path(args.out, "snapshots", "snapshot store"))
    logger.info("ingest: %s", stats)


@command("sources")
def _sources(args, ctx: RunContext):
    report_args = args.report
    if report_args.corpus is not None:
        corpus = require_file(report_args.corpus, "corpus")
        snapshots, _ = parse_corpus(corpus, progress=ctx.progress)
    else:
        snapshots = load_snapshots(ctx.path(report_args.snapshots, "snapshots", "snapshot store"))
    catalog_path = report_args.catalog or ctx.config.paths.catalog
    catalog = None
    if catalog_path:
        catalog = SourceCatalog.load(require_file(catalog_path, "source catalog"))
    frame = activity_frame(source_activity_report(snapshots, catalog), catalog)
    with atomic_writer(report_args.out) as fout:
        frame.to_csv(fout, index=False, lineterminator="\n")


@command("extract")
def _extract(args, ctx: RunContext):
    snapshots = load_snapshots(ctx.path(args.snapshots, "snapshots", "snapshot store"))
    vectors = extract_all(
        snapshots,
        _dictionary(args.dict, ctx),
        ctx.jobs,
        ctx.progress,
        ctx.config.thresholds.duplicate,
    )
    save_features(vectors, ctx.path(args.out, "features", "features output"))


@command("label")
def _label(args, ctx: RunContext):
    snapshots = load_snapshots(ctx.path(args.snapshots, "snapshots", "snapshot store"))
    catalog = SourceCatalog.load(
        require_file(ctx.path(args.catalog, "catalog", "source catalog"), "source catalog")
    )
    oracle = _oracle(args)
    evidence_path = ctx.path(args.evidence, "evidence", "evidence file")
    if args.hashtag is not None or args.derive_evidence:
        if args.hashtag is not None:
            sample = sample_trend_tweets(
                snapshots, args.hashtag, args.sample_fraction, _seed(args.seed, ctx)
            )
        else:
            sample = [
                (acc.account_id, acc.recent_tweets[0]) for acc in snapshots if acc.recent_tweets
            ]
        tweet_labels = label_evidence_tweets(
            sample, args.hashtag, oracle, blacklist=_blacklist(args.blacklist, ctx)
        )
        save_evidence(tweet_labels, evidence_path)
    evidence = load_evidence(evidence_path)
    labels, summary = label_accounts(
        snapshots, catalog, evidence, oracle, ctx.config.thresholds.automation, ctx.jobs
    )
    save_labels(labels, ctx.path(args.out, "labels", "labels output"))
    if args.summary is not None:
        with atomic_writer(args.summary) as fout:
            fout.write(dumps(summary) + "\n")


@command("dict")
def _dict(args, ctx: RunContext):
    evidence = load_evidence(ctx.path(args.evidence, "evidence", "evidence file"))
    spam_texts = [e.text for e in evidence.values() if e.is_spam]
    review = _oracle(args)
    dictionary = build_spam_dictionary(spam_texts, args.min_freq, review)
    dictionary.save(ctx.path(args.out, "dictionary", "dictionary output"))
    logger.info("spam dictionary with %d terms", len(dictionary))


@command("train")
def _train(args, ctx: RunContext):
    ds = _load_dataset(args, ctx)
    _, names = _feature_set(args)
    config = ctx.config.learn.algorithm_config(args.algo)
    model = train(ds.project(names), args.algo, config, _seed(args.seed, ctx), ctx.jobs)
    save_model(model, ctx.path(args.out, "model", "model output"))


@command("select-features")
def _select_features(args, ctx: RunContext):
    ds = _load_dataset(args, ctx)
    thresholds, bins = ctx.config.thresholds, ctx.config.learn.bins
    top_k = thresholds.top_k if args.top is None else args.top
    corr = thresholds.corr if args.corr is None else args.corr
    if args.ranking_out is not None:
        write_results("ranking", [rank_features(ds, args.method, bins)], args.ranking_out)
    kept = select_features(ds, top_k, corr, bins)
    if args.out is not None:
        with atomic_writer(args.out) as fout:
            fout.writelines(f"{name}\n" for name in kept)
    else:
        print("\n".join(kept))


@command("evaluate")
def _evaluate(args, ctx: RunContext):
    ds = _load_dataset(args, ctx)
    if args.feature_list is not None:
        feature_sets = dict([_feature_set(args)])
    else:
        feature_sets = {preset: feature_set_preset(preset) for preset in args.preset}
    algorithms = list(ALGORITHMS) if args.algo == "all" else [args.algo]
    learn = ctx.config.learn
    reports = compare(
        ds,
        algorithms,
        feature_sets,
        learn.k if args.k is None else args.k,
        _seed(args.seed, ctx),
        {algo: learn.algorithm_config(algo) for algo in algorithms},
        ctx.jobs,
    )
    write_report(reports, args.out)


@command("classify")
def _classify(args, ctx: RunContext):
    model = load_model(ctx.path(args.model, "model", "model file"))
    vectors = load_features(ctx.path(args.features, "features", "features file"))
    rows = []
    for v in vectors:
        label, score = predict(model, v)
        rows.append((v.account_id, label, score))
    write_results("predictions", rows, args.out)


@command("hunt")
def _hunt(args, ctx: RunContext):
    model = load_model(ctx.path(args.model, "model", "model file"))
    snapshots = load_snapshots(ctx.path(args.snapshots, "snapshots", "snapshot store"))
    edges = args.edges or ctx.config.paths.edges
    provider = CorpusEdgeProvider.from_snapshots(snapshots, edges)
    hunter = ctx.config.hunter
    limits = HuntLimits(
        hunter.max_depth if args.max_depth is None else args.max_depth,
        hunter.max_accounts if args.max_accounts is None else args.max_accounts,
    )
    results = hunt(
        load_seeds(args.seeds),
        provider,
        model,
        snapshot_index(snapshots),
        _dictionary(args.dict, ctx),
        limits,
    )
    write_results("hunt", results, args.out)


@command("synth")
def _synth(args, ctx: RunContext):
    corpus = generate_corpus(
        args.spammers, args.legit, args.compromised, _seed(args.seed, ctx), args.tweets
    )
    paths = write_synthetic_corpus(corpus, args.out)
    logger.info("synthetic corpus written: %s", json.dumps(paths, sort_keys=True))


def _setup_logging(level: str):
    logging.basicConfig(
        level=getattr(logging, level),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )


def _fail(prefix: str, error: BaseException, code: int) -> int:
    print(f"{prefix}: {error}", file=sys.stderr)
    return code


def run(argv: Optional[List[str]] = None) -> int:
    """Parse ``argv`` and run one subcommand; returns the process exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code in (0, None) else 1
    _setup_logging(args.log_level)
    name = args.subcommand
    try:
        config = load_config(config_path(args.config))
        jobs = config.jobs if args.jobs is None else args.jobs
        if jobs == 0:
            raise InputError("--jobs must be non-zero")
        ctx = RunContext(config, jobs, progress=not args.quiet and sys.stderr.isatty())
        COMMANDS[name](args[name], ctx)
    except InputError as e:
        return _fail("E_INPUT", e, 1)
    except TrainingError as e:
        return _fail("E_TRAIN", e, 1)
    except ProtocolError as e:
        return _fail("E_PROTOCOL", e, 1)
    except PresetNotFoundError as e:
        return _fail("E_PRESET", e, 1)
    except Exception as e:
        logger.exception("%s failed", name)
        return _fail("E_INTERNAL", e, 2)
    return 0


def cli():
    sys.exit(run())
