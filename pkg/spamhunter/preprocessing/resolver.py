from dataclasses import dataclass, replace
from typing import Dict, Iterable, List, Mapping, Optional, Tuple
from urllib.parse import urljoin, urlsplit
import abc
import logging

from joblib import Parallel, delayed
import requests

from spamhunter.exceptions import InputError, ResolverError
from spamhunter.preprocessing.structures import AccountSnapshot

logger = logging.getLogger(__name__)

DEFAULT_MAX_HOPS = 10
DEFAULT_TIMEOUT_SEC = 10
REDIRECT_CODES = {301, 302, 303, 307, 308}


@dataclass(frozen=True)
class UrlResolution:
    original: str
    final: str
    redirect_hops: int = 0
    blacklisted: bool = False
    transport_error: bool = False


def canonical_url(url: str) -> str:
    """Validate ``url`` and give bare ``www.`` links an http scheme."""
    if not isinstance(url, str) or not url.strip():
        raise InputError(f"invalid URL {url!r}")
    url = url.strip()
    if url.lower().startswith("www."):
        url = "http://" + url
    parts = urlsplit(url)
    if parts.scheme.lower() not in ("http", "https") or not parts.hostname:
        raise InputError(f"invalid URL {url!r}")
    return url


class Blacklist:
    """Hostnames flagged as malicious; a host matches itself and its subdomains."""

    def __init__(self, hosts: Iterable[str] = ()):
        self.hosts = {h.strip().lower().rstrip(".") for h in hosts if h.strip()}

    def __len__(self):
        return len(self.hosts)

    @classmethod
    def load(cls, path) -> "Blacklist":
        with open(path, "r", encoding="utf-8") as f:
            hosts = [line.split("#", 1)[0] for line in f]
        blacklist = cls(hosts)
        logger.info("loaded %d blacklisted hosts from %s", len(blacklist), path)
        return blacklist

    def contains_host(self, host: Optional[str]) -> bool:
        if not host:
            return False
        labels = host.lower().rstrip(".").split(".")
        return any(".".join(labels[i:]) in self.hosts for i in range(len(labels)))

    def is_blacklisted(self, url: str) -> bool:
        try:
            return self.contains_host(urlsplit(canonical_url(url)).hostname)
        except InputError:
            return False


class UrlResolver(abc.ABC):
    """One redirect step at a time; implementations must be safe for concurrent use."""

    @abc.abstractmethod
    def next_hop(self, url: str) -> Optional[str]:
        """Return the redirect target of ``url`` or None when it does not redirect.

        Raises ResolverError on transport failures.
        """


class MockResolver(UrlResolver):
    """Table-driven resolver: ``redirects`` maps a URL to its redirect target."""

    def __init__(self, redirects: Optional[Mapping[str, str]] = None, failing: Iterable[str] = ()):
        self.redirects = dict(redirects or dict())
        self.failing = set(failing)

    def next_hop(self, url: str) -> Optional[str]:
        if url in self.failing:
            raise ResolverError(f"connection failed: {url}")
        return self.redirects.get(url)


class HttpResolver(UrlResolver):
    def __init__(self, method="HEAD", timeout=DEFAULT_TIMEOUT_SEC):
        self._method = method
        self._timeout = timeout

    def next_hop(self, url: str) -> Optional[str]:
        logger.debug("request, url='%s', method='%s'", url, self._method)
        try:
            response = requests.request(
                self._method, url, allow_redirects=False, timeout=self._timeout
            )
        except requests.RequestException as e:
            raise ResolverError(str(e)) from e
        with response:
            if response.status_code not in REDIRECT_CODES:
                return None
            location = response.headers.get("Location")
        if not location:
            logger.warning("location header missed: url='%s'", url)
            return None
        return urljoin(url, location)


def resolve_url(
    client: UrlResolver,
    url: str,
    blacklist: Optional[Blacklist] = None,
    max_hops: int = DEFAULT_MAX_HOPS,
) -> UrlResolution:
    original = url
    current = canonical_url(url)
    visited = {current}
    hops = 0
    transport_error = False
    while True:
        try:
            target = client.next_hop(current)
        except ResolverError as e:
            logger.warning("resolution of %s stopped at %s: %s", original, current, e)
            transport_error = True
            break
        if target is None:
            break
        if hops >= max_hops:
            logger.warning("hop limit %d reached for %s", max_hops, original)
            transport_error = True
            break
        if target in visited:
            logger.warning("cyclic redirect from %s to %s", current, target)
            transport_error = True
            break
        visited.add(target)
        current = target
        hops += 1
    final = original if hops == 0 else current
    blacklisted = blacklist is not None and blacklist.is_blacklisted(final)
    return UrlResolution(original, final, hops, blacklisted, transport_error)


def expand_urls(
    snapshots: List[AccountSnapshot],
    client: UrlResolver,
    blacklist: Optional[Blacklist] = None,
    max_hops: int = DEFAULT_MAX_HOPS,
    jobs: int = 1,
) -> Tuple[List[AccountSnapshot], Dict[str, UrlResolution]]:
    """Rewrite every tweet's URLs to their final form, resolving each distinct URL once."""
    distinct = sorted({u for s in snapshots for t in s.recent_tweets for u in t.urls})

    def _resolve(u):
        try:
            return resolve_url(client, u, blacklist, max_hops)
        except InputError:
            logger.debug("keeping unparseable URL %r as posted", u)
            return UrlResolution(u, u)

    results = Parallel(n_jobs=jobs, prefer="threads")(delayed(_resolve)(u) for u in distinct)
    resolutions = dict(zip(distinct, results))
    flagged = sum(r.blacklisted for r in results)
    if flagged:
        logger.warning("%d of %d URLs resolve to blacklisted hosts", flagged, len(distinct))
    expanded = [
        replace(
            s,
            recent_tweets=tuple(
                replace(t, urls=tuple(resolutions[u].final for u in t.urls))
                for t in s.recent_tweets
            ),
        )
        for s in snapshots
    ]
    return expanded, resolutions
