"""News-angle generation: prompt assembly, completion providers, and parsing.

The generation prompt and default sampling parameters are fixed to the
configuration that won the rating study; a deterministic stub provider keeps
the whole path testable offline.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
import threading
import time
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Protocol

import numpy as np
import requests

from cnd.relevance import EmbeddingProvider, ProviderError, cosine
from cnd.textfeat import tokenize

if TYPE_CHECKING:
    from cnd.corpus import ArticleRecord

LLM_URL_ENV = "CND_LLM_URL"
LLM_KEY_ENV = "CND_LLM_API_KEY"

PROMPT_INSTRUCTION = "List three newsworthy headlines for this abstract: "

DEFAULT_MODEL_NAME = "text-davinci-002"
DEFAULT_REDUNDANCY_THRESHOLD = 0.9


class IncompleteGenerationError(ValueError):
    """Completion held fewer than three usable lines; carries the raw text."""

    def __init__(self, completion: str):
        super().__init__(f"incomplete generation: {len(_nonempty_lines(completion))} angle lines")
        self.completion = completion


@dataclass(frozen=True)
class GenerationParams:
    """Sampling parameters sent to the completion provider."""

    temperature: float = 0.85
    frequency_penalty: float = 0.85
    presence_penalty: float = 0.85
    model_name: str = DEFAULT_MODEL_NAME

    def __post_init__(self):
        if self.temperature < 0:
            raise ValueError(f"temperature must be >= 0, got {self.temperature}")
        for name in ("frequency_penalty", "presence_penalty"):
            value = getattr(self, name)
            if not -2.0 <= value <= 2.0:
                raise ValueError(f"{name} must be in [-2, 2], got {value}")

    def to_json_dict(self) -> dict:
        return {
            "temperature": self.temperature,
            "frequency_penalty": self.frequency_penalty,
            "presence_penalty": self.presence_penalty,
            "model_name": self.model_name,
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "GenerationParams":
        return cls(
            temperature=obj["temperature"],
            frequency_penalty=obj["frequency_penalty"],
            presence_penalty=obj["presence_penalty"],
            model_name=obj.get("model_name", DEFAULT_MODEL_NAME),
        )


@dataclass(frozen=True)
class AngleSet:
    """Three generated news angles plus full provenance for one article."""

    article_id: str
    angles: tuple[str, str, str]
    prompt_text: str
    params: GenerationParams
    redundant_flags: tuple[bool, bool, bool]
    provider_meta: dict[str, str] = field(default_factory=dict, compare=True, hash=False)

    def __post_init__(self):
        if len(self.angles) != 3 or any(not a for a in self.angles):
            raise ValueError(f"angle set needs exactly 3 nonempty angles: {self.angles!r}")
        if len(self.redundant_flags) != 3:
            raise ValueError("redundant_flags must align with the three angles")

    def to_json_dict(self) -> dict:
        return {
            "article_id": self.article_id,
            "angles": list(self.angles),
            "prompt_text": self.prompt_text,
            "params": self.params.to_json_dict(),
            "redundant_flags": list(self.redundant_flags),
            "provider_meta": dict(self.provider_meta),
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "AngleSet":
        return cls(
            article_id=obj["article_id"],
            angles=tuple(obj["angles"]),
            prompt_text=obj["prompt_text"],
            params=GenerationParams.from_json_dict(obj["params"]),
            redundant_flags=tuple(bool(f) for f in obj["redundant_flags"]),
            provider_meta=dict(obj.get("provider_meta", {})),
        )


class AngleProvider(Protocol):
    def complete(self, prompt: str, params: GenerationParams) -> str: ...


def build_prompt(article: "ArticleRecord") -> str:
    """The generation prompt: the fixed instruction, then title and abstract."""
    return f"{PROMPT_INSTRUCTION}{article.title} {article.abstract}".rstrip()


_MARKER_RE = re.compile(r"^\s*(?:\d+\s*[.)]\s*|[-•*]\s+)")
_QUOTE_PAIRS = (('"', '"'), ("'", "'"), ("“", "”"), ("‘", "’"))


def _strip_markers(line: str) -> str:
    line = line.strip()
    while True:
        stripped = _MARKER_RE.sub("", line, count=1)
        if stripped == line:
            break
        line = stripped.strip()
    for open_q, close_q in _QUOTE_PAIRS:
        if len(line) >= 2 and line.startswith(open_q) and line.endswith(close_q):
            line = line[1:-1].strip()
    return line


def _nonempty_lines(completion: str) -> list[str]:
    cleaned = (_strip_markers(line) for line in completion.splitlines())
    return [line for line in cleaned if line]


def parse_angles(completion: str) -> list[str]:
    """First three nonempty lines of a completion, markers and quotes stripped.

    Handles numbered ("1.", "2)"), dashed, and bulleted enumeration styles.
    Raises IncompleteGenerationError when fewer than three usable lines exist.
    """
    lines = _nonempty_lines(completion)
    if len(lines) < 3:
        raise IncompleteGenerationError(completion)
    return lines[:3]


ANGLE_STYLES = ("numbered", "paren", "bullet", "dash")


def format_angles(angles: list[str], style: str = "numbered") -> str:
    """Render three angles in one of the enumeration styles parse_angles accepts."""
    if style == "numbered":
        return "\n".join(f"{i}. {a}" for i, a in enumerate(angles, 1))
    if style == "paren":
        return "\n".join(f"{i}) {a}" for i, a in enumerate(angles, 1))
    if style == "bullet":
        return "\n".join(f"• {a}" for a in angles)
    if style == "dash":
        return "\n".join(f"- {a}" for a in angles)
    raise ValueError(f"unknown angle style {style!r}")


def flag_redundant(
    angles: list[str],
    abstract: str,
    provider: EmbeddingProvider,
    threshold: float = DEFAULT_REDUNDANCY_THRESHOLD,
) -> list[bool]:
    """Mark angles too similar to the abstract or to an earlier angle.

    Angle i is flagged when cosine(angle_i, abstract) >= threshold, or when
    cosine(angle_i, angle_j) >= threshold for some j < i -- the earlier
    duplicate is the one retained. Index 0 can only be flagged against the
    abstract.
    """
    if not 0.0 < threshold <= 1.0:
        raise ValueError(f"threshold must be in (0, 1], got {threshold}")
    if len(angles) != 3:
        raise ValueError(f"expected 3 angles, got {len(angles)}")
    vectors = provider.embed([abstract, *angles])
    abstract_vec, angle_vecs = vectors[0], vectors[1:]
    flags = []
    for i, vec in enumerate(angle_vecs):
        flagged = cosine(vec, abstract_vec) >= threshold or any(
            cosine(vec, angle_vecs[j]) >= threshold for j in range(i)
        )
        flags.append(flagged)
    return flags


class RateLimiter:
    """Spaces provider calls to a requests-per-minute budget."""

    def __init__(self, per_minute: float):
        if per_minute <= 0:
            raise ValueError(f"per_minute must be positive, got {per_minute}")
        self.interval = 60.0 / per_minute
        self._next_slot = 0.0
        self._lock = threading.Lock()

    def reserve(self) -> float:
        """Claim the next slot; returns how long the caller must wait."""
        with self._lock:
            now = time.monotonic()
            wait = max(0.0, self._next_slot - now)
            self._next_slot = max(now, self._next_slot) + self.interval
            return wait

    def acquire(self) -> None:
        wait = self.reserve()
        if wait > 0:
            time.sleep(wait)


class StubAngleProvider:
    """Offline deterministic provider: headlines templated from prompt words."""

    _TEMPLATES = (
        "Researchers unveil {0} {1} approach with wide implications",
        "New study links {2} advances to real-world {3} impact",
        "Experts question how {4} findings could reshape {5}",
    )

    def __init__(self):
        self.calls = 0

    def complete(self, prompt: str, params: GenerationParams) -> str:
        self.calls += 1
        material = prompt + "\x00" + json.dumps(params.to_json_dict(), sort_keys=True)
        digest = hashlib.blake2b(material.encode("utf-8"), digest_size=8).digest()
        rng = np.random.default_rng(int.from_bytes(digest, "little"))
        tokens = tokenize(prompt)
        body = tokens[7:] or tokens  # skip the instruction's own words
        words = [body[int(i)] for i in rng.integers(0, len(body), size=6)]
        lines = [t.format(*words) for t in self._TEMPLATES]
        return format_angles(lines, style="numbered")


class FixedAngleProvider:
    """Test provider returning one canned completion; counts invocations."""

    def __init__(self, completion: str):
        self.completion = completion
        self.calls = 0

    def complete(self, prompt: str, params: GenerationParams) -> str:
        self.calls += 1
        return self.completion


class HttpAngleProvider:
    """Remote completion service speaking POST /complete -> {text}."""

    def __init__(
        self,
        url: str | None = None,
        api_key: str | None = None,
        timeout: float = 120.0,
        rate_limiter: RateLimiter | None = None,
    ):
        self.url = url or os.environ.get(LLM_URL_ENV, "")
        if not self.url:
            raise ProviderError(f"no completion endpoint configured ({LLM_URL_ENV})")
        self.api_key = api_key if api_key is not None else os.environ.get(LLM_KEY_ENV)
        self.timeout = timeout
        self.rate_limiter = rate_limiter

    def _endpoint(self) -> str:
        base = self.url.rstrip("/")
        return base if base.endswith("/complete") else base + "/complete"

    def complete(self, prompt: str, params: GenerationParams) -> str:
        if self.rate_limiter is not None:
            self.rate_limiter.acquire()
        headers = {}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        payload = {
            "model": params.model_name,
            "prompt": prompt,
            "temperature": params.temperature,
            "frequency_penalty": params.frequency_penalty,
            "presence_penalty": params.presence_penalty,
        }
        try:
            resp = requests.post(
                self._endpoint(), json=payload, headers=headers, timeout=self.timeout
            )
        except requests.RequestException as exc:
            raise ProviderError(f"completion request failed: {type(exc).__name__}") from exc
        if resp.status_code != 200:
            raise ProviderError(f"completion service returned HTTP {resp.status_code}")
        text = resp.json().get("text")
        if not isinstance(text, str):
            raise ProviderError("completion service returned no text field")
        return text


def generate_angles(
    article: "ArticleRecord",
    provider: AngleProvider,
    embed: EmbeddingProvider,
    params: GenerationParams | None = None,
    threshold: float = DEFAULT_REDUNDANCY_THRESHOLD,
    fresh: bool = False,
) -> AngleSet:
    """Prompt -> complete -> parse -> flag, with a per-article cache.

    A cached AngleSet is returned without touching the providers unless
    ``fresh`` is set. Provider and parsing errors propagate; the cache is
    only written when the whole pipeline succeeded.
    """
    if article.angle_cache is not None and not fresh:
        return article.angle_cache
    params = params or GenerationParams()
    prompt = build_prompt(article)
    completion = provider.complete(prompt, params)
    parsed = parse_angles(completion)
    flags = flag_redundant(parsed, article.abstract, embed, threshold=threshold)
    angle_set = AngleSet(
        article_id=article.id,
        angles=tuple(parsed),
        prompt_text=prompt,
        params=params,
        redundant_flags=tuple(flags),
        provider_meta={"provider": type(provider).__name__, "model": params.model_name},
    )
    article.angle_cache = angle_set
    return angle_set
