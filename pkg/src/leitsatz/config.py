"""Run configuration: dataclass defaults, a TOML file, env-var secrets.

One config file describes a whole pipeline run. Secrets (reviewer tokens,
admin token, endpoint auth) are never required to live in the file: each
has an environment variable that overrides or replaces the file value.
"""

from __future__ import annotations

import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

DEFAULT_REVIEWER_TOKEN_PREFIX = "LEITSATZ_TOKEN_"
DEFAULT_ADMIN_TOKEN_ENV = "LEITSATZ_ADMIN_TOKEN"


@dataclass
class PathsConfig:
    corpus: str = "data/corpus.jsonl"
    corpus_format: str = "jsonl"
    spans: str = ""
    out_dir: str = "out"


@dataclass
class TokenizerConfig:
    profile: str = "word"
    base_url: str = ""
    timeout: float = 30.0

    def validate(self) -> None:
        if self.profile not in ("word", "remote"):
            raise ConfigError(f"tokenizer.profile must be 'word' or 'remote', got {self.profile!r}")
        if self.profile == "remote" and not self.base_url:
            raise ConfigError("tokenizer.profile 'remote' needs tokenizer.base_url")


@dataclass
class EndpointProfile:
    name: str
    base_url: str
    auth_header: str = ""
    auth_token_env: str = ""
    prompt_overhead: int = 64
    timeout: float = 120.0

    def headers(self) -> dict[str, str]:
        if not self.auth_header:
            return {}
        if not self.auth_token_env:
            raise ConfigError(
                f"endpoint {self.name!r} sets auth_header but no auth_token_env"
            )
        token = os.environ.get(self.auth_token_env, "")
        if not token:
            raise ConfigError(
                f"endpoint {self.name!r}: environment variable {self.auth_token_env} is not set"
            )
        return {self.auth_header: f"Bearer {token}"}

    def validate(self) -> None:
        if not self.base_url:
            raise ConfigError(f"endpoint {self.name!r} needs a base_url")
        if self.prompt_overhead < 0:
            raise ConfigError(f"endpoint {self.name!r}: prompt_overhead must be >= 0")


@dataclass
class GenerationConfig:
    default: str = ""
    endpoints: dict[str, EndpointProfile] = field(default_factory=dict)

    def profile(self, name: str = "") -> EndpointProfile:
        wanted = name or self.default
        if not wanted:
            raise ConfigError("no generation endpoint configured (generation.default)")
        if wanted not in self.endpoints:
            known = ", ".join(sorted(self.endpoints)) or "none"
            raise ConfigError(f"unknown generation endpoint {wanted!r} (known: {known})")
        return self.endpoints[wanted]


@dataclass
class LexrankParams:
    k: int = 2
    threshold: float = 0.1
    damping: float = 0.85

    def validate(self) -> None:
        if self.k < 1:
            raise ConfigError(f"lexrank.k must be >= 1, got {self.k}")
        if self.threshold < 0:
            raise ConfigError(f"lexrank.threshold must be >= 0, got {self.threshold}")
        if not (0.0 < self.damping < 1.0):
            raise ConfigError(f"lexrank.damping must be in (0, 1), got {self.damping}")


@dataclass
class Budgets:
    context_window: int = 32768
    max_new_tokens: int = 750

    def validate(self) -> None:
        if self.context_window < 1:
            raise ConfigError(f"budgets.context_window must be >= 1, got {self.context_window}")
        if not (0 < self.max_new_tokens < self.context_window):
            raise ConfigError(
                f"budgets.max_new_tokens must be positive and below the context window, "
                f"got {self.max_new_tokens} with window {self.context_window}"
            )


@dataclass
class MetricsFlags:
    enabled: tuple[str, ...] = ("rouge1", "rouge2", "rougeL")
    embedding_url: str = ""
    embedding_file: str = ""


@dataclass
class SplitParams:
    ratios: tuple[float, float, float] = (0.7, 0.15, 0.15)
    seed: int = 13


@dataclass
class AssignmentParams:
    per_item: int = 3
    seed: int = 7

    def validate(self) -> None:
        if self.per_item < 1:
            raise ConfigError(f"assignment.per_item must be >= 1, got {self.per_item}")


@dataclass
class ServiceParams:
    host: str = "127.0.0.1"
    port: int = 8400
    show_excerpt: bool = True
    reviewer_tokens: dict[str, str] = field(default_factory=dict)
    admin_token: str = ""
    admin_token_env: str = DEFAULT_ADMIN_TOKEN_ENV

    def resolved_reviewer_tokens(self) -> dict[str, str]:
        """File tokens with per-reviewer env overrides (LEITSATZ_TOKEN_<ID>)."""
        out = dict(self.reviewer_tokens)
        for reviewer in out:
            env_name = DEFAULT_REVIEWER_TOKEN_PREFIX + reviewer.upper()
            env_value = os.environ.get(env_name)
            if env_value:
                out[reviewer] = env_value
        missing = [r for r, t in out.items() if not t]
        if missing:
            raise ConfigError(
                "reviewers without tokens: "
                + ", ".join(
                    f"{r} (set {DEFAULT_REVIEWER_TOKEN_PREFIX + r.upper()})" for r in missing
                )
            )
        return out

    def resolved_admin_token(self) -> str:
        env_value = os.environ.get(self.admin_token_env or DEFAULT_ADMIN_TOKEN_ENV)
        token = env_value or self.admin_token
        if not token:
            raise ConfigError(
                f"no admin token: set {self.admin_token_env or DEFAULT_ADMIN_TOKEN_ENV} "
                "or service.admin_token"
            )
        return token


@dataclass
class CorpusParams:
    reasons_heading: str = "Entscheidungsgründe"
    max_gold_tokens: int = 0


@dataclass
class PipelineConfig:
    paths: PathsConfig = field(default_factory=PathsConfig)
    tokenizer: TokenizerConfig = field(default_factory=TokenizerConfig)
    generation: GenerationConfig = field(default_factory=GenerationConfig)
    lexrank: LexrankParams = field(default_factory=LexrankParams)
    budgets: Budgets = field(default_factory=Budgets)
    metrics: MetricsFlags = field(default_factory=MetricsFlags)
    split: SplitParams = field(default_factory=SplitParams)
    assignment: AssignmentParams = field(default_factory=AssignmentParams)
    service: ServiceParams = field(default_factory=ServiceParams)
    corpus: CorpusParams = field(default_factory=CorpusParams)

    def validate(self) -> None:
        self.tokenizer.validate()
        self.lexrank.validate()
        self.budgets.validate()
        self.assignment.validate()
        for profile in self.generation.endpoints.values():
            profile.validate()


def _take(table: dict, section: str, key: str, kind, default):
    if key not in table:
        return default
    value = table.pop(key)
    if kind is float and isinstance(value, int) and not isinstance(value, bool):
        value = float(value)
    if kind is not None and not isinstance(value, kind):
        raise ConfigError(
            f"config {section}.{key}: expected {kind.__name__}, got {type(value).__name__}"
        )
    return value


def _reject_leftovers(table: dict, section: str) -> None:
    if table:
        raise ConfigError(f"unknown config key(s) in [{section}]: {', '.join(sorted(table))}")


def load_config(path: str | Path | None = None) -> PipelineConfig:
    """Parse the TOML config file; a missing path yields pure defaults."""
    cfg = PipelineConfig()
    if path is None:
        return cfg
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file does not exist: {p}")
    try:
        with p.open("rb") as fh:
            raw = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config file {p}: {exc}") from exc

    paths = raw.pop("paths", {})
    cfg.paths = PathsConfig(
        corpus=_take(paths, "paths", "corpus", str, cfg.paths.corpus),
        corpus_format=_take(paths, "paths", "format", str, cfg.paths.corpus_format),
        spans=_take(paths, "paths", "spans", str, cfg.paths.spans),
        out_dir=_take(paths, "paths", "out_dir", str, cfg.paths.out_dir),
    )
    _reject_leftovers(paths, "paths")

    tok = raw.pop("tokenizer", {})
    cfg.tokenizer = TokenizerConfig(
        profile=_take(tok, "tokenizer", "profile", str, cfg.tokenizer.profile),
        base_url=_take(tok, "tokenizer", "base_url", str, cfg.tokenizer.base_url),
        timeout=_take(tok, "tokenizer", "timeout", float, cfg.tokenizer.timeout),
    )
    _reject_leftovers(tok, "tokenizer")

    gen = raw.pop("generation", {})
    default = _take(gen, "generation", "default", str, "")
    endpoints: dict[str, EndpointProfile] = {}
    raw_endpoints = gen.pop("endpoints", {})
    if not isinstance(raw_endpoints, dict):
        raise ConfigError("config generation.endpoints: expected a table of profiles")
    for name, body in raw_endpoints.items():
        if not isinstance(body, dict):
            raise ConfigError(f"config generation.endpoints.{name}: expected a table")
        section = f"generation.endpoints.{name}"
        endpoints[name] = EndpointProfile(
            name=name,
            base_url=_take(body, section, "base_url", str, ""),
            auth_header=_take(body, section, "auth_header", str, ""),
            auth_token_env=_take(body, section, "auth_token_env", str, ""),
            prompt_overhead=_take(body, section, "prompt_overhead", int, 64),
            timeout=_take(body, section, "timeout", float, 120.0),
        )
        _reject_leftovers(body, section)
    if not default and len(endpoints) == 1:
        default = next(iter(endpoints))
    cfg.generation = GenerationConfig(default=default, endpoints=endpoints)
    _reject_leftovers(gen, "generation")

    lex = raw.pop("lexrank", {})
    cfg.lexrank = LexrankParams(
        k=_take(lex, "lexrank", "k", int, cfg.lexrank.k),
        threshold=_take(lex, "lexrank", "threshold", float, cfg.lexrank.threshold),
        damping=_take(lex, "lexrank", "damping", float, cfg.lexrank.damping),
    )
    _reject_leftovers(lex, "lexrank")

    bud = raw.pop("budgets", {})
    cfg.budgets = Budgets(
        context_window=_take(bud, "budgets", "context_window", int, cfg.budgets.context_window),
        max_new_tokens=_take(bud, "budgets", "max_new_tokens", int, cfg.budgets.max_new_tokens),
    )
    _reject_leftovers(bud, "budgets")

    met = raw.pop("metrics", {})
    enabled = _take(met, "metrics", "enabled", list, list(cfg.metrics.enabled))
    if not all(isinstance(m, str) for m in enabled):
        raise ConfigError("config metrics.enabled: expected a list of strings")
    cfg.metrics = MetricsFlags(
        enabled=tuple(enabled),
        embedding_url=_take(met, "metrics", "embedding_url", str, cfg.metrics.embedding_url),
        embedding_file=_take(met, "metrics", "embedding_file", str, cfg.metrics.embedding_file),
    )
    _reject_leftovers(met, "metrics")

    spl = raw.pop("split", {})
    ratios = _take(spl, "split", "ratios", list, list(cfg.split.ratios))
    if len(ratios) != 3 or not all(isinstance(r, (int, float)) for r in ratios):
        raise ConfigError("config split.ratios: expected three numbers")
    cfg.split = SplitParams(
        ratios=tuple(float(r) for r in ratios),
        seed=_take(spl, "split", "seed", int, cfg.split.seed),
    )
    _reject_leftovers(spl, "split")

    asg = raw.pop("assignment", {})
    cfg.assignment = AssignmentParams(
        per_item=_take(asg, "assignment", "per_item", int, cfg.assignment.per_item),
        seed=_take(asg, "assignment", "seed", int, cfg.assignment.seed),
    )
    _reject_leftovers(asg, "assignment")

    svc = raw.pop("service", {})
    tokens = svc.pop("reviewer_tokens", {})
    if not isinstance(tokens, dict) or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in tokens.items()
    ):
        raise ConfigError("config service.reviewer_tokens: expected a table of strings")
    cfg.service = ServiceParams(
        host=_take(svc, "service", "host", str, cfg.service.host),
        port=_take(svc, "service", "port", int, cfg.service.port),
        show_excerpt=_take(svc, "service", "show_excerpt", bool, cfg.service.show_excerpt),
        reviewer_tokens=dict(tokens),
        admin_token=_take(svc, "service", "admin_token", str, cfg.service.admin_token),
        admin_token_env=_take(svc, "service", "admin_token_env", str, cfg.service.admin_token_env),
    )
    _reject_leftovers(svc, "service")

    cor = raw.pop("corpus", {})
    cfg.corpus = CorpusParams(
        reasons_heading=_take(cor, "corpus", "reasons_heading", str, cfg.corpus.reasons_heading),
        max_gold_tokens=_take(cor, "corpus", "max_gold_tokens", int, cfg.corpus.max_gold_tokens),
    )
    _reject_leftovers(cor, "corpus")

    if raw:
        raise ConfigError(f"unknown config section(s): {', '.join(sorted(raw))}")
    cfg.validate()
    return cfg
