"""Experiment configuration: JSON schema, validation, seed precedence.

A config file is a JSON object with these keys (unknown keys are rejected):

``topology``     one topology text or a list of them, e.g. ``"4: 1-3,1-4,2-4,3-4"``
``n_samples``    samples per channel, integer >= 1
``snr_db``       one number or a list; each entry is a common per-node SNR in dB
                 (the sweep axis of an experiment grid)
``trials``       Monte Carlo trials per hypothesis, integer >= 1
``master_seed``  64-bit unsigned integer (optional here; see seed precedence)
``tol``          completion tolerance (optional, default 1e-10)
``max_iter``     completion sweep budget (optional, default 500)
``out_dir``      default output directory (optional; --out overrides)
``formats``      subset of ["csv", "json", "svg"] (optional, default csv+json)

Seed precedence: a --seed flag beats ``master_seed`` in the file, which beats
the ``COHERENCE_SEED`` environment variable. A seed must come from one of the
three; there is no implicit default.

A manifest emitted by a previous run (an object carrying ``config`` and
``results``) is accepted wherever a config is, and reproduces that run.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass

from .errors import ConfigError, InvalidInputError
from .maxent import DEFAULT_MAX_ITER, DEFAULT_TOL
from .topology import Topology

ENV_SEED = "COHERENCE_SEED"
KNOWN_KEYS = {
    "topology",
    "n_samples",
    "snr_db",
    "trials",
    "master_seed",
    "tol",
    "max_iter",
    "out_dir",
    "formats",
}
FORMATS = ("csv", "json", "svg")


@dataclass(frozen=True)
class ExperimentConfig:
    topologies: tuple[Topology, ...]
    n_samples: int
    snr_db: tuple[float, ...]
    trials: int
    master_seed: int
    tol: float
    max_iter: int
    out_dir: str | None
    formats: tuple[str, ...]


def _require_int(raw: dict, key: str, minimum: int, maximum: int | None = None) -> int:
    if key not in raw:
        raise ConfigError(f"missing required key {key!r}")
    v = raw[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"{key} must be an integer, got {v!r}")
    if v < minimum or (maximum is not None and v > maximum):
        bound = f">= {minimum}" if maximum is None else f"in [{minimum}, {maximum}]"
        raise ConfigError(f"{key} must be {bound}, got {v}")
    return v


def _parse_topologies(raw: dict) -> tuple[Topology, ...]:
    if "topology" not in raw:
        raise ConfigError("missing required key 'topology'")
    value = raw["topology"]
    texts = [value] if isinstance(value, str) else value
    if not isinstance(texts, list) or not texts or not all(isinstance(s, str) for s in texts):
        raise ConfigError("topology must be a topology text or a nonempty list of them")
    try:
        return tuple(Topology.parse(s) for s in texts)
    except InvalidInputError as exc:
        raise ConfigError(str(exc)) from exc


def _parse_snrs(raw: dict) -> tuple[float, ...]:
    if "snr_db" not in raw:
        raise ConfigError("missing required key 'snr_db'")
    value = raw["snr_db"]
    values = [value] if isinstance(value, (int, float)) and not isinstance(value, bool) else value
    if not isinstance(values, list) or not values:
        raise ConfigError("snr_db must be a number or a nonempty list of numbers")
    out = []
    for v in values:
        # JSON has no token for -inf; accept the string spelling too.
        if isinstance(v, str) and v.strip().lower() in ("-inf", "-infinity"):
            out.append(-math.inf)
            continue
        if isinstance(v, bool) or not isinstance(v, (int, float)) or math.isnan(v) or v == math.inf:
            raise ConfigError(f"snr_db entries must be finite or -inf, got {v!r}")
        out.append(float(v))
    return tuple(out)


def parse_config(
    raw: object, *, seed_override: int | None = None, env: dict | None = None
) -> ExperimentConfig:
    """Validate a decoded JSON object (or a manifest embedding one)."""
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    if "config" in raw and "results" in raw and isinstance(raw["config"], dict):
        raw = raw["config"]  # manifest round-trip
    unknown = sorted(set(raw) - KNOWN_KEYS)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")

    topologies = _parse_topologies(raw)
    n_samples = _require_int(raw, "n_samples", 1)
    snr_db = _parse_snrs(raw)
    trials = _require_int(raw, "trials", 1)

    if seed_override is not None:
        master_seed = seed_override
    elif "master_seed" in raw:
        master_seed = _require_int(raw, "master_seed", 0, 2**64 - 1)
    else:
        env = os.environ if env is None else env
        env_seed = env.get(ENV_SEED)
        if env_seed is None:
            raise ConfigError(
                f"no seed given: use --seed, config master_seed, or ${ENV_SEED}"
            )
        try:
            master_seed = int(env_seed)
        except ValueError:
            raise ConfigError(f"${ENV_SEED} must be an integer, got {env_seed!r}") from None
    if not 0 <= master_seed < 2**64:
        raise ConfigError(f"seed must be a 64-bit unsigned integer, got {master_seed}")

    tol = raw.get("tol", DEFAULT_TOL)
    if isinstance(tol, bool) or not isinstance(tol, (int, float)) or not 0 < tol < 1:
        raise ConfigError(f"tol must be a number in (0, 1), got {tol!r}")
    max_iter = _require_int(raw, "max_iter", 1) if "max_iter" in raw else DEFAULT_MAX_ITER

    out_dir = raw.get("out_dir")
    if out_dir is not None and not isinstance(out_dir, str):
        raise ConfigError(f"out_dir must be a string, got {out_dir!r}")

    formats = raw.get("formats", ["csv", "json"])
    if (
        not isinstance(formats, list)
        or not formats
        or any(f not in FORMATS for f in formats)
        or len(set(formats)) != len(formats)
    ):
        raise ConfigError(f"formats must be a nonempty subset of {list(FORMATS)}")

    return ExperimentConfig(
        topologies=topologies,
        n_samples=n_samples,
        snr_db=snr_db,
        trials=trials,
        master_seed=master_seed,
        tol=float(tol),
        max_iter=max_iter,
        out_dir=out_dir,
        formats=tuple(formats),
    )


def load_config(
    path: str, *, seed_override: int | None = None, env: dict | None = None
) -> ExperimentConfig:
    """Read and validate a config (or manifest) file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    return parse_config(raw, seed_override=seed_override, env=env)


def config_to_dict(cfg: ExperimentConfig) -> dict:
    """Manifest form of a config: enough to reproduce the run (out_dir excluded)."""
    return {
        "topology": [t.to_text() for t in cfg.topologies],
        "n_samples": cfg.n_samples,
        "snr_db": list(cfg.snr_db),
        "trials": cfg.trials,
        "master_seed": cfg.master_seed,
        "tol": cfg.tol,
        "max_iter": cfg.max_iter,
        "formats": list(cfg.formats),
    }
