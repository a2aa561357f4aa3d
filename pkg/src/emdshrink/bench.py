"""Output-SNR benchmark over a corpus, an input-SNR sweep and noise seeds.

Every (file, input SNR, seed, method) combination is one trial. Trials are
keyed and sorted before aggregation, so the report does not depend on the
order in which they ran.
"""

from __future__ import annotations

import csv
import datetime
import hashlib
import io
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import __version__
from .baselines import (WINDOW_NAME, DwtConfig, WienerConfig,
                        universal_dwt_denoise, wiener_denoise)
from .pipeline import (DenoiseConfig, NoisePolicy, denoise_emd_normalshrink,
                       denoise_emd_universal)
from .shrinkage import Flavor
from .signal_core import NoiseSpec, add_awgn, snr_db, snr_out_paper

logger = logging.getLogger(__name__)

METHODS = ("proposed", "emd-universal-soft", "emd-universal-hard",
           "dwt-soft", "dwt-hard", "wiener")
COMPARISON_METHODS = ("dwt-soft", "dwt-hard", "wiener", "proposed")
METRICS = ("snr_out_paper", "snr_db")


@dataclass(frozen=True)
class BenchConfig:
    """``noise_reference="known"`` hands the injected noise level to the
    methods that take one (EMD pipelines, Wiener); ``"blind"`` makes them
    estimate it from the noisy input."""

    denoise: DenoiseConfig = field(default_factory=DenoiseConfig)
    wiener: WienerConfig = field(default_factory=WienerConfig)
    dwt: DwtConfig = field(default_factory=DwtConfig)
    noise_reference: str = "known"

    def __post_init__(self):
        if self.noise_reference not in ("known", "blind"):
            raise ValueError("noise_reference must be 'known' or 'blind'")

    def as_dict(self):
        return {"denoise": self.denoise.as_dict(),
                "wiener": self.wiener.as_dict(),
                "dwt": self.dwt.as_dict(),
                "noise_reference": self.noise_reference}

    def fingerprint(self) -> str:
        blob = json.dumps(self.as_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()


def run_method(method: str, noisy: np.ndarray, noise_sigma: Optional[float],
               config: BenchConfig):
    """Denoise ``noisy`` with a named method.

    Returns the denoised samples and, for the EMD methods, the trace.
    ``noise_sigma`` is only used when it is not ``None``.
    """
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")
    dcfg = config.denoise
    if noise_sigma is not None and method in ("proposed", "emd-universal-soft",
                                              "emd-universal-hard"):
        dcfg = replace(dcfg, noise_policy=NoisePolicy.KNOWN,
                       known_noise_sigma=float(noise_sigma))
    if method == "proposed":
        trace = denoise_emd_normalshrink(noisy, dcfg)
        return trace.denoised, trace
    if method.startswith("emd-universal-"):
        trace = denoise_emd_universal(noisy, Flavor(method.rsplit("-", 1)[1]), dcfg)
        return trace.denoised, trace
    if method.startswith("dwt-"):
        return universal_dwt_denoise(noisy, Flavor(method.split("-")[1]), config.dwt), None
    wcfg = config.wiener
    if noise_sigma is not None:
        wcfg = replace(wcfg, noise_power=float(noise_sigma) ** 2)
    return wiener_denoise(noisy, wcfg), None


def _trial(args) -> dict:
    name, clean, snr, seed, method, config = args
    rec = {"file": name, "input_snr_db": float(snr), "seed": int(seed), "method": method}
    try:
        noisy, noise = add_awgn(clean, NoiseSpec(float(snr), int(seed)))
        sigma = (float(np.sqrt(np.mean(noise ** 2)))
                 if config.noise_reference == "known" else None)
        denoised, trace = run_method(method, noisy, sigma, config)
        rec["realized_input_snr_db"] = snr_db(clean, noisy)
        rec["snr_out_paper"] = snr_out_paper(clean, denoised)
        rec["snr_db"] = snr_db(clean, denoised)
        if trace is not None:
            rec["num_imfs"] = trace.decomposition.num_imfs
            rec.update(trace.counts())
    except Exception as exc:  # one bad trial must not abort the sweep
        logger.warning("trial %s failed: %s", rec, exc)
        rec["error"] = f"{type(exc).__name__}: {exc}"
    return rec


@dataclass
class BenchReport:
    methods: List[str]
    snrs: List[float]
    files: List[str]
    seeds: int
    config: BenchConfig
    trials: List[dict]
    generated_at: str = ""

    @property
    def ok_trials(self) -> List[dict]:
        return [t for t in self.trials if "error" not in t]

    @property
    def failures(self) -> List[dict]:
        return [t for t in self.trials if "error" in t]

    def values(self, method: str, snr: float, metric: str = "snr_out_paper") -> np.ndarray:
        return np.array([t[metric] for t in self.ok_trials
                         if t["method"] == method and t["input_snr_db"] == float(snr)])

    def cell(self, method: str, snr: float, metric: str = "snr_out_paper") -> dict:
        v = self.values(method, snr, metric)
        if v.size == 0:
            return {"n": 0, "mean": float("nan"), "std": float("nan")}
        std = float(np.std(v, ddof=1)) if v.size > 1 else 0.0
        return {"n": int(v.size), "mean": float(np.mean(v)), "std": std}

    def mean(self, method: str, snr: float, metric: str = "snr_out_paper") -> float:
        return self.cell(method, snr, metric)["mean"]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(["metric", "input_snr_db", *self.methods])
        for metric in METRICS:
            for snr in self.snrs:
                row = [metric, _fmt_snr(snr)]
                for m in self.methods:
                    c = self.cell(m, snr, metric)
                    row.append(f"{c['mean']:.4f}±{c['std']:.4f}")
                w.writerow(row)
        return buf.getvalue()

    def to_json(self) -> str:
        cells = []
        for snr in self.snrs:
            for m in self.methods:
                entry = {"method": m, "input_snr_db": snr}
                for metric in METRICS:
                    c = self.cell(m, snr, metric)
                    entry["n"] = c["n"]
                    entry[f"{metric}_mean"] = c["mean"]
                    entry[f"{metric}_std"] = c["std"]
                cells.append(entry)
        doc = {
            "generated_at": self.generated_at,
            "version": __version__,
            "config_fingerprint": self.config.fingerprint(),
            "config": self.config.as_dict(),
            "wiener_window": WINDOW_NAME,
            "methods": self.methods,
            "input_snrs_db": self.snrs,
            "files": self.files,
            "seeds": self.seeds,
            "cells": cells,
            "trials": self.trials,
        }
        return json.dumps(_jsonable(doc), indent=2, sort_keys=True) + "\n"


def _fmt_snr(snr: float) -> str:
    return f"{snr:g}"


def _jsonable(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return "nan" if math.isnan(obj) else ("inf" if obj > 0 else "-inf")
    if isinstance(obj, (np.floating, np.integer)):
        return _jsonable(obj.item())
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def run_bench(corpus: Dict[str, np.ndarray], snrs: Sequence[float], seeds: int,
              methods: Sequence[str] = COMPARISON_METHODS,
              config: BenchConfig = BenchConfig(), jobs: int = 1) -> BenchReport:
    """Run every (file, snr, seed, method) trial; seeds are ``0 .. seeds-1``."""
    if not corpus:
        raise ValueError("empty corpus")
    if seeds < 1:
        raise ValueError("seeds must be >= 1")
    for m in methods:
        if m not in METHODS:
            raise ValueError(f"unknown method {m!r}")
    snrs = [float(s) for s in snrs]
    files = sorted(corpus)
    work = [(name, corpus[name], snr, seed, m, config)
            for name in files for snr in snrs for seed in range(seeds) for m in methods]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            trials = list(pool.map(_trial, work, chunksize=4))
    else:
        trials = [_trial(w) for w in work]
    order = {m: i for i, m in enumerate(methods)}
    trials.sort(key=lambda t: (t["file"], t["input_snr_db"], t["seed"], order[t["method"]]))
    stamp = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
    return BenchReport(list(methods), snrs, files, seeds, config, trials, stamp)
