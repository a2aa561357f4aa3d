"""Command-line front end.

Exit codes: 0 on success, 1 on a usage error, 2 on a data error
(unreadable audio, length mismatch, empty corpus, ...).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .baselines import DwtConfig, WienerConfig
from .bench import METHODS, COMPARISON_METHODS, BenchConfig, run_bench, run_method
from .emd import BoundaryPolicy, SiftConfig, decompose, find_extrema
from .fixtures import SAMPLE_RATE, make_corpus
from .io_wav import WavError, load_wav, save_wav
from .pipeline import DenoiseConfig, NoisePolicy
from .shrinkage import Flavor
from .signal_core import NoiseSpec, add_awgn, snr_db, snr_out_paper

logger = logging.getLogger("emdshrink")

EXIT_USAGE = 1
EXIT_DATA = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _write_json(path, doc):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _sift_args(p):
    g = p.add_argument_group("sifting")
    g.add_argument("--sd-threshold", type=float, default=0.3)
    g.add_argument("--max-sift-iterations", type=int, default=100)
    g.add_argument("--max-imfs", type=int, default=20)
    g.add_argument("--boundary", choices=[b.value for b in BoundaryPolicy],
                   default=BoundaryPolicy.MIRROR_EXTREMA.value)


def _denoise_args(p):
    _sift_args(p)
    g = p.add_argument_group("EMD denoising")
    g.add_argument("--frame-length", type=int, default=128)
    g.add_argument("--flavor", choices=[f.value for f in Flavor], default="soft",
                   help="shrinkage flavor of the proposed method")
    g.add_argument("--noise-policy", choices=[n.value for n in NoisePolicy],
                   default=NoisePolicy.PER_IMF_MAD.value)
    g.add_argument("--noise-sigma", type=float, default=None,
                   help="known noise standard deviation (implies --noise-policy known)")
    g.add_argument("--paper-verbatim-variance", action="store_true")
    g.add_argument("--stats-scope", choices=["frame", "imf"], default="frame")
    g.add_argument("--beta-length", choices=["frame", "imf"], default="frame")
    g = p.add_argument_group("baselines")
    g.add_argument("--wiener-frame", type=int, default=256)
    g.add_argument("--wiener-overlap", type=float, default=0.5)
    g.add_argument("--wiener-estimate-frames", type=int, default=4)
    g.add_argument("--dwt-levels", type=int, default=None)


def _sift_config(a) -> SiftConfig:
    return SiftConfig(a.sd_threshold, a.max_sift_iterations, a.max_imfs,
                      BoundaryPolicy(a.boundary))


def _denoise_config(a) -> DenoiseConfig:
    policy = NoisePolicy(a.noise_policy)
    if getattr(a, "noise_sigma", None) is not None:
        policy = NoisePolicy.KNOWN
    if policy is NoisePolicy.KNOWN and getattr(a, "noise_sigma", None) is None:
        raise UsageError("--noise-policy known requires --noise-sigma")
    return DenoiseConfig(frame_length=a.frame_length, sift=_sift_config(a),
                         shrink_flavor=Flavor(a.flavor), noise_policy=policy,
                         known_noise_sigma=getattr(a, "noise_sigma", None),
                         paper_verbatim_variance=a.paper_verbatim_variance,
                         stats_scope=a.stats_scope, beta_length=a.beta_length)


def _bench_config(a, denoise: DenoiseConfig) -> BenchConfig:
    return BenchConfig(
        denoise=denoise,
        wiener=WienerConfig(a.wiener_frame, a.wiener_overlap, None,
                            a.wiener_estimate_frames),
        dwt=DwtConfig(a.dwt_levels),
        noise_reference=a.noise_reference)


def cmd_decompose(a) -> int:
    audio = load_wav(a.input)
    x = audio.samples
    d = decompose(x, _sift_config(a))
    out = Path(a.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    imfs = []
    for j, imf in enumerate(d.imfs, start=1):
        name = f"imf_{j:02d}.wav"
        save_wav(imf, out / name, audio.sample_rate_hz)
        ext = find_extrema(imf)
        imfs.append({"file": name, "sift_iterations": d.sift_counts[j - 1],
                     "final_sd": d.final_sd[j - 1],
                     "maxima": int(ext.max_indices.size),
                     "minima": int(ext.min_indices.size),
                     "energy": float(np.dot(imf, imf))})
    save_wav(d.residue, out / "residue.wav", audio.sample_rate_hz)
    ext = find_extrema(d.residue)
    _write_json(out / "decomposition.json", {
        "source": os.fspath(a.input),
        "sample_rate_hz": audio.sample_rate_hz,
        "num_samples": int(x.size),
        "num_imfs": d.num_imfs,
        "sift_config": _sift_config(a).as_dict(),
        "sift_counts": d.sift_counts,
        "stopped_by_max_imfs": d.stopped_by_max_imfs,
        "imfs": imfs,
        "residue": {"file": "residue.wav", "maxima": int(ext.max_indices.size),
                    "minima": int(ext.min_indices.size),
                    "energy": float(np.dot(d.residue, d.residue))},
    })
    print(f"{d.num_imfs} IMFs + residue written to {out}")
    return 0


def cmd_add_noise(a) -> int:
    audio = load_wav(a.input)
    clean = audio.samples
    noisy, noise = add_awgn(clean, NoiseSpec(a.snr, a.seed))
    save_wav(noisy, a.out, audio.sample_rate_hz)
    meta = Path(a.json) if a.json else Path(a.out).with_suffix(".json")
    _write_json(meta, {
        "source": os.fspath(a.input),
        "target_snr_db": a.snr,
        "realized_snr_db": snr_db(clean, noisy),
        "seed": a.seed,
        "noise_sigma": float(np.sqrt(np.mean(noise ** 2))),
        "rng": "PCG64 / numpy standard_normal",
    })
    return 0


def cmd_denoise(a) -> int:
    if a.method not in METHODS:
        raise UsageError(f"unknown method {a.method!r}; choose from {', '.join(METHODS)}")
    audio = load_wav(a.input)
    noisy = audio.samples
    clean = None
    if a.clean:
        clean = load_wav(a.clean).samples
        if clean.size != noisy.size:
            raise ValueError(f"length mismatch: clean {clean.size} vs noisy {noisy.size}")
    dcfg = _denoise_config(a)
    bcfg = BenchConfig(denoise=dcfg,
                       wiener=WienerConfig(a.wiener_frame, a.wiener_overlap, None,
                                           a.wiener_estimate_frames),
                       dwt=DwtConfig(a.dwt_levels),
                       noise_reference="blind" if a.noise_sigma is None else "known")
    denoised, trace = run_method(a.method, noisy, a.noise_sigma, bcfg)
    save_wav(denoised, a.out, audio.sample_rate_hz)
    metrics = {"method": a.method, "input": os.fspath(a.input),
               "config": bcfg.as_dict()}
    if clean is not None:
        metrics["snr_out_paper"] = snr_out_paper(clean, denoised)
        metrics["snr_db"] = snr_db(clean, denoised)
        metrics["input_snr_db"] = snr_db(clean, noisy)
    if trace is not None:
        metrics["num_imfs"] = trace.decomposition.num_imfs
        metrics["frame_decisions"] = trace.counts()
        metrics["noise_sigmas"] = trace.noise_sigmas
    meta = Path(a.metrics) if a.metrics else Path(a.out).with_suffix(".json")
    _write_json(meta, {k: (str(v) if isinstance(v, float) and not np.isfinite(v) else v)
                       for k, v in metrics.items()})
    return 0


def _load_corpus(directory):
    d = Path(directory)
    if not d.is_dir():
        raise ValueError(f"corpus directory not found: {d}")
    files = sorted(d.glob("*.wav"))
    if not files:
        raise ValueError(f"empty corpus: no .wav files in {d}")
    return {f.name: load_wav(f).samples for f in files}


def cmd_bench(a) -> int:
    try:
        snrs = [float(s) for s in a.snrs.split(",") if s.strip()]
    except ValueError:
        raise UsageError(f"bad --snrs list: {a.snrs!r}")
    methods = [m.strip() for m in a.methods.split(",") if m.strip()]
    for m in methods:
        if m not in METHODS:
            raise UsageError(f"unknown method {m!r}; choose from {', '.join(METHODS)}")
    if not snrs or not methods:
        raise UsageError("--snrs and --methods must be non-empty")
    corpus = _load_corpus(a.corpus)
    report = run_bench(corpus, snrs, a.seeds, methods,
                       _bench_config(a, _denoise_config(a)), jobs=a.jobs)
    out = Path(a.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "report.csv", "w", encoding="utf-8", newline="") as fh:
        fh.write(report.to_csv())
    with open(out / "report.json", "w", encoding="utf-8") as fh:
        fh.write(report.to_json())
    print(report.to_csv(), end="")
    if report.failures:
        print(f"{len(report.failures)} trial(s) failed; see report.json", file=sys.stderr)
    return 0


def cmd_make_fixtures(a) -> int:
    out = Path(a.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name, x in make_corpus().items():
        save_wav(x, out / f"{name}.wav", SAMPLE_RATE)
    print(f"fixtures written to {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="emdshrink", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", parser_class=_Parser, required=True)

    s = sub.add_parser("decompose", help="write IMFs and residue as WAV files")
    s.add_argument("input")
    s.add_argument("--out-dir", required=True)
    _sift_args(s)
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("add-noise", help="add white Gaussian noise at an exact SNR")
    s.add_argument("input")
    s.add_argument("--snr", type=float, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", required=True)
    s.add_argument("--json", default=None, help="metadata path (default: <out>.json)")
    s.set_defaults(func=cmd_add_noise)

    s = sub.add_parser("denoise", help="denoise a WAV file")
    s.add_argument("input")
    s.add_argument("--method", default="proposed", help=", ".join(METHODS))
    s.add_argument("--out", required=True)
    s.add_argument("--clean", default=None, help="clean reference for metrics")
    s.add_argument("--metrics", default=None, help="metrics path (default: <out>.json)")
    _denoise_args(s)
    s.set_defaults(func=cmd_denoise)

    s = sub.add_parser("bench", help="output-SNR table over a corpus and SNR sweep")
    s.add_argument("--corpus", required=True)
    s.add_argument("--snrs", default="0,5,10,15")
    s.add_argument("--seeds", type=int, default=10)
    s.add_argument("--methods", default=",".join(COMPARISON_METHODS))
    s.add_argument("--out-dir", required=True)
    s.add_argument("--noise-reference", choices=["known", "blind"], default="known")
    s.add_argument("--jobs", type=int, default=1)
    _denoise_args(s)
    s.set_defaults(func=cmd_bench)

    s = sub.add_parser("make-fixtures", help="write the synthetic test corpus")
    s.add_argument("--out-dir", required=True)
    s.set_defaults(func=cmd_make_fixtures)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    a = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if a.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return a.func(a)
    except UsageError as exc:
        print(f"emdshrink: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (WavError, ValueError, OSError) as exc:
        print(f"emdshrink: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
