"""Compare EMD denoiser settings against the Wiener baseline.

Covers the noise-reference choice, the noise-sigma policy, the scope of the
NormalShrink statistics and the shrinkage flavor.

    python3 scripts/sweep_denoise_configs.py --seeds 2 --snrs 0,15
"""

import argparse

from emdshrink.bench import BenchConfig, run_bench
from emdshrink.fixtures import make_corpus
from emdshrink.pipeline import DenoiseConfig

VARIANTS = {
    "known sigma": BenchConfig(),
    "blind, per-IMF MAD": BenchConfig(noise_reference="blind"),
    "blind, first-IMF MAD": BenchConfig(DenoiseConfig(noise_policy="first-imf-mad"),
                                        noise_reference="blind"),
    "known sigma, IMF-wide stats": BenchConfig(DenoiseConfig(stats_scope="imf")),
    "known sigma, IMF-length beta": BenchConfig(DenoiseConfig(beta_length="imf")),
    "known sigma, hard": BenchConfig(DenoiseConfig(shrink_flavor="hard")),
    "known sigma, unsquared variance": BenchConfig(DenoiseConfig(paper_verbatim_variance=True)),
}


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--seeds", type=int, default=2)
    p.add_argument("--snrs", default="0,15")
    p.add_argument("--metric", choices=["snr_db", "snr_out_paper"], default="snr_db")
    a = p.parse_args()
    snrs = [float(s) for s in a.snrs.split(",")]
    corpus = make_corpus()
    print(f"{'variant':<34}" + "".join(f"{f'{s:g} dB P / W':>18}" for s in snrs))
    for name, cfg in VARIANTS.items():
        r = run_bench(corpus, snrs, a.seeds, ["proposed", "wiener"], cfg)
        cols = "".join(f"{r.mean('proposed', s, a.metric):>9.2f} / {r.mean('wiener', s, a.metric):<6.2f}"
                       for s in snrs)
        print(f"{name:<34}{cols}", flush=True)


if __name__ == "__main__":
    main()
