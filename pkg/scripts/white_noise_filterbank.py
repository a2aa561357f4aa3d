"""IMF count and per-IMF energy for white Gaussian noise.

    python3 scripts/white_noise_filterbank.py --seeds 20 --length 8192
"""

import argparse

import numpy as np

from emdshrink.emd import decompose


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--seeds", type=int, default=20)
    p.add_argument("--length", type=int, default=8192)
    a = p.parse_args()
    counts, energies, capped = [], [], 0
    for seed in range(a.seeds):
        d = decompose(np.random.default_rng(seed).standard_normal(a.length))
        counts.append(d.num_imfs)
        energies.append([float(np.mean(imf ** 2)) for imf in d.imfs])
        capped += sum(k == 100 for k in d.sift_counts)
    depth = min(counts)
    mean_e = np.mean([e[:depth] for e in energies], axis=0)
    print(f"IMFs per decomposition: min {min(counts)} max {max(counts)} "
          f"mean {np.mean(counts):.1f} (log2 N = {np.log2(a.length):.1f})")
    print(f"sift loops that hit the iteration cap: {capped} of {sum(counts)}")
    print(" IMF   energy   ratio to previous")
    for j, e in enumerate(mean_e):
        ratio = "" if j == 0 else f"{e / mean_e[j - 1]:.3f}"
        print(f"{j + 1:>4} {e:8.4f}   {ratio}")


if __name__ == "__main__":
    main()
