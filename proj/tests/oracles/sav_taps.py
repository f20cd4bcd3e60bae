"""Independent oracle for the raised-cosine kernel taps (numpy inverse FFT).

Usage: python3 sav_taps.py ORDER [BETA] > taps.txt
"""
import sys

import numpy as np


def response(f, k, beta, r=0.5):
    if f <= (r - beta) * k:
        return 1.0
    if f <= (r + beta) * k:
        return np.cos(np.pi / (4 * beta) * (f / k - r + beta))
    return 0.0


def taps(order, beta):
    k = order // 2
    spectrum = np.array([response(min(m, order - m), k, beta) for m in range(order)])
    h = np.real(np.fft.ifft(spectrum))
    h = np.roll(h, order // 2)
    return h / np.linalg.norm(h)


if __name__ == "__main__":
    order = int(sys.argv[1])
    beta = float(sys.argv[2]) if len(sys.argv) > 2 else 0.168
    for t in taps(order, beta):
        print(f"{t:.17g}")
