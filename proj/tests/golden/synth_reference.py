#!/usr/bin/env python3
"""Reference implementation of the synthetic dataset format.

Written independently of the C++ generator and used to produce the committed
golden files under tests/golden/synth_seed42_n3_s32/:

    python3 tests/golden/synth_reference.py --seed 42 --count 3 --size 32 \
        --out tests/golden/synth_seed42_n3_s32
"""

import argparse
import math
import os
import struct

MASK64 = (1 << 64) - 1
MARGIN = 4
MAX_FRACTION = 0.6
MAX_REDRAWS = 10


def rotl(x, k):
    return ((x << k) | (x >> (64 - k))) & MASK64


class Rng:
    def __init__(self, seed):
        sm = seed & MASK64
        self.s = []
        for _ in range(4):
            sm = (sm + 0x9E3779B97F4A7C15) & MASK64
            z = sm
            z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
            z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
            self.s.append(z ^ (z >> 31))
        self.spare = None

    def next(self):
        s = self.s
        result = (rotl((s[1] * 5) & MASK64, 7) * 9) & MASK64
        t = (s[1] << 17) & MASK64
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = rotl(s[3], 45)
        return result

    def uniform(self, lo=0.0, hi=1.0):
        u = (self.next() >> 11) * 2.0**-53
        return lo + (hi - lo) * u

    def index(self, n):
        return int(math.floor(((self.next() >> 11) * 2.0**-53) * n))

    def normal(self):
        if self.spare is not None:
            z, self.spare = self.spare, None
            return z
        u1 = self.uniform()
        u2 = self.uniform()
        r = math.sqrt(-2.0 * math.log(1.0 - u1))
        theta = 2.0 * math.pi * u2
        self.spare = r * math.sin(theta)
        return r * math.cos(theta)


def generate(seed, count, w, h, fg=0.7, bg=0.3, sd=0.1, kmin=1, kmax=3):
    rng = Rng(seed)
    items = []
    for index in range(count):
        for _ in range(MAX_REDRAWS + 1):
            k = kmin + rng.index(kmax - kmin + 1)
            shapes = []
            for _ in range(k):
                cx = rng.uniform(MARGIN, w - 1 - MARGIN)
                cy = rng.uniform(MARGIN, h - 1 - MARGIN)
                a = rng.uniform(w / 10.0, w / 4.0)
                b = rng.uniform(h / 10.0, h / 4.0)
                shapes.append((cx, cy, a, b))
            mask = [0] * (w * h)
            for y in range(h):
                for x in range(w):
                    for cx, cy, a, b in shapes:
                        u = (x - cx) / a
                        v = (y - cy) / b
                        if u * u + v * v <= 1.0:
                            mask[y * w + x] = 1
                            break
            frac = sum(mask) / (w * h)
            if 0.0 < frac < MAX_FRACTION:
                break
        else:
            raise RuntimeError("no admissible mask")
        image = []
        for i in range(w * h):
            v = bg + (fg - bg) * mask[i] + sd * rng.normal()
            image.append(min(max(v, 0.0), 1.0))
        items.append(("%04d" % index, image, mask))
    return items


def pgm(mask, w, h):
    return b"P5\n%d %d\n255\n" % (w, h) + bytes(255 if m else 0 for m in mask)


def pfm(values, w, h):
    out = bytearray(b"Pf\n%d %d\n-1.0\n" % (w, h))
    for y in range(h - 1, -1, -1):
        for x in range(w):
            out += struct.pack("<f", values[y * w + x])
    return bytes(out)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--count", type=int, default=3)
    ap.add_argument("--size", type=int, default=32)
    ap.add_argument("--out", required=True)
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)
    manifest = "image_id,image_path,mask_path\n"
    for item_id, image, mask in generate(args.seed, args.count, args.size, args.size):
        with open(os.path.join(args.out, "img_%s.pfm" % item_id), "wb") as f:
            f.write(pfm(image, args.size, args.size))
        with open(os.path.join(args.out, "gt_%s.pgm" % item_id), "wb") as f:
            f.write(pgm(mask, args.size, args.size))
        manifest += "%s,img_%s.pfm,gt_%s.pgm\n" % (item_id, item_id, item_id)
    with open(os.path.join(args.out, "manifest.csv"), "w", newline="\n") as f:
        f.write(manifest)


if __name__ == "__main__":
    main()
