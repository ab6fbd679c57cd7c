#!/usr/bin/env python3
"""Independent oracles for the frozen expected values in the unit tests.

Run directly; prints every value the C++ tests assert against.
"""

M64 = (1 << 64) - 1


def decode(addr, block=64, sets=2048):
    block_addr = addr // block
    return block_addr // sets, block_addr % sets


def sampled(s, set_bits=11, sample_bits=6):
    top = (s >> (set_bits - sample_bits)) & ((1 << sample_bits) - 1)
    return top == (s & ((1 << sample_bits) - 1))


def pvar(xs):
    mu = sum(xs) / len(xs)
    return sum((x - mu) ** 2 for x in xs) / len(xs)


def wmean(xs):
    return sum((i + 1) * x for i, x in enumerate(xs)) / sum(range(1, len(xs) + 1))


def splitmix(seed, n):
    out, state = [], seed
    for _ in range(n):
        state = (state + 0x9E3779B97F4A7C15) & M64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & M64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & M64
        out.append(z ^ (z >> 31))
    return out


if __name__ == "__main__":
    print("decode(0x12345) =", decode(0x12345))
    print("decode(64*2048) =", decode(64 * 2048))
    print("sampled(1057) =", sampled(1057))
    print("sampled count =", sum(sampled(s) for s in range(2048)))
    print("sampled sets =", [s for s in range(2048) if sampled(s)])
    print("pvar([0,29]) =", pvar([0, 29]))
    print("pvar([1,2,3,4]) =", pvar([1, 2, 3, 4]))
    print("wmean([10,20]) =", wmean([10, 20]))
    print("wmean([100,10]) =", wmean([100, 10]))
    print("ipc(10 hits, last 100, hit 20) =", 10 / (100 + 10 * 20))
    print("splitmix(0) =", [hex(v) for v in splitmix(0, 3)])
    print("splitmix(7) =", [hex(v) for v in splitmix(7, 3)])
