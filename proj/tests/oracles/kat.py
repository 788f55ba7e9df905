#!/usr/bin/env python3
# Copyright 2026 The ot12 Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

# Recomputes the known-answer vectors pinned in the C++ tests.
import hashlib

TAG = b"OT12.h1.v1"


def width(p):
    return (p.bit_length() + 7) // 8


def h1(x, p, q):
    d = hashlib.sha256(TAG + x.to_bytes(width(p), "big")).digest()
    v = int.from_bytes(d, "big") >> (256 - q)
    return format(v << ((-q) % 4), "0%dx" % ((q + 3) // 4))


def main():
    print("h1(3), p=11, q=128:", h1(3, 11, 128))
    print("h1(0), p=11, q=128:", h1(0, 11, 128))
    print("h1(1), p=11, q=128:", h1(1, 11, 128))
    print("h1(5), p=23, q=12: ", h1(5, 23, 12))
    print("h1(300), p=1019, q=8:", h1(300, 1019, 8))
    print("h2 P=11 G=2 q=3 M=0:", pow(2, 1, 11), "M=7:", pow(2, 8, 11))
    print("dlog_2(8) mod 11:", next(e for e in range(10) if pow(2, e, 11) == 8))
    print("generators of 11:", [g for g in range(1, 11) if len({pow(g, e, 11) for e in range(1, 11)}) == 10])
    print("generators of 7:", [g for g in range(1, 7) if len({pow(g, e, 7) for e in range(1, 7)}) == 6])


if __name__ == "__main__":
    main()
