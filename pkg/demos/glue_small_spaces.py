"""Glue two tiny spaces and inspect the quotient time separation.

Run from the repository root:  python3 demos/glue_small_spaces.py
"""

import os

from lorentz_glue import io
from lorentz_glue.amalgamation import build_quotient, verify_certificate

HERE = os.path.dirname(os.path.abspath(__file__))


def main():
    # x -> a1 (1.0) glued to a2 -> y (2.0): the chain through the seam has length 3
    Q = build_quotient(io.load_spec(os.path.join(HERE, "data", "four_point.json")))
    print("classes:", Q.labels)
    print("tau~(x, y) =", Q.tau("x", "y"), "via", Q.witness("x", "y").to_list())

    # two opposite arrows glued at both ends: a positive cycle, so tau~ = inf
    Q = build_quotient(io.load_spec(os.path.join(HERE, "data", "cycle.json")))
    cert = Q.certificate("a1", "b1")
    print("tau~(a1, b1) =", Q.tau("a1", "b1"), "cycle length", cert.cycle_length,
          "verified", verify_certificate(Q, "a1", "b1", cert))


if __name__ == "__main__":
    main()
