"""Which curvature bounds does flat Minkowski space satisfy?

Comparison time separations grow with K, so sampled flat triangles pass the
upper bounds for K <= 0 and the lower bounds for K >= 0.
"""

from lorentz_glue.comparison import ModelGeometry, box_sampler, curvature_verdict


def main(n=60, seed=0):
    G = ModelGeometry(0)
    sampler = box_sampler(G)
    for bound in ("upper", "lower"):
        for K in (-1.0, 0.0, 1.0):
            rep = curvature_verdict(G, K, sampler, bound, n_triangles=n, seed=seed)
            print(f"{bound:5s} K={K:+.0f}: {'PASS' if rep.passed else 'FAIL'}  max |defect| {rep.max_abs_defect:.3e}")


if __name__ == "__main__":
    main()
