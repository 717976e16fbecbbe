"""Run every named scenario at a small grid and print the headline numbers."""

from lorentz_glue.scenarios import scenario


def main():
    r = scenario("lsc-failure-point-gluing", grid=21)
    n = r.numbers
    print(f"lsc: {r.verdict}; defect {n['lsc_defect']}, modulus {n['sampling_modulus']}")

    r = scenario("vertical-line-gluing", grid=21)
    print(f"vertical line: {r.verdict}; {r.numbers['n_classes']} classes")

    r = scenario("orientation-reversal", grid=11, plane_grid_size=11)
    sq, fp = r.numbers["square"], r.numbers["full_plane"]
    print(f"orientation: {r.verdict}; square compatible={sq['causally_compatible']}, "
          f"full plane all inf={fp['tau_tilde_inf_on_glued_classes']}")

    r = scenario("reshetnyak-flat", grid=21, n_triangles=100, n_oracle=2000)
    for v, n in r.numbers.items():
        print(f"half-planes ({v}): oracle error {n['oracle']['max_abs_error']:.1e}, "
              f"curvature {n['curvature']['verdict']}, {n['curvature']['seam_crossing_triangles']} crossing")


if __name__ == "__main__":
    main()
