"""Smoke test for the thermoq Python module.

Build and install first, e.g. `pip install ./crates/python`, then run
`python python/smoke_test.py`.
"""

import math

import thermoq


def close(a, b, tol):
    assert abs(a - b) <= tol, f"{a} vs {b}"


def main():
    box = thermoq.System.particle_in_box(3.0)
    t_star = box.zero_crossing(1.0, 2.0)
    close(t_star, 1.5707963267915945, 1e-9)
    close(box.level(1), 0.548311355616075, 1e-12)
    close(box.ep(2.0), 0.352219189299113, 1e-12)
    close(box.corrected_level(1, 2.0), 0.900530544915188, 1e-12)
    close(box.box_psi(1, 2.0, [3.0])[0], -0.631648531295335, 1e-9)

    osc = thermoq.System.oscillator(1.0)
    close(osc.zero_crossing(0.5, 2.0), 1.0391073378554586, 1e-9)
    close(osc.overlap(2, 2, 1.1, alpha_mode="per_mode"), 1.0, 1e-8)

    free = thermoq.System.free()
    close(free.ep(1 / (2 * math.pi)), 0.0, 1e-10)
    (z,) = free.free_psi(1.0, 0.5, [1.0])
    close(abs(z), 1.0, 1e-15)

    try:
        box.ep(-1.0)
    except ValueError:
        pass
    else:
        raise AssertionError("negative temperature accepted")

    close(thermoq.appendix_d_factor(1, 1, 0.1), 0.99225, 1e-12)
    curves = thermoq.figure_curves("2b", samples=50)
    assert [label for label, _, _ in curves] == [f"fig2b_L{l}" for l in ("1", "2", "3", "4", "5")]
    results = thermoq.verify()
    failed = [name for name, ok, _ in results if not ok]
    assert not failed, failed
    print(f"smoke test ok: {len(results)} checks passed")


if __name__ == "__main__":
    main()
