"""Locate the S-spectrum of a few small operators and compare with the known answers.

The three cases are the ones with closed-form spectra: a single paravector
(m = 1), a real matrix (eigenvalues give the spheres), and a diagonal operator
with paravector entries (union of the entries' spheres).
"""

import numpy as np

from polyslice.clifford import Paravector
from polyslice.operators import ParavectorOperator, s_spectrum_scan


def sphere(q: Paravector) -> tuple[float, float]:
    return q.re, float(np.linalg.norm(q.vector))


def show(label, T, expected):
    est = s_spectrum_scan(T)
    print(f"{label}  (grid step {est.step:.3g}, {est.candidates} candidates)")
    for u, v, r in est.points:
        print(f"    found    u={u:+.8f}  v={v:.8f}  sigma_min={r:.2e}")
    for u, v in sorted(expected):
        print(f"    expected u={u:+.8f}  v={v:.8f}")


def main():
    q = Paravector(3, [1.0, 2.0, 0.0, 0.0])
    show("paravector q = 1 + 2 e1", ParavectorOperator.from_paravectors([q]), [sphere(q)])

    rng = np.random.default_rng(0)
    a = rng.standard_normal((4, 4))
    comps = np.zeros((3, 4, 4))
    comps[0] = a
    eig = np.linalg.eigvals(a)
    expected = sorted({(round(e.real, 12), round(abs(e.imag), 12)) for e in eig})
    show("real 4x4 matrix", ParavectorOperator(2, comps), expected)

    entries = [Paravector(2, [0.5, 0.0, 1.0]), Paravector(2, [-1.0, 0.3, 0.4]), Paravector(2, [0.0, 0.0, 0.0])]
    show("diagonal with paravector entries", ParavectorOperator.from_paravectors(entries),
         [sphere(p) for p in entries])


if __name__ == "__main__":
    main()
