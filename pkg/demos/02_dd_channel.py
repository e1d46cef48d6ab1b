"""Generate clustered delay-Doppler channels and inspect their structure.

Draws channels from the named mixture cases, shows the sparse
time-domain matrix (one shifted diagonal per delay tap), and converts
the published physical profile to grid taps.
"""

from pathlib import Path

import numpy as np

from otfs_sbl import (
    FrameConfig,
    dd_effective_channel,
    gmm_case,
    load_dd_profile,
    profile_to_taps,
    sample_channel,
    td_channel_matrix,
)

cfg = FrameConfig(M=32, N=32, delta_f=15e3, cp_len=16)
rng = np.random.default_rng(7)

for label in ("A", "D"):
    spec = gmm_case(label)
    ch = sample_channel(spec, L_p=5, m_tau=16, n_nu=10, frac_doppler=False, rng=rng)
    gains = ch.gains()
    print(f"case {label}: weights {spec.weights}")
    for p in ch.paths:
        print(f"   delay tap {p.l:2d}, Doppler index {p.c:5.2f}, |gain| {abs(p.h):.3f}")
    print(f"   total path power {np.sum(np.abs(gains)**2):.3f}")

ch = sample_channel(gmm_case("A"), L_p=3, m_tau=8, n_nu=4, frac_doppler=True, rng=rng)
h_td = td_channel_matrix(ch, size=64, phase_base=2 * np.pi / 64)
print(f"\nTD channel at size 64: {np.count_nonzero(h_td)} nonzeros of {h_td.size} "
      f"({ch.L_p} shifted diagonals)")

small = FrameConfig(M=8, N=8, delta_f=15e3, cp_len=4)
h_dd = dd_effective_channel(td_channel_matrix(ch, 64, 2 * np.pi / 64), small)
print(f"effective DD channel energy: {np.linalg.norm(h_dd)**2:.3f} "
      f"(= TD energy {np.linalg.norm(h_td)**2:.3f} by unitarity)")

profile = load_dd_profile(Path(__file__).resolve().parents[1] / "src/otfs_sbl/data/dd_profile.txt")
taps = profile_to_taps(profile, cfg, m_tau=16, n_nu=10)
print("\npublished DD profile mapped to grid taps (l, c):")
for (tau, nu), (l, c) in zip(profile, taps):
    print(f"   {tau*1e6:6.3f} us, {nu:6.0f} Hz -> l = {l}, c = {c:.4f}")
