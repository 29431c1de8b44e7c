#pragma once

#include "bohm/grid.hpp"
#include "bohm/phase_space.hpp"

namespace bohm {

/// W[f, g](x, p) = (2 pi hbar)^{-1} integral conj(f(x - y/2)) g(x + y/2) exp(-i p y/hbar) dy
/// on make_phase_space_grid(f.grid, hbar).
///
/// Half-offsets y/2 land between samples, so both inputs are first
/// band-limit interpolated onto a grid twice as fine. The offset then runs
/// over y = m dx for m in [-n/2, n/2) and the FFT over m lands exactly on
/// p = hbar k. States must occupy less than half the domain for the offset
/// window to cover their support.
PhaseSymbol cross_wigner(const CField& f, const CField& g, double hbar);

/// Real Wigner function W[psi, psi].
WignerField wigner_transform(const CField& psi, double hbar);

}  // namespace bohm
