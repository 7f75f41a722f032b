#pragma once

#include <array>

#include "morsehom/field.hpp"
#include "morsehom/geometry.hpp"

namespace morsehom {

struct CubicalOracleOptions {
    int grid_n = 128;             // cells per side (forced even)
    double patch_fraction = 0.25; // excised neighborhood, as a fraction of the window
    double tie_tol_rel = 1e-12;   // sublevel threshold slack, relative to the value range
};

/// Independent ground truth for local homology ranks: the GF(2) relative
/// cubical homology of ({f <= f(center)} within the window, same minus a
/// neighborhood of center) on an N x N grid. Uses only field evaluations and
/// its own GF(2) reduction; no gradients, no flow, no Newton.
std::array<int, 3> cubical_local_homology(const ScalarField& f, const Vec2& center,
                                          double window_halfwidth,
                                          const CubicalOracleOptions& opts = {});

}  // namespace morsehom
