#include "morsehom/cubical.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <vector>

#include "morsehom/errors.hpp"

namespace morsehom {

namespace {

// Rank of a sparse GF(2) matrix given as columns of sorted row indices,
// by standard column reduction: reduce each column against the recorded
// pivot columns until its lowest entry is fresh or it vanishes.
int sparse_gf2_rank(std::vector<std::vector<int>> columns) {
    std::unordered_map<int, int> pivot_owner;  // lowest row index -> column
    int rank = 0;
    for (size_t j = 0; j < columns.size(); ++j) {
        std::vector<int>& col = columns[j];
        while (!col.empty()) {
            int low = col.back();
            auto it = pivot_owner.find(low);
            if (it == pivot_owner.end()) {
                pivot_owner[low] = static_cast<int>(j);
                ++rank;
                break;
            }
            // col ^= owner (both sorted ascending)
            const std::vector<int>& other = columns[it->second];
            std::vector<int> merged;
            merged.reserve(col.size() + other.size());
            std::set_symmetric_difference(col.begin(), col.end(), other.begin(),
                                          other.end(), std::back_inserter(merged));
            col = std::move(merged);
        }
    }
    return rank;
}

}  // namespace

std::array<int, 3> cubical_local_homology(const ScalarField& f, const Vec2& center,
                                          double window_halfwidth,
                                          const CubicalOracleOptions& opts) {
    int n = opts.grid_n;
    if (n < 16) throw BadParameterError("cubical oracle: grid_n must be >= 16");
    if (n % 2) ++n;  // center must land on a grid vertex
    double w = window_halfwidth;
    if (!(w > 0.0)) throw BadParameterError("cubical oracle: window halfwidth must be > 0");
    for (const Vec2& s : f.singular_set)
        if (std::fabs(s.x - center.x) <= w && std::fabs(s.y - center.y) <= w)
            throw ValidationError("cubical oracle: singularity inside the window");

    const int nv = n + 1;
    const double h = 2.0 * w / n;
    std::vector<double> vals(static_cast<size_t>(nv) * nv);
    double c_val = f.eval_fn(center);
    double range = 0.0;
    for (int j = 0; j < nv; ++j) {
        for (int i = 0; i < nv; ++i) {
            Vec2 q{center.x + (i - n / 2) * h, center.y + (j - n / 2) * h};
            double v = f.eval_fn(q) - c_val;
            vals[static_cast<size_t>(j) * nv + i] = v;
            range = std::max(range, std::fabs(v));
        }
    }
    const double thresh = opts.tie_tol_rel * std::max(range, 1e-300);
    auto below = [&](int i, int j) { return vals[static_cast<size_t>(j) * nv + i] <= thresh; };

    // Sublevel complex membership (max over the cell's vertices).
    auto vertex_in = [&](int i, int j) { return below(i, j); };
    auto hedge_in = [&](int i, int j) { return below(i, j) && below(i + 1, j); };
    auto vedge_in = [&](int i, int j) { return below(i, j) && below(i, j + 1); };
    auto square_in = [&](int i, int j) {
        return below(i, j) && below(i + 1, j) && below(i, j + 1) && below(i + 1, j + 1);
    };

    // Excised pair: relative cells are those meeting the open central patch.
    const int c = n / 2;
    const int p = std::max(2, static_cast<int>(std::lround(opts.patch_fraction * n / 2.0)));
    auto span_hits = [&](int lo, int hi) { return hi > c - p && lo < c + p; };
    auto vertex_rel = [&](int i, int j) {
        return i > c - p && i < c + p && j > c - p && j < c + p;
    };
    auto hedge_rel = [&](int i, int j) {
        return span_hits(i, i + 1) && j > c - p && j < c + p;
    };
    auto vedge_rel = [&](int i, int j) {
        return i > c - p && i < c + p && span_hits(j, j + 1);
    };
    auto square_rel = [&](int i, int j) { return span_hits(i, i + 1) && span_hits(j, j + 1); };

    // Index the relative cells.
    std::unordered_map<long, int> vid, heid, veid;
    auto key = [&](int i, int j) { return static_cast<long>(j) * nv + i; };
    int n0 = 0, n1 = 0, n2 = 0;
    for (int j = 0; j < nv; ++j)
        for (int i = 0; i < nv; ++i)
            if (vertex_in(i, j) && vertex_rel(i, j)) vid[key(i, j)] = n0++;
    for (int j = 0; j < nv; ++j)
        for (int i = 0; i + 1 < nv; ++i)
            if (hedge_in(i, j) && hedge_rel(i, j)) heid[key(i, j)] = n1++;
    for (int j = 0; j + 1 < nv; ++j)
        for (int i = 0; i < nv; ++i)
            if (vedge_in(i, j) && vedge_rel(i, j)) veid[key(i, j)] = n1++;

    // d1: columns are edges, rows are vertices (faces outside the relative set drop).
    std::vector<std::vector<int>> d1;
    d1.reserve(n1);
    std::vector<std::vector<int>> d1_by_edge(n1);
    for (int j = 0; j < nv; ++j) {
        for (int i = 0; i + 1 < nv; ++i) {
            auto it = heid.find(key(i, j));
            if (it == heid.end()) continue;
            std::vector<int> col;
            auto a = vid.find(key(i, j));
            auto b = vid.find(key(i + 1, j));
            if (a != vid.end()) col.push_back(a->second);
            if (b != vid.end()) col.push_back(b->second);
            std::sort(col.begin(), col.end());
            d1_by_edge[it->second] = std::move(col);
        }
    }
    for (int j = 0; j + 1 < nv; ++j) {
        for (int i = 0; i < nv; ++i) {
            auto it = veid.find(key(i, j));
            if (it == veid.end()) continue;
            std::vector<int> col;
            auto a = vid.find(key(i, j));
            auto b = vid.find(key(i, j + 1));
            if (a != vid.end()) col.push_back(a->second);
            if (b != vid.end()) col.push_back(b->second);
            std::sort(col.begin(), col.end());
            d1_by_edge[it->second] = std::move(col);
        }
    }
    d1 = std::move(d1_by_edge);

    // d2: columns are squares, rows are edges.
    std::vector<std::vector<int>> d2;
    for (int j = 0; j + 1 < nv; ++j) {
        for (int i = 0; i + 1 < nv; ++i) {
            if (!(square_in(i, j) && square_rel(i, j))) continue;
            ++n2;
            std::vector<int> col;
            auto bottom = heid.find(key(i, j));
            auto top = heid.find(key(i, j + 1));
            auto left = veid.find(key(i, j));
            auto right = veid.find(key(i + 1, j));
            if (bottom != heid.end()) col.push_back(bottom->second);
            if (top != heid.end()) col.push_back(top->second);
            if (left != veid.end()) col.push_back(left->second);
            if (right != veid.end()) col.push_back(right->second);
            std::sort(col.begin(), col.end());
            d2.push_back(std::move(col));
        }
    }

    int r1 = sparse_gf2_rank(std::move(d1));
    int r2 = sparse_gf2_rank(std::move(d2));
    return {n0 - r1, n1 - r1 - r2, n2 - r2};
}

}  // namespace morsehom
