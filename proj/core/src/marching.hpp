// Internal helper (not installed): marching-squares level-set extraction on a
// structured grid whose nodes carry an image-plane position and a scalar
// value, with stitching of the emitted segments into polylines.
#pragma once

#include "hvlab/numeric.hpp"

#include <cmath>
#include <map>
#include <utility>
#include <vector>

namespace hvlab::detail {

using num::cplx;

struct GridPoint {
    cplx phi;       // image-plane position
    double u = 0.0; // scalar field value
    bool valid = false;
};

class Contourer {
  public:
    // Cells straddling a jump larger than max_spread in the image plane
    // (branch cuts, period wraps) are skipped.
    explicit Contourer(double max_spread = 0.5) : max_spread_(max_spread) {}

    void add_cell(const GridPoint& p00, const GridPoint& p10, const GridPoint& p11,
                  const GridPoint& p01, double level) {
        if (!(p00.valid && p10.valid && p11.valid && p01.valid)) return;
        const double spread =
            std::max({std::abs(p00.phi - p10.phi), std::abs(p10.phi - p11.phi),
                      std::abs(p11.phi - p01.phi), std::abs(p01.phi - p00.phi)});
        if (spread > max_spread_) return;
        const GridPoint* c[4] = {&p00, &p10, &p11, &p01};
        std::vector<cplx> hits;
        for (int e = 0; e < 4; ++e) {
            const GridPoint& a = *c[e];
            const GridPoint& b = *c[(e + 1) % 4];
            const double da = a.u - level, db = b.u - level;
            if ((da > 0) == (db > 0) || da == db) continue;
            const double t = da / (da - db);
            hits.push_back(a.phi + t * (b.phi - a.phi));
        }
        if (hits.size() == 2) segments_.emplace_back(hits[0], hits[1]);
    }

    std::vector<std::vector<cplx>> stitch() const {
        auto key = [](cplx p) {
            return std::pair<long long, long long>(std::llround(p.real() * 1e9),
                                                   std::llround(p.imag() * 1e9));
        };
        std::multimap<std::pair<long long, long long>, std::size_t> index;
        for (std::size_t k = 0; k < segments_.size(); ++k) {
            index.emplace(key(segments_[k].first), k);
            index.emplace(key(segments_[k].second), k);
        }
        std::vector<bool> used(segments_.size(), false);
        std::vector<std::vector<cplx>> out;
        for (std::size_t k = 0; k < segments_.size(); ++k) {
            if (used[k]) continue;
            used[k] = true;
            std::vector<cplx> line{segments_[k].first, segments_[k].second};
            for (int dir = 0; dir < 2; ++dir) {
                for (;;) {
                    const cplx end = dir == 0 ? line.back() : line.front();
                    std::size_t next = segments_.size();
                    cplx other;
                    auto range = index.equal_range(key(end));
                    for (auto it = range.first; it != range.second; ++it) {
                        if (used[it->second]) continue;
                        const auto& s = segments_[it->second];
                        next = it->second;
                        other = std::abs(s.first - end) < std::abs(s.second - end)
                                    ? s.second
                                    : s.first;
                        break;
                    }
                    if (next == segments_.size()) break;
                    used[next] = true;
                    if (dir == 0)
                        line.push_back(other);
                    else
                        line.insert(line.begin(), other);
                }
            }
            if (line.size() >= 2) out.push_back(std::move(line));
        }
        return out;
    }

  private:
    double max_spread_;
    std::vector<std::pair<cplx, cplx>> segments_;
};

}  // namespace hvlab::detail
