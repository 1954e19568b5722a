#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "myopic/alloc/allocation.hpp"
#include "myopic/core/error.hpp"

namespace myopic {

// Online player facing the soft lower-bound adversary. `respond` serves a
// soft threshold (pay `cost` while x_r < threshold) and returns what it paid.
class ConvexAllocPlayer {
public:
    explicit ConvexAllocPlayer(std::size_t l, AllocLimits lim = {}) : state_(make_alloc_state(std::vector<double>(l, 1.0))), lim_(lim) {}

    const std::vector<double>& position() const { return state_.x; }
    const AllocState& state() const { return state_; }

    // The threshold is served as a strict one; only movement is paid.
    double respond(std::size_t r, double threshold, double cost) {
        (void)cost;
        const double before = state_.ledger.movement;
        serve_strict(state_, r, threshold, lim_);
        return state_.ledger.movement - before;
    }

private:
    AllocState state_;
    AllocLimits lim_;
};

struct SoftLbReport {
    std::size_t l = 0;
    std::size_t T = 0;
    double online = 0.0;
    double offline = 0.0;
    double offline_movement = 0.0;
    double min_step_cost = 0.0;  // smallest online cost paid in one step
    std::size_t least_requested = 0;
    std::vector<std::size_t> counts;
    double ratio() const { return offline > 0.0 ? online / offline : 0.0; }
};

// Each step requests the currently smallest coordinate with cost 1/l^2 below
// 1/(l-1). Offline stays put at y_{i*} = 0, y_i = 1/(l-1), where i* is the
// least requested direction, after moving there from the uniform start.
template <class Player>
SoftLbReport soft_lb_adversary(Player& player, std::size_t l, std::size_t T) {
    if (l < 2) throw InvalidArgument("the soft lower bound needs at least two directions");
    const double threshold = 1.0 / static_cast<double>(l - 1);
    const double cost = 1.0 / static_cast<double>(l * l);
    SoftLbReport rep;
    rep.l = l;
    rep.T = T;
    rep.counts.assign(l, 0);
    rep.min_step_cost = T > 0 ? std::numeric_limits<double>::infinity() : 0.0;
    for (std::size_t t = 0; t < T; ++t) {
        const auto& x = player.position();
        const auto r = static_cast<std::size_t>(std::min_element(x.begin(), x.end()) - x.begin());
        ++rep.counts[r];
        const double paid = player.respond(r, threshold, cost);
        rep.online += paid;
        rep.min_step_cost = std::min(rep.min_step_cost, paid);
    }
    rep.least_requested = static_cast<std::size_t>(std::min_element(rep.counts.begin(), rep.counts.end()) - rep.counts.begin());
    const double u = 1.0 / static_cast<double>(l);
    for (std::size_t i = 0; i < l; ++i) rep.offline_movement += std::abs((i == rep.least_requested ? 0.0 : threshold) - u);
    rep.offline = rep.offline_movement + cost * static_cast<double>(rep.counts[rep.least_requested]);
    return rep;
}

} // namespace myopic
