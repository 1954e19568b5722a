#pragma once

#include <algorithm>
#include <vector>

#include "myopic/core/error.hpp"
#include "myopic/core/oracle.hpp"
#include "myopic/core/trace.hpp"

namespace myopic {

// Moves the requested page (0-based index m0) to the front along the chain
// m0 > m1 > ... > mb = 0, where m_{a+1} holds the farthest page among indices
// below m_a. `key(page)` must order pages by next request after the current
// request. Returns the chain (0-based, starting with m0); a request at the
// front leaves the order alone and returns {0}.
template <class KeyFn>
std::vector<std::size_t> update_ranking(std::vector<PageId>& order, std::size_t m0, KeyFn&& key) {
    if (m0 >= order.size()) throw InvalidArgument("page not found in ranking");
    std::vector<std::size_t> chain{m0};
    if (m0 == 0) return chain;
    // Prefix-maximum records below m0; the chain visits them right to left.
    std::vector<std::size_t> records;
    auto best = key(order[0]);
    records.push_back(0);
    for (std::size_t i = 1; i < m0; ++i) {
        auto ki = key(order[i]);
        if (ki > best) {
            best = ki;
            records.push_back(i);
        }
    }
    PageId requested = order[m0];
    std::size_t hole = m0;
    for (auto it = records.rbegin(); it != records.rend(); ++it) {
        order[hole] = order[*it];
        hole = *it;
        chain.push_back(*it);
    }
    order[0] = requested;
    return chain;
}

// Per-class Belady rankings of a trace, advanced one request at a time.
class BeladyRanking {
public:
    BeladyRanking(const RequestTrace& trace, const MyopicOracle& oracle) : trace_(&trace), oracle_(&oracle) {
        order_.resize(trace.num_classes());
        position_.assign(trace.num_pages(), 0);
        if (trace.initial_order()) {
            order_ = *trace.initial_order();
        } else {
            for (std::size_t j = 0; j < trace.num_classes(); ++j) {
                auto& o = order_[j];
                o = trace.universe(static_cast<ClassId>(j));
                std::sort(o.begin(), o.end(), [&](PageId a, PageId b) { return oracle.key(a, 0) < oracle.key(b, 0); });
            }
        }
        for (auto& o : order_)
            for (std::size_t i = 0; i < o.size(); ++i) position_[static_cast<std::size_t>(o[i])] = i;
    }

    std::size_t num_classes() const noexcept { return order_.size(); }
    const std::vector<PageId>& order(ClassId j) const { return order_.at(static_cast<std::size_t>(j)); }
    // 1-based position of p in its class ranking.
    std::size_t position(PageId p) const { return position_.at(static_cast<std::size_t>(p)) + 1; }
    PageId at(ClassId j, std::size_t pos) const { return order(j).at(pos - 1); }
    Time time() const noexcept { return now_; }

    // Serves request `now`; returns the 1-based position it arrived at.
    std::size_t advance() {
        const Request& r = (*trace_)[static_cast<std::size_t>(now_)];
        std::size_t h = position(r.page);
        const Time after = now_ + 1;
        auto& o = order_[static_cast<std::size_t>(r.cls)];
        last_chain_ = update_ranking(o, h - 1, [&](PageId q) { return oracle_->key(q, after); });
        for (std::size_t idx : last_chain_) position_[static_cast<std::size_t>(o[idx])] = idx;
        ++now_;
        return h;
    }

    const std::vector<std::size_t>& last_chain() const noexcept { return last_chain_; }

private:
    const RequestTrace* trace_;
    const MyopicOracle* oracle_;
    std::vector<std::vector<PageId>> order_;
    std::vector<std::size_t> position_;
    std::vector<std::size_t> last_chain_;
    Time now_ = 0;
};

} // namespace myopic
