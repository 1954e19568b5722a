#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <queue>
#include <vector>

#include "myopic/core/error.hpp"
#include "myopic/core/schedule.hpp"
#include "myopic/core/trace.hpp"
#include "myopic/offline/bruteforce.hpp"

namespace myopic {

namespace detail {

// Successive-shortest-path min-cost flow on a DAG whose arcs all point from a
// lower to a higher node index. Ties are resolved by node and arc order.
class DagMinCostFlow {
public:
    struct Arc {
        int to;
        int rev;
        std::int64_t cap;
        std::int64_t cost;
    };

    explicit DagMinCostFlow(int nodes) : graph_(static_cast<std::size_t>(nodes)) {}

    // Returns a handle (node, index) for reading the flow later.
    std::pair<int, int> add_arc(int from, int to, std::int64_t cap, std::int64_t cost) {
        auto& f = graph_[static_cast<std::size_t>(from)];
        auto& t = graph_[static_cast<std::size_t>(to)];
        f.push_back({to, static_cast<int>(t.size()), cap, cost});
        t.push_back({from, static_cast<int>(f.size()) - 1, 0, -cost});
        return {from, static_cast<int>(f.size()) - 1};
    }

    std::int64_t flow_on(std::pair<int, int> h) const {
        const Arc& a = graph_[static_cast<std::size_t>(h.first)][static_cast<std::size_t>(h.second)];
        return graph_[static_cast<std::size_t>(a.to)][static_cast<std::size_t>(a.rev)].cap;
    }

    // Sends `amount` units from s to t; returns the total cost.
    std::int64_t run(int s, int t, std::int64_t amount) {
        const auto n = graph_.size();
        constexpr std::int64_t inf = std::numeric_limits<std::int64_t>::max() / 4;
        // Initial potentials: shortest distances in topological (index) order.
        std::vector<std::int64_t> pot(n, inf);
        pot[static_cast<std::size_t>(s)] = 0;
        for (std::size_t u = 0; u < n; ++u) {
            if (pot[u] == inf) continue;
            for (const auto& a : graph_[u])
                if (a.cap > 0 && pot[u] + a.cost < pot[static_cast<std::size_t>(a.to)])
                    pot[static_cast<std::size_t>(a.to)] = pot[u] + a.cost;
        }
        for (auto& p : pot)
            if (p == inf) p = 0;
        std::int64_t total = 0;
        std::vector<std::int64_t> dist(n);
        std::vector<int> prev_node(n), prev_arc(n);
        while (amount > 0) {
            std::fill(dist.begin(), dist.end(), inf);
            dist[static_cast<std::size_t>(s)] = 0;
            using Item = std::pair<std::int64_t, int>;
            std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
            pq.push({0, s});
            while (!pq.empty()) {
                auto [d, u] = pq.top();
                pq.pop();
                if (d != dist[static_cast<std::size_t>(u)]) continue;
                const auto& arcs = graph_[static_cast<std::size_t>(u)];
                for (std::size_t i = 0; i < arcs.size(); ++i) {
                    const auto& a = arcs[i];
                    if (a.cap <= 0) continue;
                    auto v = static_cast<std::size_t>(a.to);
                    std::int64_t nd = d + a.cost + pot[static_cast<std::size_t>(u)] - pot[v];
                    if (nd < dist[v]) {
                        dist[v] = nd;
                        prev_node[v] = u;
                        prev_arc[v] = static_cast<int>(i);
                        pq.push({nd, a.to});
                    }
                }
            }
            if (dist[static_cast<std::size_t>(t)] == inf) throw Error("min-cost flow: sink unreachable");
            for (std::size_t v = 0; v < n; ++v)
                if (dist[v] < inf) pot[v] += dist[v];
            std::int64_t push = amount;
            for (int v = t; v != s; v = prev_node[static_cast<std::size_t>(v)])
                push = std::min(push, graph_[static_cast<std::size_t>(prev_node[static_cast<std::size_t>(v)])]
                                            [static_cast<std::size_t>(prev_arc[static_cast<std::size_t>(v)])].cap);
            for (int v = t; v != s; v = prev_node[static_cast<std::size_t>(v)]) {
                auto& a = graph_[static_cast<std::size_t>(prev_node[static_cast<std::size_t>(v)])]
                                [static_cast<std::size_t>(prev_arc[static_cast<std::size_t>(v)])];
                a.cap -= push;
                graph_[static_cast<std::size_t>(a.to)][static_cast<std::size_t>(a.rev)].cap += push;
                total += push * a.cost;
            }
            amount -= push;
        }
        return total;
    }

private:
    std::vector<std::vector<Arc>> graph_;
};

} // namespace detail

struct OfflineSolution {
    OptCost cost;
    IntegralSchedule schedule; // lazy: pages enter only when requested
};

// Exact offline optimum via interval packing. Keeping page p between two
// consecutive requests t1 < t2 saves its weight and occupies one of the k-1
// spare slots at every time strictly between them.
inline OfflineSolution opt_mincostflow(const RequestTrace& trace) {
    const std::size_t T = trace.size();
    const int k = trace.k();
    auto scaled = trace.weights().integer_scale();
    auto weight = [&](PageId p) { return scaled.weights[static_cast<std::size_t>(trace.page_class(p))]; };

    OfflineSolution sol;
    sol.cost.scale = scaled.scale;
    std::int64_t loads = 0;
    std::vector<Time> last(trace.num_pages(), -1);
    struct Interval {
        Time from, to;
        PageId page;
        std::pair<int, int> arc;
    };
    std::vector<Interval> intervals;
    detail::DagMinCostFlow flow(static_cast<int>(T) + 1);
    if (k > 1)
        for (std::size_t t = 0; t < T; ++t) flow.add_arc(static_cast<int>(t), static_cast<int>(t) + 1, k - 1, 0);
    std::vector<bool> keep_free(T, false); // request t follows its page's previous request directly
    for (std::size_t t = 0; t < T; ++t) {
        PageId p = trace[t].page;
        Time prev = last[static_cast<std::size_t>(p)];
        loads += weight(p);
        if (prev >= 0) {
            if (prev + 1 == static_cast<Time>(t)) {
                loads -= weight(p);
                keep_free[t] = true;
            } else if (k > 1) {
                auto h = flow.add_arc(static_cast<int>(prev) + 1, static_cast<int>(t), 1, -weight(p));
                intervals.push_back({prev, static_cast<Time>(t), p, h});
            }
        }
        last[static_cast<std::size_t>(p)] = static_cast<Time>(t);
    }
    std::int64_t savings = 0;
    if (k > 1 && T > 0) savings = -flow.run(0, static_cast<int>(T), k - 1);
    sol.cost.scaled = loads - savings;

    sol.schedule.assign(T, {});
    for (std::size_t t = 0; t < T; ++t) sol.schedule[t].push_back(trace[t].page);
    for (const auto& iv : intervals)
        if (flow.flow_on(iv.arc) > 0)
            for (Time u = iv.from + 1; u < iv.to; ++u) sol.schedule[static_cast<std::size_t>(u)].push_back(iv.page);
    for (auto& c : sol.schedule) std::sort(c.begin(), c.end());
    return sol;
}

} // namespace myopic
