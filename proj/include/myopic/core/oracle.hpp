#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "myopic/core/error.hpp"
#include "myopic/core/trace.hpp"

namespace myopic {

// Sort key of a page at some time: (next request, page id). Larger = farther
// in the future. Never-again pages get kNever and are ordered by id.
using FutureKey = std::pair<Time, PageId>;

// Next-occurrence index over a request sequence. Algorithms only ever see
// comparisons between pages of the same class.
class MyopicOracle {
public:
    MyopicOracle() = default;

    explicit MyopicOracle(const RequestTrace& trace) : page_class_(trace.num_pages()) {
        for (std::size_t p = 0; p < trace.num_pages(); ++p) page_class_[p] = trace.page_class(static_cast<PageId>(p));
        build(trace.page_sequence(), trace.num_pages());
    }

    MyopicOracle(const std::vector<PageId>& seq, std::size_t num_pages) : page_class_(num_pages, 0) {
        build(seq, num_pages);
    }

    std::size_t horizon() const noexcept { return next_after_.size(); }
    std::size_t num_pages() const noexcept { return occurrences_.size(); }

    // First request of p at a time >= t, or kNever.
    Time next_request(PageId p, Time t) const {
        const auto& occ = occurrences_.at(static_cast<std::size_t>(p));
        auto it = std::lower_bound(occ.begin(), occ.end(), t);
        return it == occ.end() ? kNever : *it;
    }

    // Next request of the page requested at t, strictly after t.
    Time next_after(Time t) const { return next_after_.at(static_cast<std::size_t>(t)); }

    FutureKey key(PageId p, Time t) const { return {next_request(p, t), p}; }

    // True iff p is requested strictly later than q from time t on (p farther).
    bool farther(PageId p, PageId q, Time t) const {
        if (page_class_.at(static_cast<std::size_t>(p)) != page_class_.at(static_cast<std::size_t>(q)))
            throw InvalidArgument("oracle compares pages of different classes");
        return key(p, t) > key(q, t);
    }

    const std::vector<Time>& occurrences(PageId p) const { return occurrences_.at(static_cast<std::size_t>(p)); }

private:
    void build(const std::vector<PageId>& seq, std::size_t num_pages) {
        occurrences_.assign(num_pages, {});
        for (std::size_t t = 0; t < seq.size(); ++t) occurrences_.at(static_cast<std::size_t>(seq[t])).push_back(static_cast<Time>(t));
        next_after_.assign(seq.size(), kNever);
        std::vector<Time> last(num_pages, kNever);
        for (std::size_t t = seq.size(); t-- > 0;) {
            auto p = static_cast<std::size_t>(seq[t]);
            next_after_[t] = last[p];
            last[p] = static_cast<Time>(t);
        }
    }

    std::vector<ClassId> page_class_;
    std::vector<std::vector<Time>> occurrences_;
    std::vector<Time> next_after_;
};

} // namespace myopic
