#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "myopic/core/error.hpp"
#include "myopic/core/types.hpp"
#include "myopic/core/weights.hpp"

namespace myopic {

// Requests over weight classes. Pages are interned to dense global ids in
// order of first appearance; every page belongs to exactly one class.
class RequestTrace {
public:
    RequestTrace() = default;
    RequestTrace(WeightTable weights, int k) : weights_(std::move(weights)), k_(k) {
        if (k_ < 1) throw InvalidArgument("cache size must be positive");
        universe_.resize(weights_.size());
    }

    const WeightTable& weights() const noexcept { return weights_; }
    int k() const noexcept { return k_; }
    std::size_t num_classes() const noexcept { return weights_.size(); }
    std::size_t num_pages() const noexcept { return page_class_.size(); }
    std::size_t size() const noexcept { return requests_.size(); }
    bool empty() const noexcept { return requests_.empty(); }

    const std::vector<Request>& requests() const noexcept { return requests_; }
    const Request& operator[](std::size_t t) const { return requests_.at(t); }

    ClassId page_class(PageId p) const { return page_class_.at(static_cast<std::size_t>(p)); }
    const std::string& page_name(PageId p) const { return page_name_.at(static_cast<std::size_t>(p)); }
    double page_weight(PageId p) const { return weights_[static_cast<std::size_t>(page_class(p))]; }
    const std::vector<PageId>& universe(ClassId j) const { return universe_.at(static_cast<std::size_t>(j)); }

    std::optional<PageId> find_page(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    // Interns a page; re-declaring it under another class is an error.
    PageId add_page(const std::string& name, ClassId cls) {
        check_class(cls);
        if (auto it = index_.find(name); it != index_.end()) {
            if (page_class_[static_cast<std::size_t>(it->second)] != cls)
                throw InvalidArgument("page '" + name + "' requested under two classes");
            return it->second;
        }
        auto id = static_cast<PageId>(page_class_.size());
        index_.emplace(name, id);
        page_class_.push_back(cls);
        page_name_.push_back(name);
        universe_[static_cast<std::size_t>(cls)].push_back(id);
        return id;
    }

    void push_request(ClassId cls, const std::string& name) { requests_.push_back({cls, add_page(name, cls)}); }

    void push_request(PageId page) {
        requests_.push_back({page_class(page), page});
    }

    // Adds never-requested sentinel pages so class j holds at least `per_class`
    // pages. Sentinel names are "~<class>.<n>" (1-based class).
    void pad_universe(std::size_t per_class) {
        for (std::size_t j = 0; j < universe_.size(); ++j) {
            std::size_t n = 0;
            while (universe_[j].size() < per_class) {
                std::string name = "~" + std::to_string(j + 1) + "." + std::to_string(n++);
                if (!index_.count(name)) add_page(name, static_cast<ClassId>(j));
            }
        }
        if (initial_order_) {
            for (std::size_t j = 0; j < universe_.size(); ++j)
                for (PageId p : universe_[j])
                    if (std::find((*initial_order_)[j].begin(), (*initial_order_)[j].end(), p) == (*initial_order_)[j].end())
                        (*initial_order_)[j].push_back(p);
        }
    }

    // Explicit initial Belady order per class (a permutation of each universe).
    const std::optional<std::vector<std::vector<PageId>>>& initial_order() const noexcept { return initial_order_; }

    void set_initial_order(std::vector<std::vector<PageId>> order) {
        if (order.size() != universe_.size()) throw InvalidArgument("initial order needs one list per class");
        for (std::size_t j = 0; j < order.size(); ++j) {
            auto a = order[j];
            auto b = universe_[j];
            std::sort(a.begin(), a.end());
            std::sort(b.begin(), b.end());
            if (a != b) throw InvalidArgument("initial order of class " + std::to_string(j + 1) + " is not a permutation of its pages");
        }
        initial_order_ = std::move(order);
    }

    void clear_initial_order() { initial_order_.reset(); }

    // Sub-sequence of requests of one class (global page ids).
    std::vector<PageId> class_sequence(ClassId j) const {
        std::vector<PageId> out;
        for (const auto& r : requests_)
            if (r.cls == j) out.push_back(r.page);
        return out;
    }

    std::vector<PageId> page_sequence() const {
        std::vector<PageId> out;
        out.reserve(requests_.size());
        for (const auto& r : requests_) out.push_back(r.page);
        return out;
    }

    friend bool operator==(const RequestTrace& a, const RequestTrace& b) {
        return a.k_ == b.k_ && a.weights_ == b.weights_ && a.requests_ == b.requests_ && a.page_class_ == b.page_class_ &&
               a.page_name_ == b.page_name_ && a.universe_ == b.universe_ && a.initial_order_ == b.initial_order_;
    }

private:
    void check_class(ClassId cls) const {
        if (cls < 0 || static_cast<std::size_t>(cls) >= universe_.size())
            throw InvalidArgument("unknown class " + std::to_string(cls + 1));
    }

    WeightTable weights_;
    int k_ = 1;
    std::vector<Request> requests_;
    std::vector<ClassId> page_class_;
    std::vector<std::string> page_name_;
    std::vector<std::vector<PageId>> universe_;
    std::map<std::string, PageId> index_;
    std::optional<std::vector<std::vector<PageId>>> initial_order_;
};

// Single-class unweighted trace over pages named "0".."n-1" (all interned, in
// that order, so PageId == name).
inline RequestTrace make_unweighted_trace(const std::vector<PageId>& seq, std::size_t num_pages, int k) {
    RequestTrace trace(WeightTable(std::vector<std::string>{"1"}), k);
    for (std::size_t p = 0; p < num_pages; ++p) trace.add_page(std::to_string(p), 0);
    for (PageId p : seq) {
        if (p < 0 || static_cast<std::size_t>(p) >= num_pages) throw InvalidArgument("page out of range");
        trace.push_request(p);
    }
    return trace;
}

} // namespace myopic
