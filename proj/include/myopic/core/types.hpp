#pragma once

#include <cstdint>
#include <limits>
#include <vector>

namespace myopic {

// Global page index inside a RequestTrace (dense, 0-based).
using PageId = std::int32_t;
// Weight class index (0-based internally, 1-based in text formats).
using ClassId = std::int32_t;
// Position in a request sequence (0-based).
using Time = std::int64_t;

inline constexpr Time kNever = std::numeric_limits<Time>::max();
inline constexpr PageId kNoPage = -1;

struct Request {
    ClassId cls = 0;
    PageId page = 0;
    friend bool operator==(const Request&, const Request&) = default;
};

// Dense per-page cache mass, indexed by PageId. Entries lie in [0, 1].
using CacheState = std::vector<double>;

} // namespace myopic
