#pragma once

namespace myopic {

// Running cost totals. Load/evict count weighted page mass moved in or out of
// the cache; service/movement follow the allocation view.
template <class Scalar>
struct BasicCostLedger {
    Scalar load{};
    Scalar evict{};
    Scalar service{};
    Scalar movement{};

    Scalar paging() const { return load + evict; }
    Scalar allocation() const { return service + movement; }

    BasicCostLedger& operator+=(const BasicCostLedger& o) {
        load += o.load;
        evict += o.evict;
        service += o.service;
        movement += o.movement;
        return *this;
    }
    friend bool operator==(const BasicCostLedger&, const BasicCostLedger&) = default;
};

using CostLedger = BasicCostLedger<double>;

} // namespace myopic
