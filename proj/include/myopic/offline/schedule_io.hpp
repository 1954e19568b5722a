#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "myopic/core/error.hpp"
#include "myopic/core/schedule.hpp"
#include "myopic/core/trace.hpp"

namespace myopic {

// {"k": k, "schedule": [[page names cached after request 0], ...]}
inline std::string write_schedule_json(const RequestTrace& trace, const IntegralSchedule& schedule) {
    nlohmann::json doc;
    doc["k"] = trace.k();
    auto& rows = doc["schedule"] = nlohmann::json::array();
    for (const auto& state : schedule) {
        auto row = nlohmann::json::array();
        for (PageId p : state) row.push_back(trace.page_name(p));
        rows.push_back(std::move(row));
    }
    return doc.dump() + "\n";
}

inline IntegralSchedule read_schedule_json(const RequestTrace& trace, const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(0, std::string("malformed schedule: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("schedule") || !doc["schedule"].is_array())
        throw ParseError(0, "malformed schedule: missing 'schedule' array");
    IntegralSchedule out;
    for (const auto& row : doc["schedule"]) {
        if (!row.is_array()) throw ParseError(0, "malformed schedule: rows must be arrays");
        std::vector<PageId> state;
        for (const auto& name : row) {
            if (!name.is_string()) throw ParseError(0, "malformed schedule: page ids must be strings");
            auto id = trace.find_page(name.get<std::string>());
            if (!id) throw ParseError(0, "unknown page '" + name.get<std::string>() + "' in schedule");
            state.push_back(*id);
        }
        out.push_back(std::move(state));
    }
    return out;
}

} // namespace myopic
