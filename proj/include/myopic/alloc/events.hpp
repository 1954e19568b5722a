#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "myopic/alloc/allocation.hpp"
#include "myopic/core/error.hpp"
#include "myopic/core/trace_io.hpp"

// Event stream, one per line, directions 1-based:
//   r=<int> alpha=<real> dt=<real>
//   strict r=<int> c=<real>

namespace myopic {

struct StrictEvent {
    std::size_t r = 0;
    double c = 0.0;
};

using AllocEvent = std::variant<ChargeEvent, StrictEvent>;

inline void apply_event(AllocState& s, const AllocEvent& ev, const AllocLimits& lim = {}) {
    if (const auto* ch = std::get_if<ChargeEvent>(&ev))
        alloc_step(s, *ch, lim);
    else
        serve_strict(s, std::get<StrictEvent>(ev).r, std::get<StrictEvent>(ev).c, lim);
}

namespace detail {

inline bool parse_real(std::string_view s, double& out) {
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

inline std::string_view field(std::string_view tok, std::string_view key, std::size_t line) {
    if (tok.size() <= key.size() || tok.substr(0, key.size()) != key || tok[key.size()] != '=')
        throw ParseError(line, "malformed event: expected " + std::string(key) + "=");
    return tok.substr(key.size() + 1);
}

inline std::size_t parse_direction(std::string_view v, std::size_t dim, std::size_t line) {
    long long r = 0;
    if (!parse_int(v, r)) throw ParseError(line, "malformed event: bad direction");
    if (r < 1 || (dim != 0 && static_cast<std::size_t>(r) > dim)) throw ParseError(line, "unknown direction " + std::string(v));
    return static_cast<std::size_t>(r - 1);
}

inline double parse_field_real(std::string_view v, std::size_t line) {
    double d = 0.0;
    if (!parse_real(v, d)) throw ParseError(line, "malformed event: bad number '" + std::string(v) + "'");
    return d;
}

} // namespace detail

// `dim` bounds the direction when nonzero.
inline std::vector<AllocEvent> parse_events(std::string_view text, std::size_t dim = 0) {
    std::vector<AllocEvent> out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        auto toks = detail::split_ws(line);
        if (toks.empty()) continue;
        if (toks[0] == "strict") {
            if (toks.size() != 3) throw ParseError(line_no, "malformed event: strict takes r= and c=");
            StrictEvent ev;
            ev.r = detail::parse_direction(detail::field(toks[1], "r", line_no), dim, line_no);
            ev.c = detail::parse_field_real(detail::field(toks[2], "c", line_no), line_no);
            if (ev.c < 0.0 || ev.c >= 1.0) throw ParseError(line_no, "strict threshold must lie in [0,1)");
            out.emplace_back(ev);
        } else {
            if (toks.size() != 3) throw ParseError(line_no, "malformed event: expected r= alpha= dt=");
            ChargeEvent ev;
            ev.r = detail::parse_direction(detail::field(toks[0], "r", line_no), dim, line_no);
            ev.alpha = detail::parse_field_real(detail::field(toks[1], "alpha", line_no), line_no);
            ev.dt = detail::parse_field_real(detail::field(toks[2], "dt", line_no), line_no);
            if (ev.alpha < 0.0 || ev.dt < 0.0) throw ParseError(line_no, "charge and duration must be nonnegative");
            out.emplace_back(ev);
        }
        if (end == text.size()) break;
    }
    return out;
}

inline std::string format_events(const std::vector<AllocEvent>& events) {
    std::string out;
    char buf[128];
    for (const auto& ev : events) {
        if (const auto* ch = std::get_if<ChargeEvent>(&ev))
            std::snprintf(buf, sizeof buf, "r=%zu alpha=%.17g dt=%.17g\n", ch->r + 1, ch->alpha, ch->dt);
        else
            std::snprintf(buf, sizeof buf, "strict r=%zu c=%.17g\n", std::get<StrictEvent>(ev).r + 1, std::get<StrictEvent>(ev).c);
        out += buf;
    }
    return out;
}

} // namespace myopic
