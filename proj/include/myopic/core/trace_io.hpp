#pragma once

#include <cctype>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "myopic/core/error.hpp"
#include "myopic/core/trace.hpp"

// Text format:
//   k=<int>; w=<w1>,<w2>,...
//   <class> <page-id>          one request per line, class is 1-based
//   # ...                      comment (also trailing)
// Two pragma lines carry what the request lines alone cannot:
//   #! pages <class>:<id> ...  full page list in interning order
//   #! order <class> <id> ...  explicit initial Belady order of one class

namespace myopic {

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        std::size_t j = i;
        while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

inline bool parse_int(std::string_view s, long long& out) {
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

inline ClassId parse_class(std::string_view tok, std::size_t num_classes, std::size_t line) {
    long long c = 0;
    if (!parse_int(tok, c)) throw ParseError(line, "malformed line: bad class '" + std::string(tok) + "'");
    if (c < 1 || static_cast<std::size_t>(c) > num_classes)
        throw ParseError(line, "unknown class " + std::string(tok));
    return static_cast<ClassId>(c - 1);
}

} // namespace detail

inline RequestTrace load_trace(std::string_view text) {
    std::optional<RequestTrace> trace;
    std::vector<std::pair<ClassId, std::vector<std::string>>> orders;
    std::size_t order_line = 0;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;

        std::string_view body = detail::trim(line);
        if (body.rfind("#!", 0) == 0) {
            if (!trace) throw ParseError(line_no, "malformed line: pragma before header");
            auto toks = detail::split_ws(body.substr(2));
            if (toks.empty()) throw ParseError(line_no, "malformed line: empty pragma");
            if (toks[0] == "pages") {
                for (std::size_t i = 1; i < toks.size(); ++i) {
                    auto colon = toks[i].find(':');
                    if (colon == std::string_view::npos || colon + 1 == toks[i].size())
                        throw ParseError(line_no, "malformed line: bad page declaration");
                    ClassId c = detail::parse_class(toks[i].substr(0, colon), trace->num_classes(), line_no);
                    try {
                        trace->add_page(std::string(toks[i].substr(colon + 1)), c);
                    } catch (const InvalidArgument& e) {
                        throw ParseError(line_no, e.what());
                    }
                }
            } else if (toks[0] == "order") {
                if (toks.size() < 2) throw ParseError(line_no, "malformed line: order pragma without class");
                ClassId c = detail::parse_class(toks[1], trace->num_classes(), line_no);
                std::vector<std::string> names;
                for (std::size_t i = 2; i < toks.size(); ++i) names.emplace_back(toks[i]);
                orders.emplace_back(c, std::move(names));
                order_line = line_no;
            } else {
                throw ParseError(line_no, "malformed line: unknown pragma '" + std::string(toks[0]) + "'");
            }
            continue;
        }
        if (auto hash = body.find('#'); hash != std::string_view::npos) body = detail::trim(body.substr(0, hash));
        if (body.empty()) continue;

        if (!trace) {
            // header
            auto semi = body.find(';');
            if (semi == std::string_view::npos) throw ParseError(line_no, "malformed line: expected header 'k=<int>; w=<list>'");
            auto kpart = detail::trim(body.substr(0, semi));
            auto wpart = detail::trim(body.substr(semi + 1));
            if (kpart.rfind("k=", 0) != 0 || wpart.rfind("w=", 0) != 0)
                throw ParseError(line_no, "malformed line: expected header 'k=<int>; w=<list>'");
            long long k = 0;
            if (!detail::parse_int(detail::trim(kpart.substr(2)), k))
                throw ParseError(line_no, "malformed line: bad cache size");
            if (k < 1) throw ParseError(line_no, "cache size must be positive");
            std::vector<std::string> tokens;
            std::string_view list = wpart.substr(2);
            std::size_t p = 0;
            while (true) {
                auto comma = list.find(',', p);
                auto tok = detail::trim(list.substr(p, comma == std::string_view::npos ? std::string_view::npos : comma - p));
                if (tok.empty()) throw ParseError(line_no, "malformed line: empty weight");
                tokens.emplace_back(tok);
                if (comma == std::string_view::npos) break;
                p = comma + 1;
            }
            try {
                trace.emplace(WeightTable(tokens), static_cast<int>(k));
            } catch (const InvalidArgument& e) {
                throw ParseError(line_no, e.what());
            }
            continue;
        }

        auto toks = detail::split_ws(body);
        if (toks.size() != 2) throw ParseError(line_no, "malformed line: expected '<class> <page-id>'");
        ClassId c = detail::parse_class(toks[0], trace->num_classes(), line_no);
        try {
            trace->push_request(c, std::string(toks[1]));
        } catch (const InvalidArgument& e) {
            throw ParseError(line_no, e.what());
        }
    }
    if (!trace) throw ParseError(line_no, "malformed line: missing header");

    if (!orders.empty()) {
        std::vector<std::vector<PageId>> order(trace->num_classes());
        std::vector<bool> seen(trace->num_classes(), false);
        for (auto& [c, names] : orders) {
            if (seen[static_cast<std::size_t>(c)]) throw ParseError(order_line, "duplicate order for class " + std::to_string(c + 1));
            seen[static_cast<std::size_t>(c)] = true;
            for (auto& n : names) {
                PageId p;
                try {
                    p = trace->add_page(n, c);
                } catch (const InvalidArgument& e) {
                    throw ParseError(order_line, e.what());
                }
                order[static_cast<std::size_t>(c)].push_back(p);
            }
        }
        for (std::size_t j = 0; j < order.size(); ++j)
            if (!seen[j] && !trace->universe(static_cast<ClassId>(j)).empty())
                throw ParseError(order_line, "missing order for class " + std::to_string(j + 1));
        try {
            trace->set_initial_order(std::move(order));
        } catch (const InvalidArgument& e) {
            throw ParseError(order_line, e.what());
        }
    }
    return std::move(*trace);
}

inline std::string write_trace(const RequestTrace& trace) {
    std::ostringstream os;
    os << "k=" << trace.k() << "; w=";
    for (std::size_t i = 0; i < trace.num_classes(); ++i) os << (i ? "," : "") << trace.weights().token(i);
    os << '\n';

    // The pages pragma is needed only if interning the requests alone would
    // give a different page list.
    std::vector<PageId> first_seen;
    std::vector<bool> seen(trace.num_pages(), false);
    for (const auto& r : trace.requests())
        if (!seen[static_cast<std::size_t>(r.page)]) {
            seen[static_cast<std::size_t>(r.page)] = true;
            first_seen.push_back(r.page);
        }
    bool identity = first_seen.size() == trace.num_pages();
    for (std::size_t i = 0; identity && i < first_seen.size(); ++i) identity = first_seen[i] == static_cast<PageId>(i);
    if (!identity) {
        os << "#! pages";
        for (std::size_t p = 0; p < trace.num_pages(); ++p)
            os << ' ' << trace.page_class(static_cast<PageId>(p)) + 1 << ':' << trace.page_name(static_cast<PageId>(p));
        os << '\n';
    }
    if (const auto& order = trace.initial_order()) {
        for (std::size_t j = 0; j < order->size(); ++j) {
            if ((*order)[j].empty()) continue;
            os << "#! order " << j + 1;
            for (PageId p : (*order)[j]) os << ' ' << trace.page_name(p);
            os << '\n';
        }
    }
    for (const auto& r : trace.requests()) os << r.cls + 1 << ' ' << trace.page_name(r.page) << '\n';
    return os.str();
}

inline RequestTrace load_trace_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_trace(ss.str());
}

inline void write_trace_file(const RequestTrace& trace, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << write_trace(trace);
}

} // namespace myopic
