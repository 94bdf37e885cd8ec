#include "ccfilter/netlist_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <utility>

namespace ccfilter {

std::optional<double> parse_eng_value(std::string_view text) {
    if (text.empty()) return std::nullopt;
    double mantissa = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, mantissa);
    if (ec != std::errc() || ptr == begin) return std::nullopt;
    if (!std::isfinite(mantissa)) return std::nullopt;
    if (ptr == end) return mantissa;

    std::string suffix(ptr, end);
    for (char& ch : suffix) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    // "meg" must win over "m": mega vs milli.
    static constexpr std::pair<std::string_view, double> kSuffixes[] = {
        {"meg", 1e6}, {"f", 1e-15}, {"p", 1e-12}, {"n", 1e-9},
        {"u", 1e-6},  {"m", 1e-3},  {"k", 1e3},
    };
    for (const auto& [name, mult] : kSuffixes) {
        if (suffix == name) return mantissa * mult;
    }
    return std::nullopt;
}

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

namespace {

struct Token {
    std::string text;
    int column = 0; // 1-based
};

// Strip comments ('*' or ';' anywhere) and split on whitespace, keeping the
// column where each token starts.
std::vector<Token> tokenize(std::string_view line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        char c = line[i];
        if (c == '*' || c == ';') break;
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) &&
               line[i] != '*' && line[i] != ';')
            ++i;
        out.push_back({std::string(line.substr(start, i - start)), static_cast<int>(start) + 1});
    }
    return out;
}

std::string lower(std::string_view s) {
    std::string out(s);
    for (char& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return out;
}

struct LineParser {
    Netlist netlist;
    std::vector<ParseError> errors;
    std::vector<std::string> warnings;
    std::set<std::string> element_names; // lowercased, for duplicate detection

    int line_no = 0;
    std::string current_line;
    bool saw_out = false;
    std::string out_name;
    int out_line = 0, out_column = 0;

    void error(int column, std::string message) {
        errors.push_back({line_no, column, std::move(message), current_line});
    }

    bool claim_name(const Token& name) {
        if (!element_names.insert(lower(name.text)).second) {
            error(name.column, "duplicate element name '" + name.text + "'");
            return false;
        }
        return true;
    }

    std::optional<double> value(const Token& tok) {
        auto v = parse_eng_value(tok.text);
        if (!v) error(tok.column, "malformed value '" + tok.text + "'");
        return v;
    }

    void parse_line(std::string_view raw);
    void two_terminal(const std::vector<Token>& toks, char kind);
    void source(const std::vector<Token>& toks);
    void conveyor(const std::vector<Token>& toks);
    void directive(const std::vector<Token>& toks, std::string_view raw);
};

void LineParser::two_terminal(const std::vector<Token>& toks, char kind) {
    if (toks.size() != 4) {
        error(toks[0].column, std::string("expected ") + static_cast<char>(std::toupper(kind)) +
                                  "<name> <node> <node> <value>");
        return;
    }
    bool ok = claim_name(toks[0]);
    auto v = value(toks[3]);
    if (!ok || !v) return;
    NodeId a = netlist.node(toks[1].text);
    NodeId b = netlist.node(toks[2].text);
    if (kind == 'r')
        netlist.add_resistor(toks[0].text, a, b, *v);
    else
        netlist.add_capacitor(toks[0].text, a, b, *v);
}

void LineParser::source(const std::vector<Token>& toks) {
    if (toks.size() != 4 && toks.size() != 5) {
        error(toks[0].column, "expected V<name> <node+> <node-> <amplitude> [label]");
        return;
    }
    bool ok = claim_name(toks[0]);
    auto v = value(toks[3]);
    if (!ok || !v) return;
    NodeId p = netlist.node(toks[1].text);
    NodeId m = netlist.node(toks[2].text);
    netlist.add_vsource(toks[0].text, p, m, *v, toks.size() == 5 ? toks[4].text : "");
}

void LineParser::conveyor(const std::vector<Token>& toks) {
    if (toks.size() < 6 || toks.size() > 8) {
        error(toks[0].column, "expected X<name> <ny> <nx> <nz+> <nz-> CCII [B=<v>] [K=<v>]");
        return;
    }
    if (lower(toks[5].text) != "ccii") {
        error(toks[5].column, "expected device keyword CCII, got '" + toks[5].text + "'");
        return;
    }
    double b = 1.0, k = 1.0;
    bool ok = claim_name(toks[0]);
    for (std::size_t i = 6; i < toks.size(); ++i) {
        const std::string low = lower(toks[i].text);
        double* slot = nullptr;
        if (low.rfind("b=", 0) == 0) slot = &b;
        if (low.rfind("k=", 0) == 0) slot = &k;
        if (!slot) {
            error(toks[i].column, "expected B=<value> or K=<value>, got '" + toks[i].text + "'");
            ok = false;
            continue;
        }
        auto v = parse_eng_value(std::string_view(toks[i].text).substr(2));
        if (!v) {
            error(toks[i].column, "malformed value '" + toks[i].text + "'");
            ok = false;
            continue;
        }
        *slot = *v;
    }
    if (!ok) return;
    NodeId y = netlist.node(toks[1].text);
    NodeId x = netlist.node(toks[2].text);
    NodeId zp = netlist.node(toks[3].text);
    NodeId zm = netlist.node(toks[4].text);
    netlist.add_ccii(toks[0].text, y, x, zp, zm, b, k);
}

void LineParser::directive(const std::vector<Token>& toks, std::string_view raw) {
    const std::string low = lower(toks[0].text);
    if (low == ".out") {
        if (toks.size() != 2) {
            error(toks[0].column, "expected .out <node>");
            return;
        }
        if (saw_out)
            warnings.push_back("line " + std::to_string(line_no) +
                               ": .out overrides an earlier .out directive");
        saw_out = true;
        out_name = toks[1].text;
        out_line = line_no;
        out_column = toks[1].column;
    } else if (low == ".title") {
        // Title is the raw remainder of the line, comments stripped.
        std::size_t start = static_cast<std::size_t>(toks[0].column - 1) + toks[0].text.size();
        std::size_t stop = raw.size();
        for (std::size_t i = start; i < raw.size(); ++i) {
            if (raw[i] == '*' || raw[i] == ';') {
                stop = i;
                break;
            }
        }
        std::string title(raw.substr(start, stop - start));
        while (!title.empty() && std::isspace(static_cast<unsigned char>(title.front())))
            title.erase(title.begin());
        while (!title.empty() && std::isspace(static_cast<unsigned char>(title.back())))
            title.pop_back();
        netlist.set_title(std::move(title));
    } else {
        error(toks[0].column, "unknown directive '" + toks[0].text + "'");
    }
}

void LineParser::parse_line(std::string_view raw) {
    current_line = std::string(raw);
    auto toks = tokenize(raw);
    if (toks.empty()) return;

    const char head = toks[0].text[0];
    if (head == '.') {
        directive(toks, raw);
        return;
    }
    switch (std::tolower(static_cast<unsigned char>(head))) {
    case 'r': two_terminal(toks, 'r'); break;
    case 'c': two_terminal(toks, 'c'); break;
    case 'v': source(toks); break;
    case 'x': conveyor(toks); break;
    default:
        error(toks[0].column,
              std::string("unknown element letter '") + head + "' in '" + toks[0].text + "'");
    }
}

} // namespace

ParseResult parse_netlist(std::string_view source) {
    LineParser p;
    std::size_t pos = 0;
    while (pos <= source.size()) {
        const std::size_t eol = source.find('\n', pos);
        const bool last = (eol == std::string_view::npos);
        std::string_view line = last ? source.substr(pos) : source.substr(pos, eol - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        // A trailing newline does not open a new line.
        if (last && line.empty() && p.line_no > 0) break;
        ++p.line_no;
        p.parse_line(line);
        if (last) break;
        pos = eol + 1;
    }

    if (!p.saw_out) {
        p.errors.push_back({p.line_no, 1, "missing .out directive", p.current_line});
    } else if (auto node = p.netlist.find_node(p.out_name)) {
        p.netlist.set_output(*node);
        if (node->index == 0)
            p.errors.push_back({p.out_line, p.out_column,
                                "output node must not be ground", ""});
    } else {
        p.errors.push_back({p.out_line, p.out_column,
                            "unknown node '" + p.out_name + "' in .out directive", ""});
    }

    ParseResult result;
    result.errors = std::move(p.errors);
    result.warnings = std::move(p.warnings);
    if (result.errors.empty()) result.netlist = std::move(p.netlist);
    return result;
}

std::string serialize_netlist(const Netlist& n) {
    std::string out;
    if (!n.title().empty()) {
        out += ".title ";
        out += n.title();
        out += '\n';
    }
    for (const auto& e : n.elements()) {
        out += e.name;
        for (const auto& node : e.nodes) {
            out += ' ';
            out += node.name;
        }
        std::visit(
            [&](const auto& d) {
                using T = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<T, Resistor>) {
                    out += ' ' + format_value(d.ohms);
                } else if constexpr (std::is_same_v<T, Capacitor>) {
                    out += ' ' + format_value(d.farads);
                } else if constexpr (std::is_same_v<T, VSource>) {
                    out += ' ' + format_value(d.volts);
                    out += ' ' + d.label;
                } else {
                    out += " CCII B=" + format_value(d.b) + " K=" + format_value(d.k);
                }
            },
            e.device);
        out += '\n';
    }
    out += ".out ";
    out += n.output().name;
    out += '\n';
    return out;
}

} // namespace ccfilter
