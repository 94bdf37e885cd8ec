#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ccfilter/netlist.hpp"

namespace ccfilter {

/// One diagnostic from parse_netlist. line and column are 1-based and point
/// into the source text; snippet is the offending line as written.
struct ParseError {
    int line = 0;
    int column = 0;
    std::string message;
    std::string snippet;
};

/// Outcome of a parse: on success netlist is set (warnings may still be
/// present), on failure errors collects every problem found in one pass.
struct ParseResult {
    std::optional<Netlist> netlist;
    std::vector<ParseError> errors;
    std::vector<std::string> warnings;

    bool ok() const { return netlist.has_value(); }
};

/// Parse the line-oriented netlist dialect:
///
///   R<name> n1 n2 <value>            resistor (ohms)
///   C<name> n1 n2 <value>            capacitor (farads)
///   V<name> n+ n- <amplitude> [label]  AC source (volts)
///   X<name> ny nx nz+ nz- CCII [B=<v>] [K=<v>]
///   .out <node>                      designated output node
///   .title <text>                    free-form title
///
/// '*' or ';' starts a comment anywhere on a line. Element letters and the
/// CCII keyword are case-insensitive. Values take engineering suffixes
/// f p n u m k meg (case-insensitive, "meg" before "m"); anything trailing
/// a recognized number+suffix is a malformed value. "0" and "gnd" name
/// ground. Never throws on any input; all problems come back as errors.
ParseResult parse_netlist(std::string_view source);

/// Render a netlist in the same dialect, one element per line in stored
/// order, values with 12 significant digits, conveyor gains and source
/// labels always spelled out. parse_netlist(serialize_netlist(n)) gives an
/// equivalent netlist for any valid n.
std::string serialize_netlist(const Netlist& n);

/// Parse a number with an optional engineering suffix ("10k" -> 10000).
/// Returns nullopt for malformed or non-finite input.
std::optional<double> parse_eng_value(std::string_view text);

/// Format a value with 12 significant digits (printf %.12g).
std::string format_value(double v);

} // namespace ccfilter
