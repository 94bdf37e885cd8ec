#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ccfilter {

/// Named circuit node. Index 0 is always ground; the canonical ground name
/// is "0" and "gnd" (any case) is accepted as an alias.
struct NodeId {
    std::string name;
    int index = 0;
    bool operator==(const NodeId&) const = default;
};

struct Resistor {
    double ohms = 0.0;
};

struct Capacitor {
    double farads = 0.0;
};

/// Ideal AC voltage source. The label names the input terminal it drives so
/// higher layers can address sources by role rather than by element name.
struct VSource {
    double volts = 0.0;
    std::string label;
};

/// Second-generation current conveyor with balanced outputs.
/// Port order in Element::nodes is y, x, z+, z-.
/// Port law (currents taken into the device):
///   Vx = B * Vy,   Iy = 0,   Iz+ = +K * Ix,   Iz- = -K * Ix.
struct Ccii {
    double b = 1.0;
    double k = 1.0;
};

struct Element {
    std::string name;
    std::variant<Resistor, Capacitor, VSource, Ccii> device;
    std::vector<NodeId> nodes;
};

/// In-memory circuit: a dense node table (ground at index 0), an ordered
/// element list, the designated output node, and a label -> element map for
/// the voltage sources.
class Netlist {
public:
    Netlist() : node_names_{"0"} {}

    /// Look up a node by name, registering it at the next free index when
    /// new. Ground aliases collapse to index 0.
    NodeId node(std::string_view name);

    std::optional<NodeId> find_node(std::string_view name) const;

    void add_resistor(std::string name, NodeId a, NodeId b, double ohms);
    void add_capacitor(std::string name, NodeId a, NodeId b, double farads);
    void add_vsource(std::string name, NodeId plus, NodeId minus, double volts,
                     std::string label = "");
    void add_ccii(std::string name, NodeId y, NodeId x, NodeId zplus, NodeId zminus,
                  double b = 1.0, double k = 1.0);

    void set_title(std::string title) { title_ = std::move(title); }
    void set_output(NodeId n) { output_ = std::move(n); }

    const std::string& title() const { return title_; }
    const std::vector<Element>& elements() const { return elements_; }

    /// Node names indexed by node index; entry 0 is "0".
    const std::vector<std::string>& node_names() const { return node_names_; }

    /// Number of non-ground nodes.
    int node_count() const { return static_cast<int>(node_names_.size()) - 1; }

    /// Output node; index 0 means "not designated".
    const NodeId& output() const { return output_; }

    /// Source label (or element name when unlabeled) -> element index.
    const std::map<std::string, std::size_t>& inputs() const { return inputs_; }

private:
    std::string title_;
    std::vector<std::string> node_names_;
    std::vector<Element> elements_;
    std::map<std::string, std::size_t> inputs_;
    NodeId output_{"0", 0};
};

/// Check every structural invariant and return one message per violation
/// (empty result means the netlist is well-formed): element values must be
/// positive and finite (source amplitudes only finite), conveyor gains in
/// (0, 2], node references must match the node table, every node needs a
/// path to ground, at least one source must exist, and an output node must
/// be designated.
std::vector<std::string> validate(const Netlist& n);

/// Structural equality with tolerant value comparison; value_rtol covers the
/// round-trip through 12-significant-digit text.
bool equivalent(const Netlist& a, const Netlist& b, double value_rtol = 1e-11);

} // namespace ccfilter
