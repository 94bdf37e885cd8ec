#include "ccfilter/netlist.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <set>

namespace ccfilter {

namespace {

bool is_ground_name(std::string_view name) {
    if (name == "0") return true;
    if (name.size() != 3) return false;
    return std::tolower(static_cast<unsigned char>(name[0])) == 'g' &&
           std::tolower(static_cast<unsigned char>(name[1])) == 'n' &&
           std::tolower(static_cast<unsigned char>(name[2])) == 'd';
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    }
    void join(int a, int b) { parent[find(a)] = find(b); }
};

} // namespace

NodeId Netlist::node(std::string_view name) {
    if (is_ground_name(name)) return {"0", 0};
    for (std::size_t i = 1; i < node_names_.size(); ++i) {
        if (node_names_[i] == name) return {node_names_[i], static_cast<int>(i)};
    }
    node_names_.emplace_back(name);
    return {node_names_.back(), static_cast<int>(node_names_.size()) - 1};
}

std::optional<NodeId> Netlist::find_node(std::string_view name) const {
    if (is_ground_name(name)) return NodeId{"0", 0};
    for (std::size_t i = 1; i < node_names_.size(); ++i) {
        if (node_names_[i] == name) return NodeId{node_names_[i], static_cast<int>(i)};
    }
    return std::nullopt;
}

void Netlist::add_resistor(std::string name, NodeId a, NodeId b, double ohms) {
    elements_.push_back({std::move(name), Resistor{ohms}, {std::move(a), std::move(b)}});
}

void Netlist::add_capacitor(std::string name, NodeId a, NodeId b, double farads) {
    elements_.push_back({std::move(name), Capacitor{farads}, {std::move(a), std::move(b)}});
}

void Netlist::add_vsource(std::string name, NodeId plus, NodeId minus, double volts,
                          std::string label) {
    if (label.empty()) label = name;
    inputs_[label] = elements_.size();
    elements_.push_back({std::move(name), VSource{volts, std::move(label)},
                         {std::move(plus), std::move(minus)}});
}

void Netlist::add_ccii(std::string name, NodeId y, NodeId x, NodeId zplus, NodeId zminus,
                       double b, double k) {
    elements_.push_back({std::move(name), Ccii{b, k},
                         {std::move(y), std::move(x), std::move(zplus), std::move(zminus)}});
}

std::vector<std::string> validate(const Netlist& n) {
    std::vector<std::string> errors;
    const auto& names = n.node_names();
    const int table_size = static_cast<int>(names.size());

    auto check_node = [&](const NodeId& id, const std::string& owner) {
        if (id.index < 0 || id.index >= table_size || names[id.index] != id.name) {
            errors.push_back("unknown node '" + id.name + "' in element " + owner);
            return false;
        }
        return true;
    };

    UnionFind uf(table_size);
    std::set<std::string> seen_names;
    int source_count = 0;

    for (const auto& e : n.elements()) {
        if (!seen_names.insert(e.name).second)
            errors.push_back("duplicate element name '" + e.name + "'");

        const std::size_t want_nodes = std::holds_alternative<Ccii>(e.device) ? 4 : 2;
        if (e.nodes.size() != want_nodes) {
            errors.push_back("element " + e.name + " has " + std::to_string(e.nodes.size()) +
                             " nodes, expected " + std::to_string(want_nodes));
            continue;
        }

        bool nodes_ok = true;
        for (const auto& id : e.nodes) nodes_ok &= check_node(id, e.name);
        if (nodes_ok) {
            for (std::size_t i = 1; i < e.nodes.size(); ++i)
                uf.join(e.nodes[0].index, e.nodes[i].index);
        }

        if (const auto* r = std::get_if<Resistor>(&e.device)) {
            if (!(r->ohms > 0.0) || !std::isfinite(r->ohms))
                errors.push_back("nonpositive element value in " + e.name);
        } else if (const auto* c = std::get_if<Capacitor>(&e.device)) {
            if (!(c->farads > 0.0) || !std::isfinite(c->farads))
                errors.push_back("nonpositive element value in " + e.name);
        } else if (const auto* v = std::get_if<VSource>(&e.device)) {
            ++source_count;
            if (!std::isfinite(v->volts))
                errors.push_back("non-finite source amplitude in " + e.name);
        } else if (const auto* x = std::get_if<Ccii>(&e.device)) {
            if (!(x->b > 0.0) || !(x->b <= 2.0) || !std::isfinite(x->b))
                errors.push_back("conveyor gain B out of range (0, 2] in " + e.name);
            if (!(x->k > 0.0) || !(x->k <= 2.0) || !std::isfinite(x->k))
                errors.push_back("conveyor gain K out of range (0, 2] in " + e.name);
        }
    }

    if (source_count == 0) errors.push_back("netlist has no voltage source");

    if (n.output().index == 0) {
        errors.push_back("no output node designated");
    } else if (!check_node(n.output(), std::string(".out directive"))) {
        // message already recorded
    }

    for (int i = 1; i < table_size; ++i) {
        if (uf.find(i) != uf.find(0))
            errors.push_back("node '" + names[i] + "' has no path to ground");
    }
    return errors;
}

namespace {

bool close(double a, double b, double rtol) {
    return std::abs(a - b) <= rtol * std::max(std::abs(a), std::abs(b));
}

} // namespace

bool equivalent(const Netlist& a, const Netlist& b, double value_rtol) {
    if (a.title() != b.title()) return false;
    if (a.node_names() != b.node_names()) return false;
    if (!(a.output() == b.output())) return false;
    if (a.elements().size() != b.elements().size()) return false;
    for (std::size_t i = 0; i < a.elements().size(); ++i) {
        const Element& ea = a.elements()[i];
        const Element& eb = b.elements()[i];
        if (ea.name != eb.name || ea.nodes != eb.nodes) return false;
        if (ea.device.index() != eb.device.index()) return false;
        bool same = true;
        std::visit(
            [&](const auto& da) {
                using T = std::decay_t<decltype(da)>;
                const auto& db = std::get<T>(eb.device);
                if constexpr (std::is_same_v<T, Resistor>) {
                    same = close(da.ohms, db.ohms, value_rtol);
                } else if constexpr (std::is_same_v<T, Capacitor>) {
                    same = close(da.farads, db.farads, value_rtol);
                } else if constexpr (std::is_same_v<T, VSource>) {
                    same = da.label == db.label &&
                           (da.volts == db.volts || close(da.volts, db.volts, value_rtol));
                } else {
                    same = close(da.b, db.b, value_rtol) && close(da.k, db.k, value_rtol);
                }
            },
            ea.device);
        if (!same) return false;
    }
    return true;
}

} // namespace ccfilter
