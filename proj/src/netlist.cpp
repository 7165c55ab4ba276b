#include "cryospike/netlist.hpp"

#include <algorithm>

namespace cryospike {

const DeviceState& Mode::at(const std::string& device) const {
    auto it = states.find(device);
    if (it == states.end())
        throw AssemblyError("mode has no state for device '" + device + "'");
    return it->second;
}

std::string to_string(SnwState s) {
    return s == SnwState::Superconducting ? "SC" : "R";
}

std::string to_string(SmState s) {
    return s == SmState::LRS ? "LRS" : "HRS";
}

std::string to_string(const DeviceState& s) {
    if (std::holds_alternative<SnwState>(s)) return to_string(std::get<SnwState>(s));
    if (std::holds_alternative<SmState>(s)) return to_string(std::get<SmState>(s));
    return std::get<bool>(s) ? "on" : "off";
}

std::string Mode::key() const {
    std::string k;
    for (const auto& [id, st] : states) {
        if (!k.empty()) k += ',';
        k += id + '=' + to_string(st);
    }
    return k;
}

double switch_resistance(const DeviceEntry& device, const DeviceState& state) {
    switch (device.kind()) {
    case DeviceKind::Nanowire:
        return snw_resistance(std::get<SnwState>(state), device.snw());
    case DeviceKind::Memristor:
        return sm_resistance(std::get<SmState>(state), device.sm());
    case DeviceKind::Cryotron:
        return std::get<bool>(state) ? device.htron().channel_resistance : 0.0;
    }
    throw AssemblyError("unknown device kind");
}

void Netlist::insert(Element e) {
    if (element_index_.count(e.id))
        throw ConfigError("duplicate element id '" + e.id + "'");
    element_index_[e.id] = elements_.size();
    elements_.push_back(std::move(e));
}

void Netlist::check_node(int node, const std::string& id) const {
    if (node < 0 || node >= node_count_)
        throw ConfigError("element '" + id + "' references unknown node " + std::to_string(node));
}

void Netlist::add_current_source(const std::string& id, int node_from, int node_to) {
    check_node(node_from, id);
    check_node(node_to, id);
    insert({id, CurrentSource{node_from, node_to}});
    sources_.push_back(id);
}

void Netlist::add_resistor(const std::string& id, int node_a, int node_b, double ohms) {
    check_node(node_a, id);
    check_node(node_b, id);
    if (ohms < 0.0) throw ConfigError("resistor '" + id + "' has negative resistance");
    insert({id, Resistor{node_a, node_b, ohms}});
}

void Netlist::add_inductor(const std::string& id, int node_a, int node_b, double henries) {
    check_node(node_a, id);
    check_node(node_b, id);
    if (!(henries > 0.0)) throw ConfigError("inductor '" + id + "' needs positive inductance");
    insert({id, Inductor{node_a, node_b, henries}});
    inductors_.push_back(id);
}

void Netlist::add_switch(const std::string& id, int node_a, int node_b, const std::string& device) {
    check_node(node_a, id);
    check_node(node_b, id);
    insert({id, SwitchResistor{node_a, node_b, device}});
}

void Netlist::add_nanowire(const std::string& id, const SnwParams& p) {
    p.validate();
    if (devices_.count(id)) throw ConfigError("duplicate device id '" + id + "'");
    devices_[id] = DeviceEntry{p, {}};
}

void Netlist::add_memristor(const std::string& id, const SmParams& p) {
    p.validate();
    if (devices_.count(id)) throw ConfigError("duplicate device id '" + id + "'");
    devices_[id] = DeviceEntry{p, {}};
}

void Netlist::add_cryotron(const std::string& id, const HtronParams& p, const std::string& gate_source) {
    p.validate();
    if (devices_.count(id)) throw ConfigError("duplicate device id '" + id + "'");
    devices_[id] = DeviceEntry{p, gate_source};
}

const Element& Netlist::element(const std::string& id) const {
    auto it = element_index_.find(id);
    if (it == element_index_.end())
        throw ConfigError("unknown element '" + id + "'");
    return elements_[it->second];
}

bool Netlist::has_element(const std::string& id) const {
    return element_index_.count(id) != 0;
}

const DeviceEntry& Netlist::device(const std::string& id) const {
    auto it = devices_.find(id);
    if (it == devices_.end())
        throw ConfigError("unknown device '" + id + "'");
    return it->second;
}

int Netlist::source_index(const std::string& id) const {
    auto it = std::find(sources_.begin(), sources_.end(), id);
    if (it == sources_.end()) throw ConfigError("unknown source '" + id + "'");
    return static_cast<int>(it - sources_.begin());
}

int Netlist::inductor_index(const std::string& id) const {
    auto it = std::find(inductors_.begin(), inductors_.end(), id);
    if (it == inductors_.end()) throw ConfigError("unknown inductor '" + id + "'");
    return static_cast<int>(it - inductors_.begin());
}

void Netlist::validate() const {
    std::vector<char> touched(static_cast<std::size_t>(node_count_), 0);
    auto touch = [&](int a, int b) {
        touched[static_cast<std::size_t>(a)] = 1;
        touched[static_cast<std::size_t>(b)] = 1;
    };
    for (const auto& e : elements_) {
        if (const auto* s = std::get_if<CurrentSource>(&e.body)) {
            touch(s->node_from, s->node_to);
        } else if (const auto* r = std::get_if<Resistor>(&e.body)) {
            touch(r->node_a, r->node_b);
        } else if (const auto* l = std::get_if<Inductor>(&e.body)) {
            touch(l->node_a, l->node_b);
        } else {
            const auto& sw = std::get<SwitchResistor>(e.body);
            touch(sw.node_a, sw.node_b);
            const auto& dev = device(sw.device);
            if (dev.kind() == DeviceKind::Cryotron) {
                if (std::find(sources_.begin(), sources_.end(), dev.gate_source) == sources_.end())
                    throw ConfigError("cryotron '" + sw.device +
                                      "' gate source '" + dev.gate_source + "' is not a current source");
            }
        }
    }
    for (int n = 1; n < node_count_; ++n)
        if (!touched[static_cast<std::size_t>(n)])
            throw AssemblyError("node " + std::to_string(n) + " is not connected to any element");
}

Mode Netlist::default_mode(SmState memristors) const {
    Mode m;
    for (const auto& [id, dev] : devices_) {
        switch (dev.kind()) {
        case DeviceKind::Nanowire: m.set(id, SnwState::Superconducting); break;
        case DeviceKind::Memristor: m.set(id, memristors); break;
        case DeviceKind::Cryotron: m.set(id, false); break;
        }
    }
    return m;
}

} // namespace cryospike
