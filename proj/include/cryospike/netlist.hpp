#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "cryospike/devices.hpp"
#include "cryospike/errors.hpp"

// Element-level circuit description. Node 0 is ground; nodes are dense
// integers handed out by add_node(). Switch-resistors are bound to named
// devices whose state lives in a Mode, so one netlist serves every mode of
// the hybrid automaton.

namespace cryospike {

enum class DeviceKind { Nanowire, Memristor, Cryotron };

/// A named two-state device referenced by switch-resistor elements.
struct DeviceEntry {
    std::variant<SnwParams, SmParams, HtronParams> params;
    /// Cryotron only: id of the current source observed by the gate.
    std::string gate_source;

    DeviceKind kind() const {
        if (std::holds_alternative<SnwParams>(params)) return DeviceKind::Nanowire;
        if (std::holds_alternative<SmParams>(params)) return DeviceKind::Memristor;
        return DeviceKind::Cryotron;
    }
    const SnwParams& snw() const { return std::get<SnwParams>(params); }
    const SmParams& sm() const { return std::get<SmParams>(params); }
    const HtronParams& htron() const { return std::get<HtronParams>(params); }
};

struct CurrentSource { int node_from; int node_to; };
struct Resistor { int node_a; int node_b; double ohms; };
struct Inductor { int node_a; int node_b; double henries; };
struct SwitchResistor { int node_a; int node_b; std::string device; };

struct Element {
    std::string id;
    std::variant<CurrentSource, Resistor, Inductor, SwitchResistor> body;
};

/// One state per device; a Mode fixes every switch resistance in the netlist.
using DeviceState = std::variant<SnwState, SmState, bool>;

struct Mode {
    std::map<std::string, DeviceState> states;

    void set(const std::string& device, DeviceState s) { states[device] = s; }
    const DeviceState& at(const std::string& device) const;
    SnwState snw(const std::string& device) const { return std::get<SnwState>(at(device)); }
    SmState sm(const std::string& device) const { return std::get<SmState>(at(device)); }
    bool htron_on(const std::string& device) const { return std::get<bool>(at(device)); }

    /// Canonical "id=STATE,id=STATE,..." string; equal modes compare equal.
    std::string key() const;
};

std::string to_string(SnwState s);
std::string to_string(SmState s);
std::string to_string(const DeviceState& s);

/// Resolved resistance of a device's channel in a given state.
double switch_resistance(const DeviceEntry& device, const DeviceState& state);

class Netlist {
public:
    /// Fresh netlist containing only the ground node (id 0).
    Netlist() = default;

    int add_node() { return node_count_++; }
    [[nodiscard]] int node_count() const { return node_count_; }

    void add_current_source(const std::string& id, int node_from, int node_to);
    void add_resistor(const std::string& id, int node_a, int node_b, double ohms);
    void add_inductor(const std::string& id, int node_a, int node_b, double henries);
    void add_switch(const std::string& id, int node_a, int node_b, const std::string& device);

    void add_nanowire(const std::string& id, const SnwParams& p);
    void add_memristor(const std::string& id, const SmParams& p);
    void add_cryotron(const std::string& id, const HtronParams& p, const std::string& gate_source);

    [[nodiscard]] const std::vector<Element>& elements() const { return elements_; }
    [[nodiscard]] const Element& element(const std::string& id) const;
    [[nodiscard]] bool has_element(const std::string& id) const;
    [[nodiscard]] const std::map<std::string, DeviceEntry>& devices() const { return devices_; }
    [[nodiscard]] const DeviceEntry& device(const std::string& id) const;

    /// Source ids in insertion order; defines the layout of the input vector u.
    [[nodiscard]] const std::vector<std::string>& source_ids() const { return sources_; }
    /// Inductor ids in insertion order; defines the layout of the full
    /// inductor-current vector.
    [[nodiscard]] const std::vector<std::string>& inductor_ids() const { return inductors_; }
    [[nodiscard]] int source_index(const std::string& id) const;
    [[nodiscard]] int inductor_index(const std::string& id) const;

    /// Structural checks: node ids in range, switch/device references resolve,
    /// device parameters valid, no node left untouched by any element.
    void validate() const;

    /// A Mode covering every device, nanowires superconducting, memristors in
    /// the given state, cryotron channels off.
    [[nodiscard]] Mode default_mode(SmState memristors = SmState::HRS) const;

private:
    void insert(Element e);
    void check_node(int node, const std::string& id) const;

    int node_count_ = 1;
    std::vector<Element> elements_;
    std::map<std::string, std::size_t> element_index_;
    std::map<std::string, DeviceEntry> devices_;
    std::vector<std::string> sources_;
    std::vector<std::string> inductors_;
};

} // namespace cryospike
