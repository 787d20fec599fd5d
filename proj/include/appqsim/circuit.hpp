#pragma once
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include <json.hpp>

#include "pauli.hpp"

namespace appqsim {

// Gate records. PauliRot(P, theta) implements exp(i*theta*P); sign conventions
// elsewhere in the suite fold signs into the angle.
struct GateH { int q; };
struct GateS { int q; };
struct GateSdg { int q; };
struct GateX { int q; };
struct GateCX { int control, target; };
struct GatePauliRot {
    std::vector<PauliFactor> factors; // strictly increasing qubits
    double angle;
};
struct GateCtrlPauliRot {
    int control;
    int value; // 0 or 1
    std::vector<PauliFactor> factors;
    double angle;
};
// Per-qubit basis rotation before a terminal Z measurement: X -> H, Y -> Sdg+H.
struct GateBasisChange { std::vector<Axis> axes; };
struct GateMeasureAll {};

using Gate = std::variant<GateH, GateS, GateSdg, GateX, GateCX, GatePauliRot,
                          GateCtrlPauliRot, GateBasisChange, GateMeasureAll>;

struct Circuit {
    int num_qubits = 0;
    std::vector<Gate> ops;

    void check() const {
        auto in_range = [&](int q) {
            if (q < 0 || q >= num_qubits) throw std::out_of_range("qubit index out of range");
        };
        bool seen_measure = false;
        for (const auto& g : ops) {
            if (seen_measure) throw std::invalid_argument("MeasureAll must be terminal");
            std::visit([&](const auto& gg) {
                using T = std::decay_t<decltype(gg)>;
                if constexpr (std::is_same_v<T, GateH> || std::is_same_v<T, GateS> ||
                              std::is_same_v<T, GateSdg> || std::is_same_v<T, GateX>) {
                    in_range(gg.q);
                } else if constexpr (std::is_same_v<T, GateCX>) {
                    in_range(gg.control); in_range(gg.target);
                    if (gg.control == gg.target) throw std::invalid_argument("CX control == target");
                } else if constexpr (std::is_same_v<T, GatePauliRot>) {
                    for (auto& f : gg.factors) in_range(f.qubit);
                } else if constexpr (std::is_same_v<T, GateCtrlPauliRot>) {
                    in_range(gg.control);
                    for (auto& f : gg.factors) in_range(f.qubit);
                    if (gg.value != 0 && gg.value != 1) throw std::invalid_argument("control value");
                } else if constexpr (std::is_same_v<T, GateBasisChange>) {
                    if (static_cast<int>(gg.axes.size()) != num_qubits)
                        throw std::invalid_argument("BasisChange needs one axis per qubit");
                } else if constexpr (std::is_same_v<T, GateMeasureAll>) {
                    seen_measure = true;
                }
            }, g);
        }
    }
};

// ---- JSON schema ----
// {"qubits": N, "ops":[{"gate":"H","q":0}, {"gate":"CX","q":[c,t]},
//   {"gate":"PR","paulis":[[q,"X"],...],"angle":t},
//   {"gate":"CPR","ctrl":q,"val":0,"paulis":[...],"angle":t},
//   {"gate":"BASIS","axes":"ZZX..."}, {"gate":"MEASURE"}]}

inline nlohmann::json paulis_to_json(const std::vector<PauliFactor>& fs) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& f : fs) arr.push_back({f.qubit, std::string(1, axis_char(f.axis))});
    return arr;
}

inline std::vector<PauliFactor> paulis_from_json(const nlohmann::json& arr) {
    std::vector<PauliFactor> fs;
    for (const auto& e : arr)
        fs.push_back({e.at(0).get<int>(), axis_from_char(e.at(1).get<std::string>().at(0))});
    return fs;
}

inline nlohmann::json circuit_to_json(const Circuit& c) {
    nlohmann::json ops = nlohmann::json::array();
    for (const auto& g : c.ops) {
        std::visit([&](const auto& gg) {
            using T = std::decay_t<decltype(gg)>;
            nlohmann::json o;
            if constexpr (std::is_same_v<T, GateH>) { o = {{"gate", "H"}, {"q", gg.q}}; }
            else if constexpr (std::is_same_v<T, GateS>) { o = {{"gate", "S"}, {"q", gg.q}}; }
            else if constexpr (std::is_same_v<T, GateSdg>) { o = {{"gate", "SDG"}, {"q", gg.q}}; }
            else if constexpr (std::is_same_v<T, GateX>) { o = {{"gate", "X"}, {"q", gg.q}}; }
            else if constexpr (std::is_same_v<T, GateCX>) { o = {{"gate", "CX"}, {"q", {gg.control, gg.target}}}; }
            else if constexpr (std::is_same_v<T, GatePauliRot>) {
                o = {{"gate", "PR"}, {"paulis", paulis_to_json(gg.factors)}, {"angle", gg.angle}};
            } else if constexpr (std::is_same_v<T, GateCtrlPauliRot>) {
                o = {{"gate", "CPR"}, {"ctrl", gg.control}, {"val", gg.value},
                     {"paulis", paulis_to_json(gg.factors)}, {"angle", gg.angle}};
            } else if constexpr (std::is_same_v<T, GateBasisChange>) {
                std::string s;
                for (auto a : gg.axes) s.push_back(axis_char(a));
                o = {{"gate", "BASIS"}, {"axes", s}};
            } else {
                o = {{"gate", "MEASURE"}};
            }
            ops.push_back(std::move(o));
        }, g);
    }
    return {{"qubits", c.num_qubits}, {"ops", std::move(ops)}};
}

inline Circuit circuit_from_json(const nlohmann::json& j) {
    Circuit c;
    c.num_qubits = j.at("qubits").get<int>();
    for (const auto& o : j.at("ops")) {
        const std::string k = o.at("gate").get<std::string>();
        if (k == "H") c.ops.emplace_back(GateH{o.at("q").get<int>()});
        else if (k == "S") c.ops.emplace_back(GateS{o.at("q").get<int>()});
        else if (k == "SDG") c.ops.emplace_back(GateSdg{o.at("q").get<int>()});
        else if (k == "X") c.ops.emplace_back(GateX{o.at("q").get<int>()});
        else if (k == "CX") c.ops.emplace_back(GateCX{o.at("q").at(0).get<int>(), o.at("q").at(1).get<int>()});
        else if (k == "PR") c.ops.emplace_back(GatePauliRot{paulis_from_json(o.at("paulis")), o.at("angle").get<double>()});
        else if (k == "CPR")
            c.ops.emplace_back(GateCtrlPauliRot{o.at("ctrl").get<int>(), o.at("val").get<int>(),
                                                paulis_from_json(o.at("paulis")), o.at("angle").get<double>()});
        else if (k == "BASIS") {
            GateBasisChange b;
            for (char ch : o.at("axes").get<std::string>()) b.axes.push_back(axis_from_char(ch));
            c.ops.emplace_back(std::move(b));
        } else if (k == "MEASURE") c.ops.emplace_back(GateMeasureAll{});
        else throw std::invalid_argument("unknown gate kind: " + k);
    }
    c.check();
    return c;
}

} // namespace appqsim
