#include "sll/serialize.hpp"

#include <stdexcept>

#include "json.hpp"

namespace sll {

using nlohmann::json;

std::string environment_to_json(const Environment& env) {
    json sig;
    if (env.signals().kind() == SignalModel::Kind::binary) {
        sig = {{"kind", "binary"}, {"pi", env.signals().precision()}};
    } else {
        json atoms = json::array();
        for (const auto& a : env.signals().atoms()) atoms.push_back({a.q, a.mass});
        sig = {{"kind", "tabulated"}, {"atoms", atoms}};
    }
    json j = {{"lambda", env.lambda()},
              {"rho", env.rho()},
              {"cost", env.cost()},
              {"n", env.n()},
              {"signal", sig}};
    return j.dump();
}

Environment environment_from_json(const std::string& text) {
    json j = json::parse(text);
    const json& sig = j.at("signal");
    SignalModel signals = [&]() {
        std::string kind = sig.at("kind").get<std::string>();
        if (kind == "binary") return SignalModel::binary(sig.at("pi").get<double>());
        if (kind == "tabulated") {
            std::vector<SignalModel::Atom> atoms;
            for (const auto& a : sig.at("atoms"))
                atoms.push_back({a.at(0).get<double>(), a.at(1).get<double>()});
            return SignalModel::tabulated(std::move(atoms));
        }
        throw std::invalid_argument("unknown signal kind: " + kind);
    }();
    return Environment(j.at("lambda").get<double>(), j.at("rho").get<double>(),
                       j.at("cost").get<double>(), j.at("n").get<int>(), std::move(signals));
}

std::string strategy_to_json(const Strategy& s) {
    json j = {{"beta", s.beta}, {"beliefs", s.beliefs}, {"tie", s.tie}};
    return j.dump();
}

Strategy strategy_from_json(const std::string& text) {
    json j = json::parse(text);
    Strategy s;
    s.beta = j.at("beta").get<std::vector<double>>();
    s.beliefs = j.at("beliefs").get<std::vector<double>>();
    s.tie = j.at("tie").get<std::vector<double>>();
    s.validate();
    return s;
}

}  // namespace sll
