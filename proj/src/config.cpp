#include "blicket/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

#include "blicket/json_io.hpp"

namespace blicket {

using json = nlohmann::ordered_json;

namespace {

class FieldTable {
public:
    void number(const char* key, double* slot) {
        set_[key] = [slot, key](const json& v) {
            if (!v.is_number()) throw ParseError(key, std::string(key) + " must be a number");
            *slot = v.get<double>();
        };
    }

    void integer(const char* key, int* slot) {
        set_[key] = [slot, key](const json& v) {
            if (!v.is_number_integer() && !v.is_number_unsigned()) {
                throw ParseError(key, std::string(key) + " must be an integer");
            }
            *slot = v.get<int>();
        };
    }

    void boolean(const char* key, bool* slot) {
        set_[key] = [slot, key](const json& v) {
            if (!v.is_boolean()) throw ParseError(key, std::string(key) + " must be a boolean");
            *slot = v.get<bool>();
        };
    }

    void apply(const std::string& section, const json& obj) const {
        if (!obj.is_object()) throw ParseError(section, "\"" + section + "\" must be an object");
        for (const auto& [key, value] : obj.items()) {
            const auto it = set_.find(key);
            if (it == set_.end()) {
                throw ParseError(key, "unknown key \"" + section + "." + key + "\"");
            }
            it->second(value);
        }
    }

private:
    std::map<std::string, std::function<void(const json&)>> set_;
};

FieldTable rw_fields(rw::RwConfig& c) {
    FieldTable t;
    t.number("theta", &c.theta);
    t.boolean("iterative", &c.iterative);
    t.number("learning_rate", &c.learning_rate);
    t.integer("epochs", &c.epochs);
    return t;
}

FieldTable pc_fields(pc::PcConfig& c) {
    FieldTable t;
    t.number("eps_ci", &c.eps_ci);
    t.number("delta", &c.delta);
    return t;
}

FieldTable opt_fields(opt::OptConfig& c) {
    FieldTable t;
    t.integer("hidden", &c.hidden);
    t.number("lambda1", &c.lambda1);
    t.number("init_scale", &c.init_scale);
    t.number("lr", &c.lr);
    t.integer("inner_steps", &c.inner_steps);
    t.integer("max_outer", &c.max_outer);
    t.number("h_tol", &c.h_tol);
    t.number("rho_init", &c.rho_init);
    t.number("rho_max", &c.rho_max);
    t.number("tau_lo", &c.tau_lo);
    t.number("tau_hi", &c.tau_hi);
    t.number("prune_threshold", &c.prune_threshold);
    return t;
}

} // namespace

SolverConfig solver_config_from_json(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("config", std::string("not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("config", "config must be a JSON object");

    SolverConfig cfg;
    for (const auto& [section, value] : j.items()) {
        if (section == "rw") {
            rw_fields(cfg.rw).apply(section, value);
        } else if (section == "pc") {
            pc_fields(cfg.pc).apply(section, value);
        } else if (section == "opt") {
            opt_fields(cfg.opt).apply(section, value);
        } else {
            throw ParseError(section, "unknown config section \"" + section + "\"");
        }
    }
    return cfg;
}

SolverConfig load_solver_config(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return solver_config_from_json(buf.str());
}

std::string solver_config_to_json(const SolverConfig& cfg) {
    json j;
    j["rw"] = {{"theta", cfg.rw.theta},
               {"iterative", cfg.rw.iterative},
               {"learning_rate", cfg.rw.learning_rate},
               {"epochs", cfg.rw.epochs}};
    j["pc"] = {{"eps_ci", cfg.pc.eps_ci}, {"delta", cfg.pc.delta}};
    j["opt"] = {{"hidden", cfg.opt.hidden},
                {"lambda1", cfg.opt.lambda1},
                {"init_scale", cfg.opt.init_scale},
                {"lr", cfg.opt.lr},
                {"inner_steps", cfg.opt.inner_steps},
                {"max_outer", cfg.opt.max_outer},
                {"h_tol", cfg.opt.h_tol},
                {"rho_init", cfg.opt.rho_init},
                {"rho_max", cfg.opt.rho_max},
                {"tau_lo", cfg.opt.tau_lo},
                {"tau_hi", cfg.opt.tau_hi},
                {"prune_threshold", cfg.opt.prune_threshold}};
    return j.dump(2);
}

} // namespace blicket
