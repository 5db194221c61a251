#pragma once

#include <string>
#include <string_view>

#include "sts/config.hpp"

namespace sts {

inline bool is_preset_name(std::string_view name) {
    return name == "a" || name == "b" || name == "c";
}

// Built-in example datasets:
//   a: eta(q)^2 eta(q^11)^2,  curve y^2 + y = x^3 - x^2,  level 11, 2000 primes
//   b: eta(q^2)^2 eta(q^10)^2, curve y^2 = x^3 + x^2 - x, level 20, 2000 primes
//   c: eta(q)^24 (weight 12, Ramanujan tau),              10000 primes
// a and b run the eta-vs-point-count cross-check; c has no curve.
inline RunConfig preset(std::string_view name) {
    RunConfig cfg;
    if (name == "a") {
        cfg.label = "a";
        EtaProductSpec e;
        e.factors = {{1, 2}, {11, 2}};
        e.bad_primes = {11};
        e.label = "a";
        CurveSpec c;
        c.a1 = 0; c.a2 = -1; c.a3 = 1; c.a4 = 0; c.a6 = 0;
        c.conductor = 11;
        c.label = "a";
        cfg.eta = e;
        cfg.curve = c;
        cfg.cross_check = true;
        cfg.num_primes = 2000;
    } else if (name == "b") {
        cfg.label = "b";
        EtaProductSpec e;
        e.factors = {{2, 2}, {10, 2}};
        e.bad_primes = {2, 5};
        e.label = "b";
        CurveSpec c;
        c.a1 = 0; c.a2 = 1; c.a3 = 0; c.a4 = -1; c.a6 = 0;
        c.conductor = 20;
        c.label = "b";
        cfg.eta = e;
        cfg.curve = c;
        cfg.cross_check = true;
        cfg.num_primes = 2000;
    } else if (name == "c") {
        cfg.label = "c";
        EtaProductSpec e;
        e.factors = {{1, 24}};
        e.label = "c";
        cfg.eta = e;
        cfg.num_primes = 10000;
    } else {
        throw config_error("unknown preset '" + std::string(name) + "' (expected a, b, or c)");
    }
    return cfg;
}

} // namespace sts
