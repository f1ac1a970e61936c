#include "resetlab/controllers.hpp"

#include <cmath>
#include <string>

#include "resetlab/errors.hpp"

namespace resetlab {

void TuningParams::validate() const {
    auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
    if (!positive(omega_c) || !positive(omega_d) || !positive(omega_t) || !positive(omega_i))
        throw ConfigError("controller frequencies must be positive");
    if (!(omega_d < omega_c && omega_c < omega_t))
        throw ConfigError("controller tuning requires omega_d < omega_c < omega_t");
    if (!positive(alpha)) throw ConfigError("correction factor alpha must be positive");
    if (!std::isfinite(kp)) throw ConfigError("proportional gain must be finite");
    if (!(gamma >= -1.0 && gamma <= 1.0)) throw ConfigError("gamma must lie in [-1, 1]");
}

RationalTF make_pi(double kp, double omega_i) {
    if (!(omega_i > 0.0)) throw ConfigError("integrator corner must be positive");
    return RationalTF({kp, kp * omega_i}, {1.0, 0.0});
}

RationalTF make_lead(double omega_d, double omega_t) {
    if (!(omega_d > 0.0 && omega_d < omega_t)) throw ConfigError("lead filter requires 0 < omega_d < omega_t");
    return RationalTF({1.0 / omega_d, 1.0}, {1.0 / omega_t, 1.0});
}

CgLp make_cglp(const TuningParams& params) {
    params.validate();
    return CgLp{make_fore(params.omega_r(), params.gamma), make_lead(params.omega_d, params.omega_t)};
}

double shaping_constant(double omega_c, double omega_f) {
    return std::tan(kPi / 4.0 + 0.5 * std::atan(omega_c / omega_f));
}

double shaping_residual(double a, double omega_c, double omega_f) {
    const double phi_c = -std::atan(omega_c / omega_f);
    return std::atan(a) - std::atan(1.0 / a) + phi_c;
}

ShapingFilter design_shaping_filter(double omega_c, double omega_f) {
    if (!(omega_c > 0.0 && omega_f > 0.0)) throw ConfigError("shaping filter frequencies must be positive");
    const double a = shaping_constant(omega_c, omega_f);
    RationalTF   lpf({1.0}, {1.0 / omega_f, 1.0});
    RationalTF   tamed({a / omega_c, 1.0}, {1.0 / (omega_c * a), 1.0});
    return ShapingFilter{omega_c, omega_f, a, lpf * tamed};
}

double phase_at(const ShapingFilter& sf, double omega) { return std::arg(sf.tf.at_frequency(omega)); }

std::string_view sequence_name(int id) {
    switch (id) {
        case 1: return "Lead-Reset-Lag";
        case 2: return "Lag-Reset-Lead";
        case 3: return "Reset-Lead-Lag";
        case 4: return "Lead-Lag-Reset";
        default: throw ConfigError("sequence id must be 1..4, got " + std::to_string(id));
    }
}

ControllerChain arrange_sequence(const ControllerParts& parts, int id) {
    const RationalTF one = RationalTF::gain(1.0);
    ControllerChain  chain{parts, id, one, one};
    switch (id) {
        case 1: chain.cl1 = parts.lead, chain.cl2 = parts.lag; break;
        case 2: chain.cl1 = parts.lag, chain.cl2 = parts.lead; break;
        case 3: chain.cl2 = parts.lead * parts.lag; break;
        case 4: chain.cl1 = parts.lead * parts.lag; break;
        default: throw ConfigError("sequence id must be 1..4, got " + std::to_string(id));
    }
    return chain;
}

ControllerParts make_pi_cglp_parts(const TuningParams& params, std::optional<ShapingFilter> shaping) {
    CgLp cglp = make_cglp(params);
    return ControllerParts{std::move(cglp.lead), make_pi(params.kp, params.omega_i), std::move(cglp.fore),
                           std::move(shaping)};
}

ControllerParts make_simple_parts(double omega_r, double omega_d, double omega_i, double gamma) {
    if (!(omega_d > 0.0 && omega_i > 0.0)) throw ConfigError("lead and lag corners must be positive");
    return ControllerParts{RationalTF({1.0 / omega_d, 1.0}, {1.0}), RationalTF({1.0, omega_i}, {1.0, 0.0}),
                           make_fore(omega_r, gamma), std::nullopt};
}

}  // namespace resetlab
