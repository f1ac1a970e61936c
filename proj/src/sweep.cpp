#include "resetlab/sweep.hpp"

#include <exception>
#include <optional>

#include "resetlab/errors.hpp"

namespace resetlab {

namespace {

// Runs body(i) for i in [0, n). Exceptions inside the OpenMP region are
// captured and the first one (lowest index) is rethrown afterwards.
template <class Body>
void run_indexed(std::int64_t n, Execution exec, Body&& body) {
    if (exec == Execution::serial) {
        for (std::int64_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(static_cast<size_t>(n));
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < n; ++i) {
        try {
            body(i);
        } catch (...) {
            errors[static_cast<size_t>(i)] = std::current_exception();
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

HarmonicResponse make_table(const std::vector<double>& omegas, const std::vector<int>& orders) {
    validate_grid(omegas);
    validate_orders(orders);
    if (orders.empty()) throw ConfigError("at least one harmonic order is required");
    HarmonicResponse out;
    out.freqs  = omegas;
    out.orders = orders;
    out.values.assign(omegas.size() * orders.size(), Complex{0.0, 0.0});
    return out;
}

}  // namespace

HarmonicResponse open_loop_response(const ControllerChain& chain, const RationalTF& plant,
                                    const std::vector<double>& omegas, const std::vector<int>& orders, Execution exec) {
    auto       out = make_table(omegas, orders);
    const auto no  = static_cast<std::int64_t>(orders.size());
    run_indexed(static_cast<std::int64_t>(omegas.size()) * no, exec, [&](std::int64_t i) {
        out.values[static_cast<size_t>(i)] =
            open_loop_hosidf(chain, plant, omegas[static_cast<size_t>(i / no)], orders[static_cast<size_t>(i % no)]);
    });
    return out;
}

HarmonicResponse element_response(const ResetElement& re, const std::vector<double>& omegas,
                                  const std::vector<int>& orders, const std::optional<ShapingFilter>& shaping,
                                  Execution exec) {
    auto       out = make_table(omegas, orders);
    const auto no  = static_cast<std::int64_t>(orders.size());
    run_indexed(static_cast<std::int64_t>(omegas.size()) * no, exec, [&](std::int64_t i) {
        const double w = omegas[static_cast<size_t>(i / no)];
        const int    n = orders[static_cast<size_t>(i % no)];
        out.values[static_cast<size_t>(i)] =
            shaping ? hosidf_shaped(re, phase_at(*shaping, w), w, n) : hosidf(re, w, n);
    });
    return out;
}

std::vector<HarmonicSlice> oracle_sweep(const ResetElement& re, const std::vector<double>& omegas,
                                        const OracleOptions& opt, Execution exec) {
    validate_grid(omegas);
    std::vector<HarmonicSlice> out(omegas.size());
    run_indexed(static_cast<std::int64_t>(omegas.size()), exec, [&](std::int64_t i) {
        out[static_cast<size_t>(i)] = harmonic_oracle(re, omegas[static_cast<size_t>(i)], opt);
    });
    return out;
}

std::vector<SensitivityRow> sensitivity_sweep(const std::vector<ControllerChain>& chains, const RationalTF& plant,
                                              const std::vector<SweepPoint>& points, const SimConfig& base,
                                              int repetitions, Execution exec) {
    if (repetitions < 1) throw ConfigError("repetitions must be >= 1");
    if (chains.empty()) throw ConfigError("at least one sequence is required");
    base.validate();
    const auto nc = static_cast<std::int64_t>(chains.size());
    const auto nr = static_cast<std::int64_t>(repetitions);
    const auto np = static_cast<std::int64_t>(points.size());

    std::vector<SensitivityPoint> runs(static_cast<size_t>(np * nc * nr));
    run_indexed(np * nc * nr, exec, [&](std::int64_t i) {
        const std::int64_t p = i / (nc * nr);
        const std::int64_t c = (i / nr) % nc;
        const std::int64_t r = i % nr;
        const auto&        pt = points[static_cast<size_t>(p)];
        SimConfig          cfg = base;
        cfg.noise_fraction     = pt.noise_fraction;
        cfg.seed = derive_seed(base.seed, static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(r));
        runs[static_cast<size_t>(i)] =
            pseudo_sensitivity_point(chains[static_cast<size_t>(c)], plant, pt.freq_hz, pt.amplitude, cfg);
    });

    std::vector<SensitivityRow> rows;
    rows.reserve(static_cast<size_t>(np * nc));
    for (std::int64_t p = 0; p < np; ++p) {
        for (std::int64_t c = 0; c < nc; ++c) {
            SensitivityRow row;
            row.freq_hz     = points[static_cast<size_t>(p)].freq_hz;
            row.sequence_id = chains[static_cast<size_t>(c)].sequence_id;
            row.repetitions = repetitions;
            row.settled     = true;
            for (std::int64_t r = 0; r < nr; ++r) {
                const auto& run = runs[static_cast<size_t>((p * nc + c) * nr + r)];
                row.s_partial += run.s_partial;
                row.max_control += run.max_control;
                row.settled = row.settled && run.settled;
            }
            row.s_partial /= static_cast<double>(repetitions);
            row.max_control /= static_cast<double>(repetitions);
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace resetlab
