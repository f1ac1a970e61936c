#include "resetlab/commands.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "resetlab/errors.hpp"
#include "resetlab/plot.hpp"
#include "resetlab/sim.hpp"

namespace resetlab {

namespace fs = std::filesystem;

namespace {

fs::path prepare_out_dir(const RunConfig& cfg) {
    const fs::path  dir(cfg.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    return dir;
}

double to_db(double mag) { return 20.0 * std::log10(mag); }

std::string id_str(int id) { return std::to_string(id); }

std::string flag(bool b) { return b ? "1" : "0"; }

std::string describe_kp(const RunConfig& cfg, const TuningParams& t) {
    std::ostringstream ss;
    ss.precision(10);
    ss << "Kp = " << t.kp << (cfg.kp_mode == KpMode::crossover ? " (tuned for DF crossover at " : " (from config; omega_c = ")
       << cfg.omega_c_hz << " Hz)";
    return ss.str();
}

}  // namespace

ControllerParts closed_loop_parts(const RunConfig& cfg) {
    std::optional<ShapingFilter> sf;
    if (cfg.shaping) sf = cfg.shaping_filter();
    return make_pi_cglp_parts(cfg.tuning(), sf);
}

ControllerParts hosidf_parts(const RunConfig& cfg) {
    if (cfg.hosidf_parts == HosidfParts::pi_cglp) return closed_loop_parts(cfg);
    const double    wd    = hz_to_rad(cfg.omega_d_hz);
    ControllerParts parts = make_simple_parts(wd / cfg.alpha, wd, hz_to_rad(cfg.omega_i_hz), cfg.gamma);
    if (cfg.shaping) parts.shaping = cfg.shaping_filter();
    return parts;
}

std::vector<ControllerChain> chains_for(const ControllerParts& parts, const std::vector<int>& ids) {
    std::vector<ControllerChain> out;
    out.reserve(ids.size());
    for (int id : ids) out.push_back(arrange_sequence(parts, id));
    return out;
}

std::optional<Multisine> calibrated_disturbance(const RunConfig& cfg) {
    if (!cfg.disturbance) return std::nullopt;
    RunConfig plain = cfg;
    plain.shaping   = false;
    const auto seq1 = arrange_sequence(closed_loop_parts(plain), 1);
    SimConfig  sc   = plain.sim_config();
    sc.shaping      = false;
    Multisine ms;
    ms.amplitude = calibrate_disturbance(cfg.plant(), seq1, cfg.disturbance_fraction, sc);
    return ms;
}

std::vector<double> hosidf_grid_hz(const RunConfig& cfg) {
    if (cfg.hosidf_points > 0) return log_grid(cfg.hosidf_fmin_hz, cfg.hosidf_fmax_hz, static_cast<std::size_t>(cfg.hosidf_points));
    return log_grid_per_decade(cfg.hosidf_fmin_hz, cfg.hosidf_fmax_hz, static_cast<std::size_t>(cfg.points_per_decade));
}

std::vector<double> sensitivity_grid_hz(const RunConfig& cfg) {
    return log_grid(cfg.sens_fmin_hz, cfg.sens_fmax_hz, static_cast<std::size_t>(cfg.sens_points));
}

CsvTable harmonic_table(const HarmonicResponse& resp, int order) {
    CsvTable t;
    t.header = {"freq_hz", "re", "im", "mag_db", "phase_deg"};
    for (std::size_t i = 0; i < resp.freqs.size(); ++i) {
        const Complex v = resp.at(i, order);
        t.add_row({format_double(rad_to_hz(resp.freqs[i])), format_double(v.real()), format_double(v.imag()),
                   format_double(to_db(std::abs(v))), format_double(std::arg(v) * 180.0 / kPi)});
    }
    return t;
}

CsvTable sensitivity_table(const std::vector<SensitivityRow>& rows, const std::vector<ControllerChain>& chains,
                           const RationalTF& plant) {
    CsvTable t;
    t.header = {"freq_hz", "sequence_id", "s_partial_db", "max_control", "settled_flag", "df_sensitivity_db"};
    for (const auto& r : rows) {
        const auto it = std::find_if(chains.begin(), chains.end(),
                                     [&](const ControllerChain& c) { return c.sequence_id == r.sequence_id; });
        if (it == chains.end()) throw ConfigError("sensitivity row for an unknown sequence");
        const Complex L1 = open_loop_hosidf(*it, plant, hz_to_rad(r.freq_hz), 1);
        t.add_row({format_double(r.freq_hz), id_str(r.sequence_id), format_double(to_db(r.s_partial)),
                   format_double(r.max_control), flag(r.settled), format_double(to_db(std::abs(df_sensitivity(L1))))});
    }
    return t;
}

// ----------------------------------------------------------------------------
// hosidf
// ----------------------------------------------------------------------------
CommandReport cmd_hosidf(const RunConfig& cfg, Execution exec) {
    cfg.validate();
    CommandReport  rep;
    const fs::path dir    = prepare_out_dir(cfg);
    const auto     parts  = hosidf_parts(cfg);
    const auto     plant  = cfg.include_plant ? cfg.plant() : RationalTF::gain(1.0);
    const auto     hz     = hosidf_grid_hz(cfg);
    std::vector<double> w(hz.size());
    std::transform(hz.begin(), hz.end(), w.begin(), hz_to_rad);

    std::vector<std::pair<int, HarmonicResponse>> responses;
    for (const auto& chain : chains_for(parts, cfg.sequences))
        responses.emplace_back(chain.sequence_id, open_loop_response(chain, plant, w, cfg.orders, exec));

    for (const auto& [id, resp] : responses)
        for (int n : cfg.orders) {
            const fs::path p = dir / ("hosidf_seq" + id_str(id) + "_n" + std::to_string(n) + ".csv");
            write_csv(p, harmonic_table(resp, n));
            rep.files.push_back(p);
        }

    if (cfg.shaping) {
        const ResetElement fore = make_fore(hz_to_rad(cfg.omega_d_hz) / cfg.alpha, cfg.gamma);
        const auto         sf   = cfg.shaping_filter();
        const auto         bare = element_response(fore, w, cfg.orders, std::nullopt, exec);
        const auto         shp  = element_response(fore, w, cfg.orders, sf, exec);
        for (int n : cfg.orders) {
            const fs::path a = dir / ("fore_n" + std::to_string(n) + ".csv");
            const fs::path b = dir / ("fore_shaped_n" + std::to_string(n) + ".csv");
            write_csv(a, harmonic_table(bare, n));
            write_csv(b, harmonic_table(shp, n));
            rep.files.push_back(a);
            rep.files.push_back(b);
        }
        if (cfg.plots) {
            std::vector<PlotSeries> s;
            for (int n : cfg.orders) {
                PlotSeries a{"FORE n=" + std::to_string(n), hz, {}};
                PlotSeries b{"shaped n=" + std::to_string(n), hz, {}};
                for (std::size_t i = 0; i < w.size(); ++i) {
                    a.y.push_back(to_db(std::abs(bare.at(i, n))));
                    b.y.push_back(to_db(std::abs(shp.at(i, n))));
                }
                s.push_back(std::move(a));
                s.push_back(std::move(b));
            }
            const fs::path p = dir / "fore_shaping.svg";
            write_svg_plot(p, {"FORE with and without shaping filter", "frequency [Hz]", "magnitude [dB]"}, s);
            rep.files.push_back(p);
        }
    }

    if (cfg.plots) {
        for (int n : cfg.orders) {
            std::vector<PlotSeries> s;
            for (const auto& [id, resp] : responses) {
                PlotSeries ps{"seq " + id_str(id) + " " + std::string(sequence_name(id)), hz, {}};
                for (std::size_t i = 0; i < w.size(); ++i) ps.y.push_back(to_db(std::abs(resp.at(i, n))));
                s.push_back(std::move(ps));
            }
            const fs::path p = dir / ("hosidf_n" + std::to_string(n) + ".svg");
            write_svg_plot(p, {"|L_" + std::to_string(n) + "|", "frequency [Hz]", "magnitude [dB]"}, s);
            rep.files.push_back(p);
        }
    }

    if (cfg.hosidf_parts == HosidfParts::pi_cglp && cfg.include_plant) {
        const auto t  = cfg.tuning();
        const auto m  = df_margins(arrange_sequence(parts, 1), plant, hz_to_rad(cfg.hosidf_fmin_hz),
                                   hz_to_rad(cfg.hosidf_fmax_hz));
        rep.notes.push_back(describe_kp(cfg, t));
        if (m.found) {
            std::ostringstream ss;
            ss << "DF crossover " << rad_to_hz(m.crossover) << " Hz, phase margin " << m.phase_margin_deg << " deg";
            rep.notes.push_back(ss.str());
        }
    }
    return rep;
}

// ----------------------------------------------------------------------------
// sensitivity
// ----------------------------------------------------------------------------
CommandReport cmd_sensitivity(const RunConfig& cfg, Execution exec) {
    cfg.validate();
    CommandReport  rep;
    const fs::path dir    = prepare_out_dir(cfg);
    const auto     parts  = closed_loop_parts(cfg);
    const auto     chains = chains_for(parts, cfg.sequences);
    const auto     plant  = cfg.plant();

    SimConfig sc   = cfg.sim_config();
    sc.disturbance = calibrated_disturbance(cfg);

    std::vector<SweepPoint> points;
    for (double f : sensitivity_grid_hz(cfg)) points.push_back({f, 1.0, cfg.noise_pct / 100.0});
    const auto rows  = sensitivity_sweep(chains, plant, points, sc, cfg.repetitions, exec);
    const auto table = sensitivity_table(rows, chains, plant);

    const fs::path p = dir / "sensitivity.csv";
    write_csv(p, table);
    rep.files.push_back(p);
    for (const auto& r : rows) rep.flagged += r.settled ? 0 : 1;
    rep.notes.push_back(describe_kp(cfg, cfg.tuning()));
    if (sc.disturbance) {
        std::ostringstream ss;
        ss.precision(10);
        ss << "disturbance amplitude per unit reference: " << sc.disturbance->amplitude;
        rep.notes.push_back(ss.str());
    }

    if (cfg.plots) {
        std::vector<PlotSeries> s;
        for (const auto& c : chains) {
            PlotSeries ps{"seq " + id_str(c.sequence_id), {}, {}};
            for (std::size_t i = 0; i < rows.size(); ++i)
                if (rows[i].sequence_id == c.sequence_id) {
                    ps.x.push_back(rows[i].freq_hz);
                    ps.y.push_back(table.number(i, "s_partial_db"));
                }
            s.push_back(std::move(ps));
        }
        PlotSeries df{"DF 1/(1+L1)", {}, {}};
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (rows[i].sequence_id == chains.front().sequence_id) {
                df.x.push_back(rows[i].freq_hz);
                df.y.push_back(table.number(i, "df_sensitivity_db"));
            }
        s.push_back(std::move(df));
        const fs::path sp = dir / "sensitivity.svg";
        write_svg_plot(sp, {"pseudo-sensitivity", "frequency [Hz]", "max|e|/|r| [dB]"}, s);
        rep.files.push_back(sp);
    }
    return rep;
}

// ----------------------------------------------------------------------------
// step
// ----------------------------------------------------------------------------
CommandReport cmd_step(const RunConfig& cfg) {
    cfg.validate();
    CommandReport  rep;
    const fs::path dir    = prepare_out_dir(cfg);
    const auto     chains = chains_for(closed_loop_parts(cfg), cfg.sequences);
    const auto     plant  = cfg.plant();
    SimConfig      sc     = cfg.sim_config();
    sc.duration_s         = cfg.step_duration_s;

    CsvTable metrics;
    metrics.header = {"sequence_id", "rise_time_s", "overshoot_pct", "settling_time_s", "ss_error",
                      "settled_flag", "nonzero_ss_error", "has_overshoot"};
    std::vector<PlotSeries> plot;
    for (const auto& chain : chains) {
        const auto res = simulate_step(chain, plant, sc);
        CsvTable   ts;
        ts.header = {"t_s", "r", "y", "e", "u"};
        for (std::size_t k = 0; k < res.sim.y.size(); ++k)
            ts.add_row({format_double(static_cast<double>(k) * res.sim.Ts), "1", format_double(res.sim.y[k]),
                        format_double(res.sim.e[k]), format_double(res.sim.u[k])});
        const fs::path p = dir / ("step_seq" + id_str(chain.sequence_id) + ".csv");
        write_csv(p, ts);
        rep.files.push_back(p);

        const auto& m = res.metrics;
        metrics.add_row({id_str(chain.sequence_id), format_double(m.rise_time), format_double(m.overshoot_pct),
                         format_double(m.settling_time), format_double(m.ss_error), flag(m.settled),
                         flag(m.ss_error > 1e-3), flag(m.overshoot_pct > 0.1)});
        rep.flagged += m.settled ? 0 : 1;

        if (cfg.plots) {
            PlotSeries ps{"seq " + id_str(chain.sequence_id), {}, {}};
            const std::size_t stride = std::max<std::size_t>(1, res.sim.y.size() / 4000);
            for (std::size_t k = 0; k < res.sim.y.size(); k += stride) {
                ps.x.push_back(static_cast<double>(k) * res.sim.Ts);
                ps.y.push_back(res.sim.y[k]);
            }
            plot.push_back(std::move(ps));
        }
    }
    const fs::path mp = dir / "step_metrics.csv";
    write_csv(mp, metrics);
    rep.files.push_back(mp);
    if (cfg.plots) {
        const fs::path sp = dir / "step.svg";
        write_svg_plot(sp, {"step responses", "time [s]", "output", false}, plot);
        rep.files.push_back(sp);
    }
    return rep;
}

// ----------------------------------------------------------------------------
// compare
// ----------------------------------------------------------------------------
CommandReport cmd_compare(const RunConfig& cfg, Execution exec) {
    cfg.validate();
    CommandReport  rep;
    const fs::path dir    = prepare_out_dir(cfg);
    const auto     chains = chains_for(closed_loop_parts(cfg), cfg.sequences);
    const auto     plant  = cfg.plant();

    SimConfig sc   = cfg.sim_config();
    sc.disturbance = calibrated_disturbance(cfg);

    std::vector<SweepPoint> points;
    for (std::size_t i = 0; i < cfg.compare_freqs_hz.size(); ++i)
        points.push_back({cfg.compare_freqs_hz[i], cfg.compare_amplitudes[i], cfg.compare_noise_pct[i] / 100.0});
    const auto rows = sensitivity_sweep(chains, plant, points, sc, cfg.repetitions, exec);

    CsvTable summary;
    summary.header = {"frequency_hz", "sequence_id", "max_error", "max_control", "settled_flag"};
    CsvTable rank;
    rank.header = {"frequency_hz", "sequence_id", "error_rank", "control_rank"};

    const std::size_t nc = chains.size();
    for (std::size_t p = 0; p < points.size(); ++p) {
        const double amp = points[p].amplitude;
        std::vector<std::size_t> by_err(nc), by_ctl(nc);
        std::iota(by_err.begin(), by_err.end(), 0);
        std::iota(by_ctl.begin(), by_ctl.end(), 0);
        auto row = [&](std::size_t c) -> const SensitivityRow& { return rows[p * nc + c]; };
        // Error rank 1 = smallest error; control rank 1 = largest control input.
        std::stable_sort(by_err.begin(), by_err.end(),
                         [&](std::size_t a, std::size_t b) { return row(a).s_partial < row(b).s_partial; });
        std::stable_sort(by_ctl.begin(), by_ctl.end(),
                         [&](std::size_t a, std::size_t b) { return row(a).max_control > row(b).max_control; });
        std::vector<int> er(nc), cr(nc);
        for (std::size_t i = 0; i < nc; ++i) {
            er[by_err[i]] = static_cast<int>(i) + 1;
            cr[by_ctl[i]] = static_cast<int>(i) + 1;
        }
        for (std::size_t c = 0; c < nc; ++c) {
            const auto& r = row(c);
            summary.add_row({format_double(r.freq_hz), id_str(r.sequence_id), format_double(r.s_partial * amp),
                             format_double(r.max_control * amp), flag(r.settled)});
            rank.add_row({format_double(r.freq_hz), id_str(r.sequence_id), std::to_string(er[c]), std::to_string(cr[c])});
            rep.flagged += r.settled ? 0 : 1;
        }
    }
    const fs::path a = dir / "compare.csv";
    const fs::path b = dir / "compare_rank.csv";
    write_csv(a, summary);
    write_csv(b, rank);
    rep.files.push_back(a);
    rep.files.push_back(b);
    return rep;
}

}  // namespace resetlab
