// Copyright 2026 The agingsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Command implementations behind the agingsim CLI. Each command reads a
// Config, writes its files under an output directory, and returns the list
// of paths written. Errors are thrown as agingsim::Error.

#include <agingsim/classical.hpp>
#include <agingsim/io/config.hpp>
#include <agingsim/io/csv.hpp>
#include <agingsim/io/svg.hpp>
#include <agingsim/params.hpp>
#include <agingsim/quantum.hpp>
#include <agingsim/stability.hpp>
#include <agingsim/sweep.hpp>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace agingsim::app {

using json = nlohmann::ordered_json;

enum class Format { csv, json };

struct Options {
    std::string out_dir = ".";
    Format format = Format::csv;
    bool plot = true;
    int threads = 1;
};

/// JSON number rounded to 12 significant digits; null when not finite.
inline json num(double v) {
    if (!std::isfinite(v)) return nullptr;
    return std::stod(io::fmt(v));
}

inline json num(std::optional<double> v) { return v ? num(*v) : json(nullptr); }

inline json complex_json(complex z) { return json::array({num(z.real()), num(z.imag())}); }

// ---------------------------------------------------------------------------
// Config resolution

inline sweep::Regime parse_regime(const std::string& s) {
    if (s == "classical") return sweep::Regime::Classical;
    if (s == "quantum") return sweep::Regime::Quantum;
    if (s == "adiabatic") return sweep::Regime::Adiabatic;
    throw Error(ErrorKind::ConfigError, "regime must be classical, quantum or adiabatic, got '" + s + "'");
}

inline sweep::AxisName parse_axis(const std::string& s) {
    if (s == "p") return sweep::AxisName::p;
    if (s == "g") return sweep::AxisName::g;
    if (s == "J") return sweep::AxisName::J;
    if (s == "V") return sweep::AxisName::V;
    throw Error(ErrorKind::ConfigError, "axis name must be p, g, J or V, got '" + s + "'");
}

inline sweep::Regime regime_of(const io::Config& cfg) { return parse_regime(cfg.string("regime", "classical")); }

/// Parameters from `preset` (classical or quantum; defaults to the regime's
/// family) overridden by params.* keys.
inline SystemParams resolve_params(const io::Config& cfg, sweep::Regime regime) {
    const std::string preset = cfg.string("preset", regime == sweep::Regime::Classical ? "classical" : "quantum");
    SystemParams p;
    if (preset == "classical") p = presets::classical();
    else if (preset == "quantum") p = presets::quantum();
    else if (preset != "none") throw Error(ErrorKind::ConfigError, "preset must be classical, quantum or none");
    p.a = cfg.number("params.a", p.a);
    p.b = cfg.number("params.b", p.b);
    p.kappa = cfg.number("params.kappa", p.kappa);
    p.V = cfg.number("params.V", p.V);
    p.g = cfg.number("params.g", p.g);
    p.J = cfg.number("params.J", p.J);
    p.N = cfg.integer("params.N", p.N);
    p.p = cfg.number("params.p", p.p);
    p.delta = cfg.number("params.delta", p.delta);
    return p;
}

inline sweep::InitialCondition resolve_initial(const io::Config& cfg) {
    sweep::InitialCondition ic;
    const complex A{cfg.number("initial.A", 0.01), cfg.number("initial.A_im", 0.0)};
    const complex I{cfg.number("initial.I", 0.01), cfg.number("initial.I_im", 0.0)};
    const std::string atom = cfg.string("initial.atom", "excited");
    if (atom != "excited" && atom != "ground")
        throw Error(ErrorKind::ConfigError, "initial.atom must be excited or ground");
    ic.atom_excited = atom == "excited";
    ic.classical = {complex{}, ic.atom_excited ? 1.0 : 0.0, A, I};
    ic.alpha = {cfg.number("initial.alpha", 1.0), cfg.number("initial.alpha_im", 0.0)};
    ic.name = "A=" + io::fmt(A.real()) + ",I=" + io::fmt(I.real()) + ",alpha=" + io::fmt(ic.alpha.real()) + "," + atom;
    return ic;
}

inline sweep::SolverKnobs resolve_solver(const io::Config& cfg) {
    sweep::SolverKnobs k;
    k.classical.t_max = cfg.number("solver.t_max", k.classical.t_max);
    k.classical.dt = cfg.number("solver.dt", k.classical.dt);
    k.classical.max_doublings = cfg.integer("solver.max_doublings", k.classical.max_doublings);
    k.classical.stride = cfg.integer("solver.stride", k.classical.stride);
    k.quantum.dt = cfg.number("solver.quantum_dt", k.quantum.dt);
    k.quantum.t_max = cfg.number("solver.quantum_t_max", k.quantum.t_max);
    k.quantum.tolerance = cfg.number("solver.tolerance", k.quantum.tolerance);
    return k;
}

inline std::optional<sweep::Axis> resolve_axis(const io::Config& cfg, const std::string& prefix) {
    const auto name = cfg.string(prefix + ".name");
    const auto values = cfg.numbers(prefix + ".values");
    if (!name && !values) return std::nullopt;
    if (!name || !values) throw Error(ErrorKind::ConfigError, prefix + " needs both .name and .values");
    return sweep::Axis{parse_axis(*name), *values};
}

inline json params_json(const SystemParams& p) {
    return {{"a", num(p.a)}, {"b", num(p.b)}, {"kappa", num(p.kappa)}, {"V", num(p.V)}, {"g", num(p.g)},
            {"J", num(p.J)}, {"N", p.N}, {"p", num(p.p)}, {"delta", num(p.delta)}};
}

inline json knobs_json(const sweep::SolverKnobs& k) {
    return {{"classical", {{"t_max", num(k.classical.t_max)}, {"dt", num(k.classical.dt)},
                           {"max_doublings", k.classical.max_doublings}, {"stride", k.classical.stride}}},
            {"quantum", {{"t_max", num(k.quantum.t_max)}, {"dt", num(k.quantum.dt)},
                         {"tolerance", num(k.quantum.tolerance)}}}};
}

// ---------------------------------------------------------------------------
// Output helpers

class Output {
public:
    Output(const io::Config& cfg, const Options& opts, const std::string& default_stem)
        : opts_(opts), stem_(cfg.string("output.name", default_stem)) {
        dir_ = opts.out_dir;
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec || !std::filesystem::is_directory(dir_))
            throw Error(ErrorKind::InvalidArgument, "cannot create output directory '" + dir_.string() + "'");
    }

    const Options& options() const { return opts_; }

    std::string path(const std::string& suffix) const { return (dir_ / (stem_ + suffix)).string(); }

    void table(const io::CsvWriter& csv, const json& rows_json, const std::string& suffix = "") {
        if (opts_.format == Format::csv) {
            csv.save(path(suffix + ".csv"));
            written_.push_back(path(suffix + ".csv"));
        } else {
            write_json(suffix + ".json", rows_json);
        }
    }

    void write_json(const std::string& suffix, const json& doc) {
        std::ofstream out(path(suffix), std::ios::binary);
        out << doc.dump(2) << '\n';
        if (!out) throw Error(ErrorKind::InvalidArgument, "failed to write '" + path(suffix) + "'");
        written_.push_back(path(suffix));
    }

    void plot(const std::string& suffix, const std::string& svg) {
        if (!opts_.plot) return;
        io::svg::save(path(suffix), svg);
        written_.push_back(path(suffix));
    }

    const std::vector<std::string>& written() const { return written_; }

private:
    Options opts_;
    std::string stem_;
    std::filesystem::path dir_;
    std::vector<std::string> written_;
};

/// Rows of a CSV as JSON objects keyed by the header.
inline json rows_to_json(const std::vector<std::string>& header, const std::vector<std::vector<json>>& rows) {
    json out = json::array();
    for (const auto& r : rows) {
        json obj = json::object();
        for (std::size_t i = 0; i < header.size(); ++i) obj[header[i]] = r[i];
        out.push_back(obj);
    }
    return out;
}

inline std::string cell(const json& v) {
    if (v.is_null()) return "";
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    return io::fmt(v.get<double>());
}

/// Writes a table in the selected format from JSON cells.
inline void emit_table(Output& out, const std::vector<std::string>& header, const std::vector<std::vector<json>>& rows,
                       const std::string& suffix = "") {
    io::CsvWriter csv(header);
    for (const auto& r : rows) {
        std::vector<std::string> fields;
        for (const auto& v : r) fields.push_back(cell(v));
        csv.add(fields);
    }
    out.table(csv, rows_to_json(header, rows), suffix);
}

// ---------------------------------------------------------------------------
// trajectory

inline std::vector<std::string> cmd_trajectory(const io::Config& cfg, const Options& opts) {
    const sweep::Regime regime = regime_of(cfg);
    const SystemParams params = resolve_params(cfg, regime);
    validate_params(params);
    const sweep::InitialCondition ic = resolve_initial(cfg);
    const bool classical = regime == sweep::Regime::Classical;
    const double t_max = cfg.number("trajectory.t_max", classical ? 10.0 : 200.0);
    const double dt = cfg.number("trajectory.dt", classical ? 1e-4 : 5e-3);
    const int stride = cfg.integer("trajectory.stride", classical ? 100 : 20);
    // Display frequency: amplitudes are reported as alpha * exp(-i omega t), the
    // laboratory frame of resonant oscillators. 0 keeps the interaction picture.
    const double omega = cfg.number("trajectory.omega", 0.0);
    if (!std::isfinite(omega)) throw Error(ErrorKind::ConfigError, "trajectory.omega must be finite");
    const auto frame = [omega](double t) { return std::polar(1.0, -omega * t); };
    cfg.allow({"output.name"});
    cfg.check_known();

    Output out(cfg, opts, "trajectory");
    std::vector<std::string> header;
    std::vector<std::vector<json>> rows;
    io::svg::Series active{"active", {}, {}, {}}, inactive{"inactive", {}, {}, {}};
    if (classical) {
        header = {"t", "re_A", "im_A", "re_I", "im_I", "sigma_ee"};
        const auto traj = classical::integrate(ic.classical, params, t_max, dt, stride);
        for (std::size_t i = 0; i < traj.times.size(); ++i) {
            const auto& s = traj.states[i];
            const complex A = s.A * frame(traj.times[i]), I = s.I * frame(traj.times[i]);
            rows.push_back({num(traj.times[i]), num(A.real()), num(A.imag()), num(I.real()), num(I.imag()),
                            num(s.sigma_ee)});
            active.x.push_back(A.real()), active.y.push_back(A.imag());
            inactive.x.push_back(I.real()), inactive.y.push_back(I.imag());
        }
    } else {
        header = {"t", "re_a_active", "im_a_active", "re_a_inactive", "im_a_inactive", "n_mean", "atom_ee"};
        std::vector<quantum::Observation> series;
        const auto init = quantum::QuantumState<>::coherent(ic.alpha, ic.atom_excited);
        if (regime == sweep::Regime::Quantum) {
            series = quantum::evolve<quantum::FullModel<>>(init, params, t_max, dt, stride).series;
        } else {
            quantum::require_adiabatic_regime(params);
            series = quantum::evolve<quantum::AdiabaticModel<>>(quantum::OscillatorPair<>::from(init), params, t_max,
                                                                dt, stride)
                         .series;
        }
        for (const auto& o : series) {
            const complex a = o.lowering_active * frame(o.t), b = o.lowering_inactive * frame(o.t);
            rows.push_back({num(o.t), num(a.real()), num(a.imag()), num(b.real()), num(b.imag()),
                            num(o.mean_boson_number), num(o.atom_excited)});
            active.x.push_back(a.real()), active.y.push_back(a.imag());
            inactive.x.push_back(b.real()), inactive.y.push_back(b.imag());
        }
    }
    emit_table(out, header, rows);
    const std::string what = classical ? "amplitude" : "<a>";
    out.plot("_active.svg", io::svg::line_chart({active}, {"active group " + what, "Re", "Im"}, true));
    out.plot("_inactive.svg", io::svg::line_chart({inactive}, {"inactive group " + what, "Re", "Im"}, true));
    return out.written();
}

// ---------------------------------------------------------------------------
// fockdist

struct FockColumn {
    double p = 0.0, g = 0.0;
    quantum::FockDistribution numeric_active, numeric_inactive;
    std::optional<quantum::FockDistribution> analytic_active, analytic_inactive;
    bool converged = false;
    double amplitude = 0.0;  ///< |R| of the integrated steady state
    std::string note;
};

inline FockColumn fock_column(const SystemParams& params, const sweep::InitialCondition& ic,
                              const quantum::SteadyOptions& opts) {
    FockColumn col;
    col.p = params.p;
    col.g = params.g;
    const auto result = quantum::steady_state<quantum::FullModel<>>(
        quantum::QuantumState<>::coherent(ic.alpha, ic.atom_excited), params, opts);
    col.converged = result.converged;
    col.numeric_active = quantum::fock_distribution(result.state.active);
    col.numeric_inactive = quantum::fock_distribution(result.state.inactive);
    col.amplitude = std::abs(quantum::mean_amplitude(result.state, params));
    if (!col.converged) col.note = "NoConvergence: residual " + io::fmt(result.residual);
    if (col.amplitude < classical::kAgingAmplitude) {
        const auto [a, i] = quantum::aging_fock_analytic(params);
        col.analytic_active = a;
        col.analytic_inactive = i;
    } else if (col.note.empty()) {
        col.note = "analytic not applicable (nonzero mean amplitude " + io::fmt(col.amplitude) + ")";
    }
    return col;
}

inline std::vector<std::string> fock_outputs(const io::Config& cfg, const Options& opts, const std::string& stem) {
    const sweep::Regime regime = regime_of(cfg);
    if (regime == sweep::Regime::Classical) throw Error(ErrorKind::ConfigError, "fock distributions need regime = quantum");
    const SystemParams base = resolve_params(cfg, regime);
    const sweep::InitialCondition ic = resolve_initial(cfg);
    sweep::SolverKnobs knobs = resolve_solver(cfg);
    knobs.quantum.throw_on_failure = false;
    const std::vector<double> ps = cfg.numbers("fock.p").value_or(std::vector<double>{base.p});
    const std::vector<double> gs = cfg.numbers("fock.g").value_or(std::vector<double>{base.g});
    cfg.allow({"output.name"});
    cfg.check_known();

    std::vector<SystemParams> points;
    for (double g : gs)
        for (double p : ps) {
            SystemParams params = base;
            params.g = g;
            params.p = p;
            validate_params(params);
            points.push_back(params);
        }
    std::vector<FockColumn> cols(points.size());
    sweep::detail::parallel_for(points.size(), opts.threads,
                                [&](std::size_t k) { cols[k] = fock_column(points[k], ic, knobs.quantum); });

    Output out(cfg, opts, stem);
    const std::vector<std::string> header{"p", "g", "group", "n", "numeric", "analytic", "difference",
                                          "converged", "note"};
    std::vector<std::vector<json>> rows;
    std::vector<io::svg::BarGroup> bars_active, bars_inactive;
    for (const auto& c : cols) {
        for (int group = 0; group < 2; ++group) {
            const auto& numeric = group == 0 ? c.numeric_active : c.numeric_inactive;
            const auto& analytic = group == 0 ? c.analytic_active : c.analytic_inactive;
            for (int n = 0; n < kFockDim; ++n) {
                json a = analytic ? num(analytic->populations[n]) : json(nullptr);
                json d = analytic ? num(numeric.populations[n] - analytic->populations[n]) : json(nullptr);
                rows.push_back({num(c.p), num(c.g), group == 0 ? "active" : "inactive", n, num(numeric.populations[n]),
                                a, d, c.converged, c.note});
            }
            const std::string label = "p=" + io::fmt(c.p) + " g=" + io::fmt(c.g);
            auto& bars = group == 0 ? bars_active : bars_inactive;
            bars.push_back({label, std::vector<double>(numeric.populations.begin(), numeric.populations.end())});
        }
    }
    emit_table(out, header, rows);
    const std::vector<std::string> levels{"0", "1", "2", "3", "4"};
    out.plot("_active.svg", io::svg::grouped_bars(levels, bars_active, {"active oscillator", "n", "P(n)"}));
    out.plot("_inactive.svg", io::svg::grouped_bars(levels, bars_inactive, {"inactive oscillator", "n", "P(n)"}));
    return out.written();
}

inline std::vector<std::string> cmd_fockdist(const io::Config& cfg, const Options& opts) {
    return fock_outputs(cfg, opts, "fockdist");
}

// ---------------------------------------------------------------------------
// sweep

inline sweep::SweepSpec resolve_sweep(const io::Config& cfg, const Options& opts) {
    sweep::SweepSpec spec;
    spec.regime = regime_of(cfg);
    spec.fixed = resolve_params(cfg, spec.regime);
    spec.initial = resolve_initial(cfg);
    spec.solver = resolve_solver(cfg);
    spec.knee.min_side = cfg.integer("knee.min_side", spec.knee.min_side);
    spec.knee.min_improvement = cfg.number("knee.min_improvement", spec.knee.min_improvement);
    const auto axis1 = resolve_axis(cfg, "axis1");
    if (!axis1) throw Error(ErrorKind::ConfigError, "sweep needs axis1.name and axis1.values");
    spec.axis1 = *axis1;
    spec.axis2 = resolve_axis(cfg, "axis2");
    spec.threads = opts.threads;
    return spec;
}

inline json sweep_provenance(const sweep::SweepResult& r, const io::Config& cfg) {
    const auto& s = r.provenance.spec;
    json axes = json::array();
    axes.push_back({{"name", sweep::to_string(s.axis1.name)}, {"count", s.axis1.values.size()}});
    if (s.axis2) axes.push_back({{"name", sweep::to_string(s.axis2->name)}, {"count", s.axis2->values.size()}});
    json config = json::object();
    for (const auto& [k, v] : cfg.entries()) config[k] = v;
    return {{"version", r.provenance.version},
            {"regime", sweep::to_string(s.regime)},
            {"params", params_json(s.fixed)},
            {"axes", axes},
            {"initial_condition", s.initial.name},
            {"solver", knobs_json(s.solver)},
            {"knee", {{"min_side", s.knee.min_side}, {"min_improvement", num(s.knee.min_improvement)}}},
            {"config", config}};
}

inline std::vector<std::string> cmd_sweep(const io::Config& cfg, const Options& opts) {
    if (cfg.string("sweep.mode", "grid") == "fock") return fock_outputs(cfg, opts, cfg.string("output.name", "sweep"));
    const sweep::SweepSpec spec = resolve_sweep(cfg, opts);
    const std::string plot_kind = cfg.string("plot.kind", "auto");
    cfg.allow({"output.name"});
    cfg.check_known();
    if (plot_kind != "auto" && plot_kind != "lines" && plot_kind != "heatmap")
        throw Error(ErrorKind::ConfigError, "plot.kind must be auto, lines or heatmap");

    const sweep::SweepResult result = sweep::run_sweep(spec);
    Output out(cfg, opts, "sweep");

    std::vector<std::string> header{sweep::to_string(spec.axis1.name)};
    if (spec.axis2) header.push_back(sweep::to_string(spec.axis2->name));
    for (const char* h : {"Q", "R", "mean_boson", "amp_active", "amp_inactive", "baseline", "converged", "status", "error"})
        header.push_back(h);
    std::vector<std::vector<json>> rows;
    for (const auto& r : result.rows) {
        std::vector<json> row{num(r.x1)};
        if (spec.axis2) row.push_back(num(r.x2));
        for (double v : {r.Q, r.R, r.mean_boson, r.amp_active, r.amp_inactive, r.baseline}) row.push_back(num(v));
        row.push_back(r.converged);
        row.push_back(r.status);
        row.push_back(r.error);
        rows.push_back(std::move(row));
    }
    emit_table(out, header, rows);

    json critical = json::array();
    for (const auto& c : result.critical_points)
        critical.push_back({{"kind", c.kind}, {"slice", num(c.slice)}, {"value", num(c.value)},
                            {"confidence", num(c.confidence)}, {"note", c.note}});
    out.write_json("_meta.json", {{"critical_points", critical}, {"provenance", sweep_provenance(result, cfg)}});

    const std::size_t n1 = spec.axis1.values.size();
    const std::size_t n2 = spec.axis2 ? spec.axis2->values.size() : 1;
    const bool lines = plot_kind == "lines" || (plot_kind == "auto" && n2 <= 8);
    const std::string q_label = spec.regime == sweep::Regime::Classical ? "Q_c" : "Q_q";
    if (lines) {
        std::vector<io::svg::Series> series;
        for (std::size_t j = 0; j < n2; ++j) {
            io::svg::Series s;
            s.label = spec.axis2 ? std::string(sweep::to_string(spec.axis2->name)) + "=" + io::fmt(spec.axis2->values[j])
                                 : q_label;
            for (std::size_t i = 0; i < n1; ++i) {
                s.x.push_back(result.rows[j * n1 + i].x1);
                s.y.push_back(result.rows[j * n1 + i].Q);
            }
            for (const auto& c : result.critical_points) {
                if (c.kind != "knee" || !c.value) continue;
                if (spec.axis2 && !(c.slice == spec.axis2->values[j])) continue;
                for (std::size_t i = 0; i < n1; ++i)
                    if (s.x[i] == *c.value) s.stars.push_back(i);
            }
            series.push_back(std::move(s));
        }
        out.plot(".svg", io::svg::line_chart(series, {q_label + " vs " + sweep::to_string(spec.axis1.name),
                                                      sweep::to_string(spec.axis1.name), q_label}));
    } else {
        std::vector<double> z;
        for (const auto& r : result.rows) z.push_back(r.Q);
        out.plot(".svg", io::svg::heat_map(spec.axis1.values, spec.axis2->values, z,
                                           {q_label, sweep::to_string(spec.axis1.name), sweep::to_string(spec.axis2->name)},
                                           q_label));
    }
    return out.written();
}

// ---------------------------------------------------------------------------
// threshold

inline json stability_json(const SystemParams& params) {
    const auto rep = stability::analyze(params);
    json eig = json::array();
    for (const auto& z : rep.eigenvalues) eig.push_back(complex_json(z));
    return {{"params", params_json(params)},
            {"coefficients", {{"c0", num(rep.coefficients.c0)}, {"c1", num(rep.coefficients.c1)},
                              {"c2", num(rep.coefficients.c2)}}},
            {"eigenvalues", eig},
            {"max_real_part", num(rep.max_real_part)},
            {"stable", rep.stable},
            {"marginal", rep.marginal},
            {"routh_hurwitz_stable", rep.routh_hurwitz_stable}};
}

inline std::vector<std::string> cmd_threshold(const io::Config& cfg, const Options& opts) {
    const SystemParams base = resolve_params(cfg, sweep::Regime::Classical);
    cfg.allow({"regime"});
    const auto axis1 = resolve_axis(cfg, "axis1");
    const auto axis2 = resolve_axis(cfg, "axis2");
    const auto spot_p = cfg.numbers("spot.p");
    const auto spot_g = cfg.numbers("spot.g");
    cfg.allow({"output.name"});
    cfg.check_known();
    if (!axis1) throw Error(ErrorKind::ConfigError, "threshold needs axis1.name and axis1.values");
    if (axis1->name == sweep::AxisName::p || (axis2 && axis2->name == sweep::AxisName::p))
        throw Error(ErrorKind::ConfigError, "threshold axes must be g, J or V");
    if (axis2 && axis2->name == axis1->name) throw Error(ErrorKind::ConfigError, "the two axes must differ");
    if (spot_g && (!spot_p || spot_g->size() != spot_p->size()))
        throw Error(ErrorKind::ConfigError, "spot.g must pair one-to-one with spot.p");

    Output out(cfg, opts, "threshold");
    std::vector<std::string> header{sweep::to_string(axis1->name)};
    if (axis2) header.push_back(sweep::to_string(axis2->name));
    header.insert(header.end(), {"p_cmin", "error"});

    std::vector<std::vector<json>> rows;
    std::vector<double> z;
    std::size_t valid = 0;
    const std::vector<double> outer = axis2 ? axis2->values : std::vector<double>{0.0};
    for (double y : outer) {
        SystemParams slice = base;
        if (axis2) sweep::set_axis(slice, axis2->name, y);
        for (const auto& pt : sweep::threshold_curve(slice, axis1->name, axis1->values)) {
            std::vector<json> row{num(pt.value)};
            if (axis2) row.push_back(num(y));
            row.push_back(num(pt.p_cmin));
            row.push_back(pt.error);
            rows.push_back(std::move(row));
            z.push_back(pt.p_cmin.value_or(std::numeric_limits<double>::quiet_NaN()));
            if (pt.p_cmin) ++valid;
        }
    }
    if (valid == 0) throw Error(ErrorKind::RegimeViolation, "no grid point has a valid p_cmin");
    emit_table(out, header, rows);

    if (spot_p) {
        json spots = json::array();
        for (std::size_t k = 0; k < spot_p->size(); ++k) {
            SystemParams params = base;
            params.p = (*spot_p)[k];
            if (spot_g) params.g = (*spot_g)[k];
            validate_params(params);
            spots.push_back(stability_json(params));
        }
        out.write_json("_spots.json", {{"version", sweep::kVersion}, {"spots", spots}});
    }

    const std::string x = sweep::to_string(axis1->name);
    if (axis2) {
        out.plot(".svg", io::svg::heat_map(axis1->values, axis2->values, z,
                                           {"p_cmin", x, sweep::to_string(axis2->name)}, "p_cmin"));
    } else {
        out.plot(".svg", io::svg::line_chart({{"p_cmin", axis1->values, z, {}}}, {"p_cmin vs " + x, x, "p_cmin"}));
    }
    return out.written();
}

// ---------------------------------------------------------------------------
// validate

/// Parses and resolves a config without running anything.
inline std::vector<std::string> cmd_validate(const io::Config& cfg, const Options& opts) {
    const sweep::Regime regime = regime_of(cfg);
    const SystemParams params = resolve_params(cfg, regime);
    const auto validated = validate_params(params);
    const auto ic = resolve_initial(cfg);
    const auto knobs = resolve_solver(cfg);
    const auto axis1 = resolve_axis(cfg, "axis1");
    const auto axis2 = resolve_axis(cfg, "axis2");
    for (const auto& axis : {axis1, axis2})
        if (axis) sweep::detail::validate_axis(*axis, params.N);
    cfg.allow({"trajectory.t_max", "trajectory.dt", "trajectory.stride", "trajectory.omega", "knee.min_side",
               "knee.min_improvement", "spot.p", "spot.g", "fock.p", "fock.g", "sweep.mode", "plot.kind"});
    cfg.allow({"output.name"});
    cfg.check_known();

    Output out(cfg, opts, "validate");
    json doc = {{"version", sweep::kVersion},
                {"regime", sweep::to_string(regime)},
                {"params", params_json(params)},
                {"classical_capable", validated.classical_capable},
                {"initial_condition", ic.name},
                {"solver", knobs_json(knobs)}};
    out.write_json(".json", doc);
    return out.written();
}

}  // namespace agingsim::app
