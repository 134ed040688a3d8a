// SPDX-License-Identifier: Apache-2.0
//
// idschan: mmWave channel toolkit for indoor dense spaces
// Copyright (C) 2026 The idschan authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "idschan/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "idschan/errors.hpp"
#include "idschan/extract.hpp"
#include "idschan/genchan.hpp"
#include "idschan/linksim.hpp"
#include "idschan/parallel.hpp"
#include "idschan/params.hpp"
#include "idschan/pathdata.hpp"
#include "idschan/scene_config.hpp"
#include "idschan/tracer.hpp"

namespace idschan::cli {

namespace {

namespace fs = std::filesystem;

void require_input(const std::optional<fs::path>& p, const char* flag) {
    if (!p) throw ValidationError(fmt::format("missing {}", flag));
    if (!fs::is_regular_file(*p)) throw IoError(fmt::format("input '{}' does not exist", p->string()));
}

// Output location must be creatable before any work starts.
fs::path require_output(const std::optional<fs::path>& p, const char* flag) {
    if (!p) throw ValidationError(fmt::format("missing {}", flag));
    const auto parent = p->has_parent_path() ? p->parent_path() : fs::path(".");
    if (!fs::is_directory(parent))
        throw IoError(fmt::format("output directory '{}' does not exist", parent.string()));
    if (fs::is_directory(*p)) throw IoError(fmt::format("output '{}' is a directory", p->string()));
    return *p;
}

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + p.string() + "' for writing");
    f << text;
    if (!f) throw IoError("write failed for '" + p.string() + "'");
}

Condition parse_condition(const std::string& s) {
    if (s == "LOS") return Condition::LOS;
    if (s == "NLOS") return Condition::NLOS;
    throw ValidationError("unknown condition '" + s + "' (expected LOS or NLOS)");
}

ChannelParamSet require_param_set(const std::string& name) {
    auto p = find_param_set(name);
    if (!p) throw ValidationError("unknown preset '" + name + "'");
    return *p;
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ValidationError(fmt::format("override {}: '{}' is not a number", key, v));
    }
}

// Pulls the allowed overrides out of the config; unknown keys are rejected.
std::map<std::string, double> numeric_overrides(const RunConfig& cfg, std::initializer_list<const char*> allowed) {
    std::map<std::string, double> out;
    for (const auto& [k, v] : cfg.overrides) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || k == a;
        if (!ok) throw ValidationError(fmt::format("override '{}' is not supported by '{}'", k, cfg.subcommand));
        out[k] = to_double(k, v);
    }
    return out;
}

} // namespace

std::vector<double> parse_grid(const std::string& spec) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string tok; std::getline(ss, tok, ':');) parts.push_back(tok);
    const auto num = [&](const std::string& s) {
        try {
            std::size_t used = 0;
            const double v = std::stod(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw ValidationError("bad Eb/N0 grid '" + spec + "'");
        }
    };
    if (parts.size() == 1) return {num(parts[0])};
    if (parts.size() != 3) throw ValidationError("Eb/N0 grid must be start:step:stop, got '" + spec + "'");
    const double start = num(parts[0]);
    const double step = num(parts[1]);
    const double stop = num(parts[2]);
    if (!(step > 0.0) || stop < start) throw ValidationError("Eb/N0 grid needs step > 0 and stop >= start");
    std::vector<double> grid;
    for (int i = 0;; ++i) {
        const double v = start + i * step;
        if (v > stop + 1e-9 * std::max(1.0, std::abs(stop))) break;
        grid.push_back(v);
    }
    return grid;
}

void cmd_trace(const RunConfig& cfg, std::ostream& log) {
    const auto out = require_output(cfg.out, "--out");
    const auto ov = numeric_overrides(cfg, {"max_reflections", "sensitivity_dbm", "tx_power_dbm"});

    LinkBudget budget;
    Scene scene;
    if (cfg.scene) {
        require_input(cfg.scene, "--scene");
        auto spec = load_scene_config(*cfg.scene);
        scene = std::move(spec.scene);
        if (spec.sensitivity_dbm) budget.sensitivity_dbm = *spec.sensitivity_dbm;
    } else {
        const auto name = cfg.preset.value_or("BL");
        const auto preset = preset_from_string(name);
        if (!preset) throw ValidationError("unknown scenario preset '" + name + "'");
        scene = build_scenario(*preset);
    }
    if (ov.count("max_reflections")) scene.max_reflections = static_cast<int>(ov.at("max_reflections"));
    if (ov.count("sensitivity_dbm")) budget.sensitivity_dbm = ov.at("sensitivity_dbm");
    if (ov.count("tx_power_dbm")) budget.tx_power_dbm = ov.at("tx_power_dbm");
    validate(scene);

    const auto ds = trace_scenario(scene, budget, cfg.threads);
    save_dataset(ds, out);
    log << fmt::format("traced {} receivers for scenario {} -> {}\n", ds.records.size(), ds.scenario_name, out.string());
}

void cmd_extract(const RunConfig& cfg, std::ostream& log) {
    require_input(cfg.in, "--in");
    const auto prefix = require_output(cfg.out, "--out");
    const auto ov = numeric_overrides(cfg, {"kf_strongest"});
    SummarizeOptions opts;
    opts.threads = cfg.threads;
    if (ov.count("kf_strongest") && ov.at("kf_strongest") != 0.0) opts.kf_reference = KfReference::StrongestPath;

    const auto ds = load_dataset(*cfg.in);
    const auto summary = summarize(ds, opts);
    const std::vector<ChannelParamSet> sets{summary.params};
    const std::vector<std::pair<std::string, ConditionRatios>> ratios{{ds.scenario_name, summary.ratios}};
    const auto base = prefix.string();
    write_text(base + ".params.csv", param_table_csv(sets));
    write_text(base + ".ratios.csv", ratios_csv(ratios));
    write_text(base + ".residuals.csv", residuals_csv(summary.residuals));
    log << fmt::format("extracted {} records ({} LOS, {} NLOS, {} DS, {} outage) -> {}.*.csv\n", summary.ratios.total,
                       summary.ratios.count[0], summary.ratios.count[1], summary.ratios.count[2],
                       summary.ratios.count[3], base);
}

void cmd_gen(const RunConfig& cfg, std::ostream& log) {
    const auto out = require_output(cfg.out, "--out");
    const auto params = require_param_set(cfg.preset.value_or("BL"));
    const Condition cond = parse_condition(cfg.condition);
    auto ov = numeric_overrides(cfg, {"n", "taps", "dist_min", "dist_max"});
    const auto count = static_cast<std::size_t>(ov.count("n") ? ov.at("n") : 2400.0);
    const int taps = static_cast<int>(ov.count("taps") ? ov.at("taps") : kDefaultTaps);
    const double dmin = ov.count("dist_min") ? ov.at("dist_min") : 1.0;
    const double dmax = ov.count("dist_max") ? ov.at("dist_max") : 13.5;
    if (!(dmin > 0.0) || dmax < dmin) throw ValidationError("gen: need 0 < dist_min <= dist_max");
    if (taps < 2) throw ValidationError("gen: taps must be >= 2");
    const auto& column = params.at(cond);
    if (!column) throw ValidationError(fmt::format("preset '{}' has no {} column", params.name, cfg.condition));

    ScenarioDataset ds;
    ds.scenario_name = fmt::format("{}-{}-gen", params.name, cfg.condition);
    ds.provenance = Provenance::Synthetic;
    ds.records.resize(count);
    parallel_for(count, cfg.threads, [&](std::size_t i) {
        const std::uint64_t seed = mix_seed(cfg.seed, i);
        const auto real = draw_realization(params, cond, taps, seed);
        std::mt19937_64 place(mix_seed(seed, 0xD15Cull));
        RealizationRecordOptions opts;
        opts.distance_m = std::uniform_real_distribution<double>(dmin, dmax)(place);
        opts.tx_position_m = ds.tx_position_m;
        opts.effective_tx_dbm = ds.link_budget.effective_tx_dbm();
        ds.records[i] = realization_to_record(real, *column, static_cast<int>(i), opts);
    });
    finalize_records(ds);
    save_dataset(ds, out);
    log << fmt::format("generated {} {} realizations from {} -> {}\n", count, cfg.condition, params.name, out.string());
}

void cmd_rssi(const RunConfig& cfg, std::ostream& log) {
    require_input(cfg.in, "--in");
    const auto out = require_output(cfg.out, "--out");
    const auto ds = load_dataset(*cfg.in);
    const auto entries = rssi_map(ds);
    write_text(out, rssi_csv(entries));
    log << fmt::format("wrote RSSI for {} receivers -> {}\n", entries.size(), out.string());
}

void cmd_ber(const RunConfig& cfg, std::ostream& log) {
    const auto out = require_output(cfg.out, "--out");
    const Condition cond = parse_condition(cfg.condition);
    const auto grid = parse_grid(cfg.ebn0);
    if (cfg.bits == 0) throw ValidationError("--bits must be >= 1");
    const auto ov = numeric_overrides(cfg, {"fade_block", "target_ber"});
    std::vector<ChannelParamSet> sets;
    for (const auto& name : cfg.presets) {
        auto p = require_param_set(name);
        if (!p.at(cond)) throw ValidationError(fmt::format("preset '{}' has no {} column", name, cfg.condition));
        sets.push_back(std::move(p));
    }
    if (sets.empty()) throw ValidationError("--presets is empty");

    BerOptions opts;
    opts.threads = cfg.threads;
    if (ov.count("fade_block")) opts.bits_per_fade = static_cast<std::uint64_t>(ov.at("fade_block"));
    if (opts.bits_per_fade == 0) throw ValidationError("fade_block must be >= 1");
    const double target = ov.count("target_ber") ? ov.at("target_ber") : 1e-3;

    const auto sweep = ber_sweep(sets, cond, grid, cfg.bits, cfg.seed, opts, target);
    write_text(out, ber_csv(sweep));
    for (const auto& g : sweep.gaps)
        log << fmt::format("gap,{},{},{},{}\n", g.first, g.second, target,
                           g.gap_db ? fmt::format("{:.3f}", *g.gap_db) : std::string("unavailable"));
}

void cmd_presets(const RunConfig& cfg, std::ostream& log) {
    const auto text = param_table_csv(builtin_param_sets());
    if (cfg.out) write_text(require_output(cfg.out, "--out"), text);
    else log << text;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"mmWave channel toolkit for indoor dense spaces"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::optional<std::uint64_t> seed;
    std::string presets_csv = "BL,3GPP-InO";
    std::vector<std::string> sets;
    std::string in, outp, scene, preset;

    const auto common = [&](CLI::App* sub) {
        sub->add_option("--seed", seed, "RNG seed (falls back to $IDS_CHAN_SEED)");
        sub->add_option("--threads", cfg.threads, "worker cap (0 = all cores)");
        sub->add_option("--set", sets, "key=value override");
    };
    auto* trace = app.add_subcommand("trace", "ray-trace a scenario into a dataset CSV");
    trace->add_option("--preset", preset, "BL|CV|RecV|EmV");
    trace->add_option("--scene", scene, "scene JSON");
    trace->add_option("--out", outp, "dataset CSV")->required();
    common(trace);

    auto* extract = app.add_subcommand("extract", "channel statistics from a dataset");
    extract->add_option("--in", in, "dataset CSV")->required();
    extract->add_option("--out", outp, "output prefix")->required();
    common(extract);

    auto* gen = app.add_subcommand("gen", "draw channel realizations as a dataset CSV");
    gen->add_option("--preset", preset, "parameter set")->required();
    gen->add_option("--cond", cfg.condition, "LOS|NLOS");
    gen->add_option("--out", outp, "dataset CSV")->required();
    common(gen);

    auto* rssi = app.add_subcommand("rssi", "per-receiver RSSI and SNR");
    rssi->add_option("--in", in, "dataset CSV")->required();
    rssi->add_option("--out", outp, "RSSI CSV")->required();
    common(rssi);

    auto* ber = app.add_subcommand("ber", "Monte-Carlo BPSK BER sweep");
    ber->add_option("--presets", presets_csv, "comma-separated parameter sets");
    ber->add_option("--cond", cfg.condition, "LOS|NLOS");
    ber->add_option("--ebn0", cfg.ebn0, "start:step:stop in dB");
    ber->add_option("--bits", cfg.bits, "bits per Eb/N0 point");
    ber->add_option("--out", outp, "BER CSV")->required();
    common(ber);

    auto* presets = app.add_subcommand("presets", "dump built-in parameter tables");
    presets->add_option("--out", outp, "CSV (stdout when omitted)");
    common(presets);

    std::vector<std::string> argv_store{"idschan"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: usage: " << e.what() << '\n';
        return 2;
    }

    try {
        cfg.subcommand = app.get_subcommands().front()->get_name();
        if (!in.empty()) cfg.in = in;
        if (!outp.empty()) cfg.out = outp;
        if (!scene.empty()) cfg.scene = scene;
        if (!preset.empty()) cfg.preset = preset;
        if (!scene.empty() && !preset.empty()) throw ValidationError("--preset and --scene are exclusive");
        {
            std::stringstream ss(presets_csv);
            for (std::string tok; std::getline(ss, tok, ',');)
                if (!tok.empty()) cfg.presets.push_back(tok);
        }
        for (const auto& kv : sets) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos || eq == 0) throw ValidationError("--set expects key=value, got '" + kv + "'");
            cfg.overrides[kv.substr(0, eq)] = kv.substr(eq + 1);
        }
        if (seed) {
            cfg.seed = *seed;
        } else if (const char* env = std::getenv(kSeedEnv); env && *env) {
            try {
                std::size_t used = 0;
                cfg.seed = std::stoull(env, &used);
                if (env[used] != '\0') throw std::invalid_argument(env);
            } catch (const std::exception&) {
                throw ValidationError(fmt::format("{}='{}' is not an unsigned integer", kSeedEnv, env));
            }
        }

        if (cfg.subcommand == "trace") cmd_trace(cfg, out);
        else if (cfg.subcommand == "extract") cmd_extract(cfg, out);
        else if (cfg.subcommand == "gen") cmd_gen(cfg, out);
        else if (cfg.subcommand == "rssi") cmd_rssi(cfg, out);
        else if (cfg.subcommand == "ber") cmd_ber(cfg, out);
        else cmd_presets(cfg, out);
    } catch (const Error& e) {
        err << "error: " << e.kind() << ": " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: internal: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

} // namespace idschan::cli
