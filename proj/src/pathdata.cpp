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

#include "idschan/pathdata.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "idschan/errors.hpp"

namespace idschan {

namespace {

constexpr std::string_view kHeader =
    "rx_id,rx_x_m,rx_y_m,rx_z_m,power_dbm,delay_ns,aod_az_deg,aod_el_deg,aoa_az_deg,aoa_el_deg,"
    "interactions";
constexpr std::size_t kColumns = 11;

char tag_letter(Interaction t) {
    switch (t) {
    case Interaction::Direct: return 'L';
    case Interaction::Reflect: return 'R';
    case Interaction::Diffract: return 'D';
    case Interaction::DiffuseScatter: return 'S';
    }
    return '?';
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            return out;
        }
        out.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
}

std::string fmt_double(double v) {
    if (std::isinf(v)) return v > 0 ? "INF" : "-INF";
    return fmt::format("{}", v);
}

std::optional<double> parse_double(std::string_view s) {
    if (s == "-INF" || s == "-inf" || s == "-Inf") return -std::numeric_limits<double>::infinity();
    if (s == "INF" || s == "inf" || s == "Inf") return std::numeric_limits<double>::infinity();
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

std::optional<int> parse_int(std::string_view s) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

nlohmann::json budget_to_json(const LinkBudget& b) {
    return {{"tx_power_dbm", b.tx_power_dbm},       {"gain_tx_dbi", b.gain_tx_dbi},
            {"gain_rx_dbi", b.gain_rx_dbi},         {"noise_figure_db", b.noise_figure_db},
            {"bandwidth_hz", b.bandwidth_hz},       {"carrier_hz", b.carrier_hz},
            {"line_loss_db", b.line_loss_db},       {"sensitivity_dbm", b.sensitivity_dbm}};
}

LinkBudget budget_from_json(const nlohmann::json& j) {
    LinkBudget b;
    b.tx_power_dbm = j.value("tx_power_dbm", b.tx_power_dbm);
    b.gain_tx_dbi = j.value("gain_tx_dbi", b.gain_tx_dbi);
    b.gain_rx_dbi = j.value("gain_rx_dbi", b.gain_rx_dbi);
    b.noise_figure_db = j.value("noise_figure_db", b.noise_figure_db);
    b.bandwidth_hz = j.value("bandwidth_hz", b.bandwidth_hz);
    b.carrier_hz = j.value("carrier_hz", b.carrier_hz);
    b.line_loss_db = j.value("line_loss_db", b.line_loss_db);
    b.sensitivity_dbm = j.value("sensitivity_dbm", b.sensitivity_dbm);
    return b;
}

} // namespace

void validate(const LinkBudget& budget) {
    if (!(budget.bandwidth_hz > 0.0) || !std::isfinite(budget.bandwidth_hz))
        throw ValidationError("link budget: bandwidth_hz must be positive");
    if (!(budget.carrier_hz > 0.0) || !std::isfinite(budget.carrier_hz))
        throw ValidationError("link budget: carrier_hz must be positive");
}

Condition classify(std::span<const MultipathComponent> paths) noexcept {
    if (paths.empty()) return Condition::Outage;
    bool all_scattered = true;
    for (const auto& p : paths) {
        if (p.is_direct()) return Condition::LOS;
        const bool scattered = std::find(p.interactions.begin(), p.interactions.end(),
                                         Interaction::DiffuseScatter) != p.interactions.end();
        all_scattered = all_scattered && scattered;
    }
    return all_scattered ? Condition::DS : Condition::NLOS;
}

std::string_view to_string(Condition c) noexcept {
    switch (c) {
    case Condition::LOS: return "LOS";
    case Condition::NLOS: return "NLOS";
    case Condition::DS: return "DS";
    case Condition::Outage: return "Outage";
    }
    return "?";
}

std::string_view to_string(Provenance p) noexcept {
    return p == Provenance::Synthetic ? "Synthetic" : "Ingested";
}

std::optional<Condition> condition_from_string(std::string_view s) noexcept {
    if (s == "LOS") return Condition::LOS;
    if (s == "NLOS") return Condition::NLOS;
    if (s == "DS") return Condition::DS;
    if (s == "Outage") return Condition::Outage;
    return std::nullopt;
}

std::string format_interactions(std::span<const Interaction> tags) {
    std::string out;
    for (std::size_t i = 0; i < tags.size(); ++i) {
        if (i) out += '+';
        out += tag_letter(tags[i]);
    }
    return out;
}

std::optional<std::vector<Interaction>> parse_interactions(std::string_view text) {
    std::vector<Interaction> tags;
    if (text.empty()) return tags;
    for (auto tok : split(text, '+')) {
        if (tok == "L") tags.push_back(Interaction::Direct);
        else if (tok == "R") tags.push_back(Interaction::Reflect);
        else if (tok == "D") tags.push_back(Interaction::Diffract);
        else if (tok == "S") tags.push_back(Interaction::DiffuseScatter);
        else return std::nullopt;
    }
    return tags;
}

void validate(const MultipathComponent& p, int rx_id) {
    const auto fail = [rx_id](const std::string& what) {
        throw ValidationError(fmt::format("rx_id {}: {}", rx_id, what));
    };
    if (!std::isfinite(p.power_dbm)) fail("power_dbm must be finite for a path");
    if (!std::isfinite(p.delay_ns) || !(p.delay_ns > 0.0)) fail(fmt::format("delay_ns {} must be > 0", p.delay_ns));
    for (double az : {p.aod_az_deg, p.aoa_az_deg})
        if (!(az > -180.0 && az <= 180.0)) fail(fmt::format("azimuth {} outside (-180, 180]", az));
    for (double el : {p.aod_el_deg, p.aoa_el_deg})
        if (!(el >= -90.0 && el <= 90.0)) fail(fmt::format("elevation {} outside [-90, 90]", el));
    if (p.interactions.empty()) fail("path without interaction tags");
    const bool has_direct = std::find(p.interactions.begin(), p.interactions.end(),
                                      Interaction::Direct) != p.interactions.end();
    if (has_direct && p.interactions.size() != 1) fail("Direct tag must appear alone");
}

void validate(const ScenarioDataset& ds) {
    validate(ds.link_budget);
    if (!ds.tx_position_m.allFinite()) throw ValidationError("tx position must be finite");
    std::unordered_map<int, std::size_t> seen;
    for (const auto& rec : ds.records) {
        if (!seen.emplace(rec.rx_id, 0).second)
            throw ValidationError(fmt::format("rx_id {}: duplicate receiver id", rec.rx_id));
        if (!rec.position_m.allFinite())
            throw ValidationError(fmt::format("rx_id {}: non-finite position", rec.rx_id));
        for (const auto& p : rec.paths) validate(p, rec.rx_id);
    }
}

void finalize_records(ScenarioDataset& ds) {
    for (auto& rec : ds.records) {
        rec.distance_3d_m = (rec.position_m - ds.tx_position_m).norm();
        rec.condition = classify(rec.paths);
    }
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path) {
    auto out = csv_path;
    out.replace_filename(csv_path.stem().string() + ".meta.json");
    return out;
}

std::string dataset_csv(const ScenarioDataset& ds) {
    std::string out(kHeader);
    out += '\n';
    for (const auto& rec : ds.records) {
        const auto prefix = fmt::format("{},{},{},{}", rec.rx_id, fmt_double(rec.position_m.x()),
                                        fmt_double(rec.position_m.y()), fmt_double(rec.position_m.z()));
        if (rec.paths.empty()) {
            out += prefix + ",-INF,,,,,,\n";
            continue;
        }
        for (const auto& p : rec.paths) {
            out += fmt::format("{},{},{},{},{},{},{},{}\n", prefix, fmt_double(p.power_dbm),
                               fmt_double(p.delay_ns), fmt_double(p.aod_az_deg), fmt_double(p.aod_el_deg),
                               fmt_double(p.aoa_az_deg), fmt_double(p.aoa_el_deg),
                               format_interactions(p.interactions));
        }
    }
    return out;
}

std::string dataset_meta_json(const ScenarioDataset& ds) {
    nlohmann::json j;
    j["scenario_name"] = ds.scenario_name;
    j["tx_position_m"] = {ds.tx_position_m.x(), ds.tx_position_m.y(), ds.tx_position_m.z()};
    j["link_budget"] = budget_to_json(ds.link_budget);
    j["provenance"] = std::string(to_string(ds.provenance));
    return j.dump(2) + "\n";
}

void save_dataset(const ScenarioDataset& ds, const std::filesystem::path& csv_path) {
    const auto write = [](const std::filesystem::path& p, const std::string& text) {
        std::ofstream f(p, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("cannot open '" + p.string() + "' for writing");
        f << text;
        if (!f) throw IoError("write failed for '" + p.string() + "'");
    };
    write(csv_path, dataset_csv(ds));
    write(sidecar_path(csv_path), dataset_meta_json(ds));
}

namespace {

ScenarioDataset parse_meta(const std::filesystem::path& meta_path) {
    std::ifstream f(meta_path);
    if (!f) throw IoError("missing dataset sidecar '" + meta_path.string() + "'");
    ScenarioDataset ds;
    try {
        const auto j = nlohmann::json::parse(f);
        ds.scenario_name = j.value("scenario_name", std::string{});
        const auto tx = j.at("tx_position_m").get<std::vector<double>>();
        if (tx.size() != 3) throw ValidationError("sidecar: tx_position_m must have 3 entries");
        ds.tx_position_m = Eigen::Vector3d(tx[0], tx[1], tx[2]);
        if (j.contains("link_budget")) ds.link_budget = budget_from_json(j.at("link_budget"));
        const auto prov = j.value("provenance", std::string("Ingested"));
        if (prov == "Synthetic") ds.provenance = Provenance::Synthetic;
        else if (prov == "Ingested") ds.provenance = Provenance::Ingested;
        else throw ValidationError("sidecar: unknown provenance '" + prov + "'");
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("sidecar '" + meta_path.string() + "': " + e.what());
    }
    return ds;
}

} // namespace

ScenarioDataset load_dataset(const std::filesystem::path& csv_path) {
    std::ifstream f(csv_path);
    if (!f) throw IoError("cannot open dataset '" + csv_path.string() + "'");
    ScenarioDataset ds = parse_meta(sidecar_path(csv_path));

    std::unordered_map<int, std::size_t> index;
    std::vector<bool> outage_row;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(f, line)) {
        ++line_no;
        const auto text = trim(line);
        if (text.empty()) continue;
        if (!header_seen) {
            if (text != kHeader) throw ParseError(line_no, "unexpected header");
            header_seen = true;
            continue;
        }
        const auto cols = split(text, ',');
        if (cols.size() != kColumns)
            throw ParseError(line_no, fmt::format("expected {} columns, found {}", kColumns, cols.size()));

        const auto rx_id = parse_int(cols[0]);
        if (!rx_id) throw ParseError(line_no, "bad rx_id '" + std::string(cols[0]) + "'");
        Eigen::Vector3d pos;
        for (int k = 0; k < 3; ++k) {
            const auto v = parse_double(cols[1 + k]);
            if (!v) throw ParseError(line_no, "bad receiver coordinate '" + std::string(cols[1 + k]) + "'");
            pos[k] = *v;
        }
        const auto power = parse_double(cols[4]);
        if (!power) throw ParseError(line_no, "bad power_dbm '" + std::string(cols[4]) + "'");
        const auto tags = parse_interactions(cols[10]);
        if (!tags) throw ParseError(line_no, "bad interactions '" + std::string(cols[10]) + "'");

        const bool is_outage = tags->empty();
        if (is_outage && !(std::isinf(*power) && *power < 0))
            throw ParseError(line_no, "empty interactions require power_dbm = -INF");

        auto [it, inserted] = index.emplace(*rx_id, ds.records.size());
        if (inserted) {
            RxRecord rec;
            rec.rx_id = *rx_id;
            rec.position_m = pos;
            ds.records.push_back(std::move(rec));
            outage_row.push_back(false);
        }
        auto& rec = ds.records[it->second];
        if (rec.position_m != pos)
            throw ValidationError(fmt::format("rx_id {}: inconsistent receiver position", *rx_id));
        if (is_outage) {
            if (!rec.paths.empty() || outage_row[it->second])
                throw ValidationError(fmt::format("rx_id {}: outage row mixed with other rows", *rx_id));
            outage_row[it->second] = true;
            continue;
        }
        if (outage_row[it->second])
            throw ValidationError(fmt::format("rx_id {}: outage row mixed with path rows", *rx_id));

        MultipathComponent p;
        p.power_dbm = *power;
        double* fields[] = {&p.delay_ns, &p.aod_az_deg, &p.aod_el_deg, &p.aoa_az_deg, &p.aoa_el_deg};
        for (int k = 0; k < 5; ++k) {
            const auto v = parse_double(cols[5 + k]);
            if (!v) throw ParseError(line_no, "bad numeric field '" + std::string(cols[5 + k]) + "'");
            *fields[k] = *v;
        }
        p.interactions = std::move(*tags);
        validate(p, *rx_id);
        rec.paths.push_back(std::move(p));
    }
    if (!header_seen) throw ParseError(line_no + 1, "missing header");

    finalize_records(ds);
    validate(ds);
    return ds;
}

} // namespace idschan
