#include "wetsim/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "wetsim/units.hpp"

namespace wetsim {

namespace {

std::string format(const char* fmt, double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), fmt, value);
    return buffer;
}

std::string dbm3(double watts) { return format("%.3f", watts_to_dbm(watts)); }

std::vector<SchemeId> resolve_schemes(const Scenario& scenario, const RunOptions& options) {
    if (options.schemes.empty()) return scenario.schemes;
    std::vector<SchemeId> selected;
    for (const std::string& name : options.schemes) {
        SchemeId id;
        try {
            id = parse_scheme_id(name);
        } catch (const std::invalid_argument& err) {
            throw ValidationError(std::string("--schemes: ") + err.what());
        }
        if (id.kind == SchemeKind::SP && id.tx_index >= scenario.transmitters.size())
            throw ValidationError("--schemes: '" + name + "' refers to a missing transmitter");
        selected.push_back(id);
    }
    return selected;
}

std::vector<GridSpec> resolve_grids(const Scenario& scenario, const RunOptions& options) {
    if (options.grids.empty()) return scenario.grids;
    std::vector<GridSpec> selected;
    for (const std::string& name : options.grids) {
        const auto it = std::find_if(scenario.grids.begin(), scenario.grids.end(),
                                     [&](const GridSpec& g) { return g.name == name; });
        if (it == scenario.grids.end())
            throw ValidationError("--grids: scenario has no grid named '" + name + "'");
        selected.push_back(*it);
    }
    return selected;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write output file: " + path.string());
    file << content;
    if (!file) throw std::runtime_error("failed writing output file: " + path.string());
}

std::string field_csv(const GridSpec& grid, const std::vector<double>& power_w,
                      const std::string& scheme) {
    std::string out = "x_m,y_m,z_m,power_dBm,scheme\n";
    const std::vector<Vec3> points = grid_points(grid);
    for (std::size_t k = 0; k < points.size(); ++k) {
        out += format("%.4f", points[k].x) + "," + format("%.4f", points[k].y) + "," +
               format("%.4f", points[k].z) + "," + dbm3(power_w[k]) + "," + scheme + "\n";
    }
    return out;
}

void oracle_check_grid(const Scenario& scenario, const FieldGrid& field,
                       const std::string& grid_name, double& max_rel_err) {
    const std::vector<Vec3> points = grid_points(field.spec);
    for (std::size_t k = 0; k < points.size(); ++k) {
        const std::vector<Phasor> aggregates = point_aggregates(scenario, points[k], false);
        const double oracle = time_domain_power(aggregates, scenario.offsets_hz,
                                                scenario.load_ohms, 256, 1);
        const double closed = field.power_w[k];
        const double rel = closed > 0.0 ? std::abs(oracle - closed) / closed : std::abs(oracle);
        max_rel_err = std::max(max_rel_err, rel);
        if (rel > 1e-6)
            throw std::runtime_error("oracle check failed: grid '" + grid_name +
                                     "' point " + std::to_string(k) + " rel err " +
                                     format("%.3e", rel));
    }
}

}  // namespace

std::string run_scenario(const Scenario& scenario_in, const RunOptions& options) {
    Scenario scenario = scenario_in;
    if (options.max_order) {
        if (*options.max_order < 0) throw ValidationError("--max-order: must be >= 0");
        scenario.max_order = *options.max_order;
    }
    if (!(options.p_req_step_db > 0.0)) throw ValidationError("--p-req-step: must be > 0");
    if (options.p_req_max_dbm < options.p_req_min_dbm)
        throw ValidationError("--p-req-max: must be >= --p-req-min");
    validate_scenario(scenario);

    const std::vector<SchemeId> schemes = resolve_schemes(scenario, options);
    const std::vector<GridSpec> grids = resolve_grids(scenario, options);
    const std::filesystem::path out_dir =
        options.out_dir.empty() ? scenario.output_dir : options.out_dir;
    std::error_code dir_err;
    std::filesystem::create_directories(out_dir, dir_err);
    if (dir_err)
        throw std::runtime_error("cannot create output directory '" + out_dir.string() +
                                 "': " + dir_err.message());

    const bool degenerate_offsets = has_duplicate_offsets(scenario.offsets_hz);

    std::ostringstream summary;
    summary << "scenario: " << scenario.name << "\n";
    summary << "center_frequency_hz: " << format("%.10g", scenario.center_frequency_hz) << "\n";
    summary << "transmitters: " << scenario.transmitters.size() << "\n";
    summary << "load_ohms: " << format("%.10g", scenario.load_ohms) << "\n";
    summary << "max_order: " << scenario.max_order << "\n";
    summary << "schemes:";
    for (const SchemeId& id : schemes) summary << " " << scheme_name(id);
    summary << "\n";
    summary << "p_req_dbm: min=" << format("%.3f", options.p_req_min_dbm)
            << " max=" << format("%.3f", options.p_req_max_dbm)
            << " step=" << format("%.3f", options.p_req_step_db) << "\n";
    if (options.seed) summary << "seed: " << *options.seed << "\n";
    if (degenerate_offsets)
        summary << "warning: duplicate carrier offsets; carrier-shift transmitters sharing an "
                   "offset combine coherently\n";

    // sweep everything first; per-grid results in declaration order
    std::vector<std::vector<FieldGrid>> fields(grids.size());
    for (std::size_t g = 0; g < grids.size(); ++g) {
        for (const SchemeId& id : schemes) {
            FieldGrid field = sweep(scenario, id, grids[g], options.threads);
            write_file(out_dir / ("field_" + grids[g].name + "_" + scheme_name(id) + ".csv"),
                       field_csv(grids[g], field.power_w, scheme_name(id)));
            fields[g].push_back(std::move(field));
        }
    }

    // pooled view across every selected grid
    std::vector<FieldGrid> pooled;
    if (grids.size() > 1) {
        for (std::size_t s = 0; s < schemes.size(); ++s) {
            FieldGrid all;
            all.spec.name = "overall";
            for (const std::vector<FieldGrid>& per_grid : fields)
                all.power_w.insert(all.power_w.end(), per_grid[s].power_w.begin(),
                                   per_grid[s].power_w.end());
            pooled.push_back(std::move(all));
        }
    }

    std::string coverage_csv = "p_req_dBm,coverage_fraction,scheme,grid_name\n";
    auto grid_report = [&](const std::string& grid_name, const std::vector<FieldGrid>& per_scheme) {
        summary << "\n[grid " << grid_name << "] points=" << per_scheme.front().power_w.size()
                << "\n";
        std::vector<double> thresholds(schemes.size());
        for (std::size_t s = 0; s < schemes.size(); ++s) {
            thresholds[s] = max_required_power_full_coverage(per_scheme[s]);
            summary << "threshold_dbm " << scheme_name(schemes[s]) << ": "
                    << format("%.3f", thresholds[s]) << "\n";
        }
        for (std::size_t a = 0; a < schemes.size(); ++a) {
            if (schemes[a].kind != SchemeKind::MPCSD) continue;
            for (std::size_t b = 0; b < schemes.size(); ++b) {
                if (schemes[b].kind != SchemeKind::SP) continue;
                summary << "threshold_gap_db mpcsd-" << scheme_name(schemes[b]) << ": "
                        << format("%.3f", thresholds[a] - thresholds[b]) << "\n";
            }
        }

        std::vector<CoverageCurve> curves;
        for (std::size_t s = 0; s < schemes.size(); ++s) {
            curves.push_back(coverage_curve(per_scheme[s], options.p_req_min_dbm,
                                            options.p_req_max_dbm, options.p_req_step_db));
            for (const auto& [p_req, fraction] : curves.back().samples)
                coverage_csv += format("%.3f", p_req) + "," + format("%.6f", fraction) + "," +
                                scheme_name(schemes[s]) + "," + grid_name + "\n";
        }
        for (std::size_t a = 0; a < schemes.size(); ++a) {
            for (std::size_t b = a + 1; b < schemes.size(); ++b) {
                summary << "crossings " << scheme_name(schemes[a]) << "-"
                        << scheme_name(schemes[b]) << ":";
                const auto crossings = crossing_points(curves[a], curves[b]);
                if (crossings.empty()) {
                    summary << " none";
                } else {
                    for (const auto& [p_req, fraction] : crossings)
                        summary << " (" << format("%.3f", p_req) << " dBm, C="
                                << format("%.6f", fraction) << ")";
                }
                summary << "\n";
            }
        }

        const double reference = *std::max_element(thresholds.begin(), thresholds.end());
        summary << "deadspots at p_req=" << format("%.3f", reference) << " dBm:";
        for (std::size_t s = 0; s < schemes.size(); ++s)
            summary << " " << scheme_name(schemes[s]) << "="
                    << deadspot_count(per_scheme[s], reference);
        summary << "\n";
    };

    for (std::size_t g = 0; g < grids.size(); ++g) grid_report(grids[g].name, fields[g]);
    if (!pooled.empty()) grid_report("overall", pooled);

    if (options.oracle_check) {
        const bool has_mpcsd = std::any_of(schemes.begin(), schemes.end(), [](const SchemeId& s) {
            return s.kind == SchemeKind::MPCSD;
        });
        if (has_mpcsd && !degenerate_offsets) {
            double max_rel_err = 0.0;
            std::size_t checked = 0;
            for (std::size_t g = 0; g < grids.size(); ++g) {
                for (std::size_t s = 0; s < schemes.size(); ++s) {
                    if (schemes[s].kind != SchemeKind::MPCSD) continue;
                    oracle_check_grid(scenario, fields[g][s], grids[g].name, max_rel_err);
                    checked += fields[g][s].power_w.size();
                }
            }
            summary << "\noracle_check: mpcsd verified on " << checked
                    << " points, max rel err " << format("%.3e", max_rel_err) << "\n";
        } else {
            summary << "\noracle_check: skipped ("
                    << (has_mpcsd ? "duplicate offsets" : "mpcsd not selected") << ")\n";
        }
    }

    write_file(out_dir / "coverage.csv", coverage_csv);
    const std::string summary_text = summary.str();
    write_file(out_dir / "summary.txt", summary_text);
    return summary_text;
}

}  // namespace wetsim
