#include "wetsim/scenario.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "wetsim/units.hpp"

namespace wetsim {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
    throw ValidationError(path + ": " + message);
}

void require_keys(const json& obj, const std::string& path,
                  std::initializer_list<const char*> allowed) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* key : allowed)
            if (item.key() == key) {
                known = true;
                break;
            }
        if (!known) throw ValidationError("unknown key '" + item.key() + "' in " + path);
    }
}

const json& require_field(const json& obj, const std::string& path, const char* key) {
    if (!obj.contains(key)) fail(path, std::string("missing required key '") + key + "'");
    return obj.at(key);
}

double as_number(const json& value, const std::string& path) {
    if (!value.is_number()) fail(path, "expected a number");
    return value.get<double>();
}

double number_field(const json& obj, const std::string& path, const char* key) {
    return as_number(require_field(obj, path, key), path + "." + key);
}

double number_field_or(const json& obj, const std::string& path, const char* key,
                       double fallback) {
    if (!obj.contains(key)) return fallback;
    return as_number(obj.at(key), path + "." + key);
}

std::string string_field_or(const json& obj, const std::string& path, const char* key,
                            const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    const json& value = obj.at(key);
    if (!value.is_string()) fail(path + "." + key, "expected a string");
    return value.get<std::string>();
}

Vec3 parse_vec3(const json& value, const std::string& path) {
    if (!value.is_array() || value.size() != 3) fail(path, "expected an array of 3 numbers");
    return {as_number(value[0], path + "[0]"), as_number(value[1], path + "[1]"),
            as_number(value[2], path + "[2]")};
}

AxisSpan parse_axis(const json& value, const std::string& path) {
    if (value.is_number()) {
        const double v = value.get<double>();
        return {v, v, 0.0};
    }
    if (!value.is_object()) fail(path, "expected a number or {start, stop, step}");
    require_keys(value, path, {"start", "stop", "step"});
    AxisSpan span;
    span.start = number_field(value, path, "start");
    span.stop = number_field(value, path, "stop");
    span.step = number_field_or(value, path, "step", 0.0);
    return span;
}

SurfaceMaterial parse_material(const json& value, const std::string& path) {
    if (!value.is_object()) fail(path, "expected a material object");
    require_keys(value, path, {"relative_permittivity", "conductivity_s_per_m"});
    SurfaceMaterial material;
    material.relative_permittivity = number_field_or(value, path, "relative_permittivity", 1.0);
    material.conductivity_s_per_m = number_field_or(value, path, "conductivity_s_per_m", 0.0);
    return material;
}

constexpr const char* kSurfaceKeys[6] = {"x_min", "x_max", "y_min", "y_max", "z_min", "z_max"};

Room parse_room(const json& value, const std::string& path) {
    if (value.is_string()) {
        if (value.get<std::string>() == "free_space") return Room::free_space();
        fail(path, "expected \"free_space\" or a box object");
    }
    if (!value.is_object()) fail(path, "expected \"free_space\" or a box object");
    require_keys(value, path, {"min", "max", "material", "materials"});
    const Vec3 min = parse_vec3(require_field(value, path, "min"), path + ".min");
    const Vec3 max = parse_vec3(require_field(value, path, "max"), path + ".max");
    if (!(max.x > min.x && max.y > min.y && max.z > min.z))
        fail(path, "box extents must be positive in each axis");
    if (value.contains("material") && value.contains("materials"))
        fail(path, "give either 'material' (all surfaces) or 'materials', not both");

    Room room;
    room.box = Room::Box{min, max};
    if (value.contains("materials")) {
        const json& per_surface = value.at("materials");
        if (!per_surface.is_object()) fail(path + ".materials", "expected an object");
        require_keys(per_surface, path + ".materials",
                     {"x_min", "x_max", "y_min", "y_max", "z_min", "z_max"});
        for (int i = 0; i < 6; ++i) {
            if (!per_surface.contains(kSurfaceKeys[i]))
                fail(path + ".materials", std::string("missing surface '") + kSurfaceKeys[i] + "'");
            room.materials[static_cast<std::size_t>(i)] =
                parse_material(per_surface.at(kSurfaceKeys[i]),
                               path + ".materials." + kSurfaceKeys[i]);
        }
    } else {
        const SurfaceMaterial shared =
            parse_material(require_field(value, path, "material"), path + ".material");
        room.materials.fill(shared);
    }
    return room;
}

Polarization parse_polarization(const json& obj, const std::string& path) {
    const std::string text = string_field_or(obj, path, "polarization", "horizontal");
    if (text == "horizontal") return Polarization::Horizontal;
    if (text == "vertical") return Polarization::Vertical;
    fail(path + ".polarization", "expected \"horizontal\" or \"vertical\"");
}

PatternKind parse_pattern(const json& obj, const std::string& path, PatternKind fallback) {
    const std::string fallback_name =
        fallback == PatternKind::IsotropicWithGain ? "isotropic" : "patch";
    const std::string text = string_field_or(obj, path, "pattern", fallback_name);
    if (text == "isotropic") return PatternKind::IsotropicWithGain;
    if (text == "patch") return PatternKind::PatchCosinePower;
    fail(path + ".pattern", "expected \"isotropic\" or \"patch\"");
}

Antenna parse_antenna_common(const json& obj, const std::string& path, PatternKind fallback) {
    Antenna antenna;
    antenna.gain_dbi = number_field_or(obj, path, "gain_dbi", 0.0);
    antenna.polarization = parse_polarization(obj, path);
    antenna.pattern = parse_pattern(obj, path, fallback);
    antenna.pattern_exponent = number_field_or(obj, path, "pattern_exponent", 2.0);
    if (obj.contains("boresight")) {
        const Vec3 raw = parse_vec3(obj.at("boresight"), path + ".boresight");
        if (norm(raw) == 0.0) fail(path + ".boresight", "must be a nonzero vector");
        antenna.boresight = normalized(raw);
    }
    return antenna;
}

Transmitter parse_transmitter(const json& value, const std::string& path) {
    if (!value.is_object()) fail(path, "expected a transmitter object");
    require_keys(value, path,
                 {"position", "power_dbm", "gain_dbi", "boresight", "polarization", "pattern",
                  "pattern_exponent"});
    Transmitter tx;
    tx.antenna = parse_antenna_common(value, path, PatternKind::PatchCosinePower);
    tx.antenna.position = parse_vec3(require_field(value, path, "position"), path + ".position");
    tx.power_dbm = number_field(value, path, "power_dbm");
    return tx;
}

Antenna parse_receiver(const json& value, const std::string& path) {
    if (!value.is_object()) fail(path, "expected a receiver object");
    require_keys(value, path,
                 {"gain_dbi", "boresight", "polarization", "pattern", "pattern_exponent"});
    return parse_antenna_common(value, path, PatternKind::IsotropicWithGain);
}

GridSpec parse_grid(const json& value, const std::string& path) {
    if (!value.is_object()) fail(path, "expected a grid object");
    require_keys(value, path, {"name", "x", "y", "z"});
    GridSpec grid;
    grid.name = string_field_or(value, path, "name", "");
    if (grid.name.empty()) fail(path, "grid needs a non-empty 'name'");
    grid.x = parse_axis(require_field(value, path, "x"), path + ".x");
    grid.y = parse_axis(require_field(value, path, "y"), path + ".y");
    grid.z = parse_axis(require_field(value, path, "z"), path + ".z");
    return grid;
}

const char* polarization_name(Polarization pol) {
    return pol == Polarization::Horizontal ? "horizontal" : "vertical";
}

const char* pattern_name(PatternKind kind) {
    return kind == PatternKind::IsotropicWithGain ? "isotropic" : "patch";
}

ordered_json axis_to_json(const AxisSpan& span) {
    if (span.start == span.stop && span.step == 0.0) return span.start;
    return ordered_json{{"start", span.start}, {"stop", span.stop}, {"step", span.step}};
}

ordered_json material_to_json(const SurfaceMaterial& material) {
    return ordered_json{{"relative_permittivity", material.relative_permittivity},
                        {"conductivity_s_per_m", material.conductivity_s_per_m}};
}

void antenna_common_to_json(ordered_json& out, const Antenna& antenna) {
    out["gain_dbi"] = antenna.gain_dbi;
    out["boresight"] = {antenna.boresight.x, antenna.boresight.y, antenna.boresight.z};
    out["polarization"] = polarization_name(antenna.polarization);
    out["pattern"] = pattern_name(antenna.pattern);
    out["pattern_exponent"] = antenna.pattern_exponent;
}

}  // namespace

std::vector<SchemeId> default_schemes(std::size_t transmitter_count) {
    std::vector<SchemeId> schemes;
    for (std::size_t i = 0; i < transmitter_count; ++i)
        schemes.push_back({SchemeKind::SP, i});
    schemes.push_back({SchemeKind::MP, 0});
    schemes.push_back({SchemeKind::MPCSD, 0});
    return schemes;
}

Scenario parse_scenario(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& err) {
        throw ValidationError(std::string("scenario parse error: ") + err.what());
    }
    if (!root.is_object()) throw ValidationError("scenario: top level must be an object");
    require_keys(root, "scenario",
                 {"name", "center_frequency_hz", "carrier", "room", "transmitters", "receiver",
                  "load_ohms", "power_cap_dbm", "max_order", "grids", "schemes", "output_dir"});

    Scenario scenario;
    scenario.name = string_field_or(root, "scenario", "name", "");
    scenario.center_frequency_hz = number_field(root, "scenario", "center_frequency_hz");
    scenario.room = parse_room(require_field(root, "scenario", "room"), "room");

    const json& txs = require_field(root, "scenario", "transmitters");
    if (!txs.is_array() || txs.empty())
        throw ValidationError("transmitters: expected a non-empty array");
    for (std::size_t i = 0; i < txs.size(); ++i)
        scenario.transmitters.push_back(
            parse_transmitter(txs[i], "transmitters[" + std::to_string(i) + "]"));

    scenario.receiver = parse_receiver(require_field(root, "scenario", "receiver"), "receiver");
    scenario.load_ohms = number_field_or(root, "scenario", "load_ohms", 50.0);
    if (root.contains("power_cap_dbm")) {
        // `true` enables the conventional regulatory limit; a number sets it
        const json& cap = root.at("power_cap_dbm");
        if (cap.is_boolean()) {
            if (cap.get<bool>()) scenario.power_cap_dbm = 30.0;
        } else {
            scenario.power_cap_dbm = as_number(cap, "power_cap_dbm");
        }
    }

    const json& carrier = require_field(root, "scenario", "carrier");
    if (!carrier.is_object()) throw ValidationError("carrier: expected an object");
    require_keys(carrier, "carrier", {"plan", "offsets_hz"});
    if (carrier.contains("plan") == carrier.contains("offsets_hz"))
        throw ValidationError("carrier: give exactly one of 'plan' or 'offsets_hz'");
    if (carrier.contains("plan")) {
        const json& plan_json = carrier.at("plan");
        if (!plan_json.is_object()) throw ValidationError("carrier.plan: expected an object");
        require_keys(plan_json, "carrier.plan", {"bandwidth_hz", "subcarriers"});
        FrequencyPlan plan;
        plan.center_frequency_hz = scenario.center_frequency_hz;
        plan.bandwidth_hz = number_field(plan_json, "carrier.plan", "bandwidth_hz");
        const json& count = require_field(plan_json, "carrier.plan", "subcarriers");
        if (!count.is_number_unsigned())
            throw ValidationError("carrier.plan.subcarriers: expected a non-negative integer");
        plan.subcarrier_count = count.get<unsigned>();
        try {
            scenario.offsets_hz = carrier_offsets(plan);
        } catch (const std::invalid_argument& err) {
            throw ValidationError(std::string("carrier.plan: ") + err.what());
        }
        scenario.plan = plan;
    } else {
        const json& offsets = carrier.at("offsets_hz");
        if (!offsets.is_array()) throw ValidationError("carrier.offsets_hz: expected an array");
        for (std::size_t i = 0; i < offsets.size(); ++i)
            scenario.offsets_hz.push_back(
                as_number(offsets[i], "carrier.offsets_hz[" + std::to_string(i) + "]"));
    }

    if (root.contains("max_order")) {
        const json& order = root.at("max_order");
        if (!order.is_number_integer())
            throw ValidationError("max_order: expected an integer");
        scenario.max_order = order.get<int>();
    }

    const json& grids = require_field(root, "scenario", "grids");
    if (!grids.is_array() || grids.empty())
        throw ValidationError("grids: expected a non-empty array");
    for (std::size_t i = 0; i < grids.size(); ++i)
        scenario.grids.push_back(parse_grid(grids[i], "grids[" + std::to_string(i) + "]"));

    if (root.contains("schemes")) {
        const json& schemes = root.at("schemes");
        if (!schemes.is_array() || schemes.empty())
            throw ValidationError("schemes: expected a non-empty array");
        for (std::size_t i = 0; i < schemes.size(); ++i) {
            const std::string path = "schemes[" + std::to_string(i) + "]";
            if (!schemes[i].is_string()) fail(path, "expected a scheme name string");
            try {
                scenario.schemes.push_back(parse_scheme_id(schemes[i].get<std::string>()));
            } catch (const std::invalid_argument& err) {
                fail(path, err.what());
            }
        }
    } else {
        scenario.schemes = default_schemes(scenario.transmitters.size());
    }

    scenario.output_dir = string_field_or(root, "scenario", "output_dir", "out");

    if (scenario.offsets_hz.size() == scenario.transmitters.size())
        for (std::size_t i = 0; i < scenario.transmitters.size(); ++i)
            scenario.transmitters[i].carrier_offset_hz = scenario.offsets_hz[i];

    validate_scenario(scenario);
    return scenario;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw ValidationError("cannot open scenario file: " + path);
    std::ostringstream buffer;
    buffer << file.rdbuf();
    return parse_scenario(buffer.str());
}

void validate_scenario(const Scenario& scenario) {
    if (!(scenario.center_frequency_hz > 0.0))
        throw ValidationError("center_frequency_hz: must be > 0");
    if (scenario.transmitters.empty())
        throw ValidationError("transmitters: at least one transmitter required");
    if (scenario.grids.empty()) throw ValidationError("grids: at least one grid required");
    if (!(scenario.load_ohms > 0.0)) throw ValidationError("load_ohms: must be > 0");
    if (scenario.max_order < 0) throw ValidationError("max_order: must be >= 0");

    if (scenario.plan && scenario.plan->subcarrier_count != scenario.transmitters.size())
        throw ValidationError("carrier.plan.subcarriers: must equal the transmitter count");
    if (scenario.offsets_hz.size() != scenario.transmitters.size())
        throw ValidationError("carrier.offsets_hz: need exactly one offset per transmitter");

    if (!scenario.room.is_free_space()) {
        for (std::size_t i = 0; i < 6; ++i) {
            const SurfaceMaterial& material = scenario.room.materials[i];
            const std::string path = std::string("room.materials.") + kSurfaceKeys[i];
            if (material.relative_permittivity < 1.0)
                throw ValidationError(path + ": relative_permittivity must be >= 1");
            if (material.conductivity_s_per_m < 0.0)
                throw ValidationError(path + ": conductivity_s_per_m must be >= 0");
        }
    }

    for (std::size_t i = 0; i < scenario.transmitters.size(); ++i) {
        const Transmitter& tx = scenario.transmitters[i];
        const std::string path = "transmitters[" + std::to_string(i) + "]";
        if (tx.antenna.pattern == PatternKind::PatchCosinePower &&
            !(tx.antenna.pattern_exponent > 0.0))
            throw ValidationError(path + ".pattern_exponent: must be > 0");
        if (scenario.power_cap_dbm && tx.power_dbm > *scenario.power_cap_dbm)
            throw ValidationError(path + ": transmitter '" + std::to_string(i + 1) +
                                  "' exceeds the power cap of " +
                                  std::to_string(*scenario.power_cap_dbm) + " dBm");
        if (!scenario.room.contains(tx.antenna.position))
            throw ValidationError(path + ": transmitter '" + std::to_string(i + 1) +
                                  "' lies outside the room");
    }
    if (scenario.receiver.pattern == PatternKind::PatchCosinePower &&
        !(scenario.receiver.pattern_exponent > 0.0))
        throw ValidationError("receiver.pattern_exponent: must be > 0");

    std::set<std::string> grid_names;
    for (std::size_t i = 0; i < scenario.grids.size(); ++i) {
        const GridSpec& grid = scenario.grids[i];
        const std::string path = "grids[" + std::to_string(i) + "]";
        if (grid.name.empty()) throw ValidationError(path + ": grid needs a non-empty name");
        if (grid.name == "overall")
            throw ValidationError(path + ": grid name 'overall' is reserved for pooled output");
        if (!grid_names.insert(grid.name).second)
            throw ValidationError(path + ": duplicate grid name '" + grid.name + "'");
        try {
            (void)grid_point_count(grid);
        } catch (const std::invalid_argument& err) {
            throw ValidationError(path + ": " + err.what());
        }
        for (double x : {grid.x.start, grid.x.stop})
            for (double y : {grid.y.start, grid.y.stop})
                for (double z : {grid.z.start, grid.z.stop})
                    if (!scenario.room.contains({x, y, z}))
                        throw ValidationError(path + ": grid '" + grid.name +
                                              "' extends outside the room");
    }

    if (scenario.schemes.empty())
        throw ValidationError("schemes: at least one scheme required");
    for (const SchemeId& id : scenario.schemes)
        if (id.kind == SchemeKind::SP && id.tx_index >= scenario.transmitters.size())
            throw ValidationError("schemes: '" + scheme_name(id) +
                                  "' refers to a missing transmitter");
}

std::string serialize_scenario(const Scenario& scenario) {
    ordered_json root;
    root["name"] = scenario.name;
    root["center_frequency_hz"] = scenario.center_frequency_hz;

    ordered_json carrier;
    if (scenario.plan) {
        carrier["plan"] = ordered_json{{"bandwidth_hz", scenario.plan->bandwidth_hz},
                                       {"subcarriers", scenario.plan->subcarrier_count}};
    } else {
        carrier["offsets_hz"] = scenario.offsets_hz;
    }
    root["carrier"] = carrier;

    if (scenario.room.is_free_space()) {
        root["room"] = "free_space";
    } else {
        ordered_json room;
        room["min"] = {scenario.room.box->min.x, scenario.room.box->min.y,
                       scenario.room.box->min.z};
        room["max"] = {scenario.room.box->max.x, scenario.room.box->max.y,
                       scenario.room.box->max.z};
        ordered_json materials;
        for (int i = 0; i < 6; ++i)
            materials[kSurfaceKeys[i]] =
                material_to_json(scenario.room.materials[static_cast<std::size_t>(i)]);
        room["materials"] = materials;
        root["room"] = room;
    }

    ordered_json txs = ordered_json::array();
    for (const Transmitter& tx : scenario.transmitters) {
        ordered_json out;
        out["position"] = {tx.antenna.position.x, tx.antenna.position.y, tx.antenna.position.z};
        out["power_dbm"] = tx.power_dbm;
        antenna_common_to_json(out, tx.antenna);
        txs.push_back(out);
    }
    root["transmitters"] = txs;

    ordered_json receiver;
    antenna_common_to_json(receiver, scenario.receiver);
    root["receiver"] = receiver;

    root["load_ohms"] = scenario.load_ohms;
    if (scenario.power_cap_dbm) root["power_cap_dbm"] = *scenario.power_cap_dbm;
    root["max_order"] = scenario.max_order;

    ordered_json grids = ordered_json::array();
    for (const GridSpec& grid : scenario.grids) {
        ordered_json out;
        out["name"] = grid.name;
        out["x"] = axis_to_json(grid.x);
        out["y"] = axis_to_json(grid.y);
        out["z"] = axis_to_json(grid.z);
        grids.push_back(out);
    }
    root["grids"] = grids;

    ordered_json schemes = ordered_json::array();
    for (const SchemeId& id : scenario.schemes) schemes.push_back(scheme_name(id));
    root["schemes"] = schemes;

    root["output_dir"] = scenario.output_dir;
    return root.dump(2) + "\n";
}

void save_scenario(const Scenario& scenario, const std::string& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write scenario file: " + path);
    file << serialize_scenario(scenario);
}

}  // namespace wetsim
