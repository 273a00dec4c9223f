#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "cntqd/cli.hpp"

namespace cntqd::cli {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTiny = 1e-300;

KeySpec num(std::string key, double def, double lo = -kInf, double hi = kInf,
            std::string unit = "") {
  KeySpec k;
  k.key = std::move(key);
  k.type = KeyType::number;
  k.number_default = def;
  k.min_value = lo;
  k.max_value = hi;
  k.unit = std::move(unit);
  return k;
}

KeySpec integer(std::string key, double def, double lo, double hi) {
  KeySpec k;
  k.key = std::move(key);
  k.type = KeyType::integer;
  k.number_default = def;
  k.min_value = lo;
  k.max_value = hi;
  return k;
}

KeySpec boolean(std::string key, bool def) {
  KeySpec k;
  k.key = std::move(key);
  k.type = KeyType::boolean;
  k.bool_default = def;
  return k;
}

KeySpec text(std::string key, std::string def,
             std::vector<std::string> choices = {}, bool required = false) {
  KeySpec k;
  k.key = std::move(key);
  k.type = KeyType::string;
  k.string_default = std::move(def);
  k.choices = std::move(choices);
  k.required = required;
  return k;
}

void append_dot_keys(std::vector<KeySpec>& keys) {
  keys.push_back(num("delta_so_uev", 400.0, kTiny, kInf, "ueV"));
  keys.push_back(num("delta_kk_uev", 65.0, 0.0, kInf, "ueV"));
  keys.push_back(num("g_s", 2.0, kTiny, kInf));
  keys.push_back(num("mu_orb_uev_per_t", 330.0, kTiny, kInf, "ueV/T"));
  keys.push_back(num("lever_arm_uev_per_v", 1000.0, -kInf, kInf, "ueV/V"));
  keys.push_back(integer("so_sign", -1, -1, 1));
  keys.push_back(integer("zeeman_sign", 1, -1, 1));
}

std::vector<CommandSchema> build_schemas() {
  std::vector<CommandSchema> out;

  {
    CommandSchema s{"spectrum", {}};
    append_dot_keys(s.keys);
    s.keys.push_back(num("b_min_t", -2.0, -kInf, kInf, "T"));
    s.keys.push_back(num("b_max_t", 2.0, -kInf, kInf, "T"));
    s.keys.push_back(integer("b_points", 401, 1, 200001));
    s.keys.push_back(num("gate_v", 0.0, -kInf, kInf, "V"));
    out.push_back(std::move(s));
  }
  {
    CommandSchema s{"gate", {}};
    append_dot_keys(s.keys);
    s.keys.push_back(text("gate_kind", "", {"phase", "rabi"}, true));
    s.keys.push_back(num("kick_b_t", 0.5, -kInf, kInf, "T"));
    s.keys.push_back(num("duration_ns", 1.0, 0.0, kInf, "ns"));
    s.keys.push_back(integer("points", 201, 1, 200001));
    s.keys.push_back(num("b_field_t", 0.0, -kInf, kInf, "T"));
    s.keys.push_back(num("drive_amp_uev", 2.0, 0.0, kInf, "ueV"));
    s.keys.push_back(num("drive_freq_ghz", 0.0, 0.0, kInf, "GHz"));
    s.keys.push_back(num("drive_phase_rad", 0.0, -kInf, kInf, "rad"));
    s.keys.push_back(text("rabi_mode", "rwa", {"rwa", "full"}));
    s.keys.push_back(integer("steps_per_period", 0, 0, 1000000));
    out.push_back(std::move(s));
  }
  {
    CommandSchema s{"two-qubit", {}};
    s.keys.push_back(text("tq_kind", "dipole", {"dipole", "exchange"}));
    s.keys.push_back(num("separation_angstrom", 1000.0, kTiny, kInf, "A"));
    s.keys.push_back(num("j_dd_uev", 0.0, 0.0, kInf, "ueV"));
    s.keys.push_back(num("j_ex_uev", 1.0, -kInf, kInf, "ueV"));
    s.keys.push_back(num("mu_orb_uev_per_t", 330.0, kTiny, kInf, "ueV/T"));
    s.keys.push_back(num("t_max_ns", 0.0, 0.0, kInf, "ns"));
    s.keys.push_back(integer("points", 101, 1, 200001));
    out.push_back(std::move(s));
  }
  {
    CommandSchema s{"memory", {}};
    append_dot_keys(s.keys);
    s.keys.push_back(integer("n_nuclei", 1, 1, 10));
    s.keys.push_back(num("spacing_angstrom", 3.03, kTiny, kInf, "A"));
    s.keys.push_back(num("first_position_angstrom", 3.03, -kInf, kInf, "A"));
    s.keys.push_back(num("electron_position_angstrom", 0.0, -kInf, kInf, "A"));
    s.keys.push_back(num("coupling_scale_uev_a3", 27.818127, 0.0, kInf, "ueV*A^3"));
    s.keys.push_back(num("g_n", 5.5857, kTiny, kInf));
    s.keys.push_back(num("b_field_t", 0.01, -kInf, kInf, "T"));
    s.keys.push_back(integer("valley_sign", -1, -1, 1));
    s.keys.push_back(text("memory_mode", "coherence", {"coherence", "write"}));
    s.keys.push_back(text("electron_init", "down", {"up", "down", "plus"}));
    s.keys.push_back(num("t_max_ns", 10.0, 0.0, kInf, "ns"));
    s.keys.push_back(integer("points", 201, 1, 200001));
    out.push_back(std::move(s));
  }
  {
    CommandSchema s{"trap", {}};
    s.keys.push_back(text("preset", "hydrogen", {"hydrogen", "nitrogen"}));
    s.keys.push_back(text("params_file", ""));
    s.keys.push_back(integer("n_atoms", 8, 1, 64));
    s.keys.push_back(num("seed_jitter_angstrom", 0.05, 0.0, kInf, "A"));
    s.keys.push_back(integer("rng_seed", 0, 0, 9.0e15));
    s.keys.push_back(boolean("finite_length", false));
    s.keys.push_back(num("mass_amu", 0.0, 0.0, kInf, "amu"));
    s.keys.push_back(text("element", ""));
    // zero means "take the preset value"
    s.keys.push_back(num("tube_radius_angstrom", 0.0, 0.0, kInf, "A"));
    s.keys.push_back(num("tube_length_angstrom", 0.0, 0.0, kInf, "A"));
    s.keys.push_back(num("wall_epsilon_mev", 0.0, 0.0, kInf, "meV"));
    s.keys.push_back(num("wall_sigma_angstrom", 0.0, 0.0, kInf, "A"));
    s.keys.push_back(num("surface_density_per_a2", 0.0, 0.0, kInf, "1/A^2"));
    s.keys.push_back(num("atom_epsilon_mev", 0.0, 0.0, kInf, "meV"));
    s.keys.push_back(num("atom_sigma_angstrom", 0.0, 0.0, kInf, "A"));
    s.keys.push_back(integer("quadrature_order", 0, 0, 65536));
    out.push_back(std::move(s));
  }
  return out;
}

std::string range_text(const KeySpec& k) {
  std::ostringstream os;
  os << "[" << k.min_value << ", " << k.max_value << "]";
  return os.str();
}

}  // namespace

const std::vector<CommandSchema>& command_schemas() {
  static const std::vector<CommandSchema> schemas = build_schemas();
  return schemas;
}

Scenario parse_scenario(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("scenario is not well-formed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("scenario must be one JSON object");

  if (!doc.contains("command"))
    throw ValidationError("missing required key 'command'");
  if (!doc["command"].is_string())
    throw ValidationError("key 'command' must be a string");
  const std::string command = doc["command"].get<std::string>();

  const CommandSchema* schema = nullptr;
  for (const CommandSchema& s : command_schemas())
    if (s.command == command) schema = &s;
  if (schema == nullptr)
    throw ValidationError("unknown command '" + command +
                          "' (expected spectrum|gate|two-qubit|memory|trap)");

  Scenario out;
  out.command = command;
  if (doc.contains("out")) {
    if (!doc["out"].is_string())
      throw ValidationError("key 'out' must be a string");
    out.output_path = doc["out"].get<std::string>();
  }

  // reject unknown keys
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (key == "command" || key == "out") continue;
    bool known = false;
    for (const KeySpec& k : schema->keys)
      if (k.key == key) known = true;
    if (!known)
      throw UnknownKey("unknown key '" + key + "' for command '" + command + "'");
  }

  // validate present keys, apply defaults for the rest
  for (const KeySpec& k : schema->keys) {
    if (!doc.contains(k.key)) {
      if (k.required)
        throw ValidationError("missing required key '" + k.key + "'");
      switch (k.type) {
        case KeyType::number:
          out.params[k.key] = k.number_default;
          break;
        case KeyType::integer:
          out.params[k.key] = static_cast<std::int64_t>(k.number_default);
          break;
        case KeyType::boolean:
          out.params[k.key] = k.bool_default;
          break;
        case KeyType::string:
          out.params[k.key] = k.string_default;
          break;
      }
      continue;
    }
    const nlohmann::json& v = doc[k.key];
    switch (k.type) {
      case KeyType::number: {
        if (!v.is_number())
          throw ValidationError("key '" + k.key + "' must be a number" +
                                (k.unit.empty() ? "" : " (" + k.unit + ")"));
        const double x = v.get<double>();
        if (!(x >= k.min_value && x <= k.max_value))
          throw ValidationError("key '" + k.key + "' out of range " +
                                range_text(k));
        out.params[k.key] = x;
        break;
      }
      case KeyType::integer: {
        if (!v.is_number())
          throw ValidationError("key '" + k.key + "' must be an integer");
        const double x = v.get<double>();
        if (std::floor(x) != x)
          throw ValidationError("key '" + k.key + "' must be an integer");
        if (!(x >= k.min_value && x <= k.max_value))
          throw ValidationError("key '" + k.key + "' out of range " +
                                range_text(k));
        out.params[k.key] = static_cast<std::int64_t>(x);
        break;
      }
      case KeyType::boolean: {
        if (!v.is_boolean())
          throw ValidationError("key '" + k.key + "' must be a boolean");
        out.params[k.key] = v.get<bool>();
        break;
      }
      case KeyType::string: {
        if (!v.is_string())
          throw ValidationError("key '" + k.key + "' must be a string");
        const std::string sv = v.get<std::string>();
        if (!k.choices.empty()) {
          bool ok = false;
          for (const std::string& c : k.choices) ok = ok || c == sv;
          if (!ok) {
            std::string expected;
            for (const std::string& c : k.choices)
              expected += (expected.empty() ? "" : "|") + c;
            throw ValidationError("key '" + k.key + "' must be one of " +
                                  expected);
          }
        }
        out.params[k.key] = sv;
        break;
      }
    }
  }
  return out;
}

Scenario parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::uint64_t scenario_hash(const Scenario& s) {
  // FNV-1a over the canonical serialization (nlohmann sorts object keys)
  const std::string text = s.command + "\n" + s.params.dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace cntqd::cli
