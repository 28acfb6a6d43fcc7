#include "rldp/config.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace rldp {
namespace {

using nlohmann::json;

long parse_time(const std::string& key) {
  std::size_t used = 0;
  long s = 0;
  try {
    s = std::stol(key, &used);
  } catch (const std::exception&) {
    throw ConfigError("waiting time key '" + key + "' is not an integer");
  }
  if (used != key.size()) throw ConfigError("waiting time key '" + key + "' is not an integer");
  return s;
}

double number(const json& j, const std::string& what) {
  if (!j.is_number()) throw ConfigError(what + " must be a number");
  return j.get<double>();
}

const json& field(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError(where + " is missing field '" + key + "'");
  return *it;
}

WaitingDistribution parse_waiting(const json& j) {
  if (!j.is_object()) throw ConfigError("'waiting' must be an object");
  WaitingDistribution w;
  const auto& head = field(j, "head", "waiting");
  if (!head.is_object()) throw ConfigError("waiting.head must be an object");
  for (const auto& [key, value] : head.items())
    w.head[parse_time(key)] = number(value, "waiting.head[" + key + "]");

  if (auto it = j.find("tail"); it != j.end() && !it->is_null()) {
    const auto& t = *it;
    const auto type = field(t, "type", "waiting.tail").get<std::string>();
    if (type != "geometric") throw ConfigError("unsupported tail type '" + type + "'");
    w.tail = GeometricTail{number(field(t, "rho", "waiting.tail"), "waiting.tail.rho"),
                           number(field(t, "c", "waiting.tail"), "waiting.tail.c")};
  }
  if (auto it = j.find("p_infinity"); it != j.end())
    w.p_infinity = number(*it, "waiting.p_infinity");
  return w;
}

Potential parse_potential(const json& j) {
  Potential v;
  if (j.is_null()) return v;
  if (!j.is_object()) throw ConfigError("'potential' must be an object");
  if (auto it = j.find("head"); it != j.end()) {
    if (!it->is_object()) throw ConfigError("potential.head must be an object");
    for (const auto& [key, value] : it->items())
      v.head[parse_time(key)] = number(value, "potential.head[" + key + "]");
  }
  if (auto it = j.find("tail_affine"); it != j.end() && !it->is_null()) {
    if (!it->is_array() || it->size() != 2)
      throw ConfigError("potential.tail_affine must be [gamma, delta]");
    v.tail_affine = {number((*it)[0], "gamma"), number((*it)[1], "delta")};
  }
  return v;
}

RewardMap parse_reward(const json& j) {
  if (!j.is_object()) throw ConfigError("'reward' must be an object");
  RewardMap r;
  r.dim = field(j, "dim", "reward").get<int>();
  const auto& head = field(j, "head", "reward");
  if (!head.is_object()) throw ConfigError("reward.head must be an object");
  for (const auto& [key, value] : head.items()) {
    std::vector<double> f;
    if (value.is_number()) {
      f.push_back(value.get<double>());
    } else if (value.is_array()) {
      for (const auto& x : value) f.push_back(number(x, "reward.head[" + key + "]"));
    } else {
      throw ConfigError("reward.head[" + key + "] must be a number or array");
    }
    r.head[parse_time(key)] = std::move(f);
  }
  if (auto it = j.find("tail_affine"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) throw ConfigError("reward.tail_affine must be an array of pairs");
    std::vector<std::pair<double, double>> pairs;
    for (const auto& p : *it) {
      if (!p.is_array() || p.size() != 2)
        throw ConfigError("reward.tail_affine entries must be [alpha, beta]");
      pairs.emplace_back(number(p[0], "alpha"), number(p[1], "beta"));
    }
    r.tail_affine = std::move(pairs);
  }
  if (auto it = j.find("noise"); it != j.end() && !it->is_null()) {
    if (it->is_string()) {
      if (it->get<std::string>() != "none")
        throw ConfigError("reward.noise must be null, \"none\" or a cauchy object");
    } else {
      const auto type = field(*it, "type", "reward.noise").get<std::string>();
      if (type != "cauchy") throw ConfigError("unsupported noise type '" + type + "'");
      r.noise = CauchyNoise{field(*it, "coordinate", "reward.noise").get<int>()};
    }
  }
  return r;
}

}  // namespace

ModelSpec parse_model(std::string_view json_text, std::string name) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("model document must be a JSON object");

  ModelSpec spec;
  try {
    spec.name = doc.value("name", name);
    spec.waiting = parse_waiting(field(doc, "waiting", "model"));
    spec.potential = parse_potential(doc.value("potential", json()));
    spec.reward = parse_reward(field(doc, "reward", "model"));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad model document: ") + e.what());
  }
  return spec;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

ModelSpec load_model_spec(const std::filesystem::path& path) {
  return parse_model(read_file(path), path.stem().string());
}

RenewalModel load_model(const std::filesystem::path& path) {
  return RenewalModel(load_model_spec(path));
}

}  // namespace rldp
