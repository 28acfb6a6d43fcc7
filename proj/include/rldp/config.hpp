#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "rldp/model.hpp"

namespace rldp {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses the JSON model document:
///
///   waiting   {head: {s: prob}, tail: {type: "geometric", rho, c} | null, p_infinity}
///   potential {head: {s: v}, tail_affine: [gamma, delta] | null}
///   reward    {dim, head: {s: [..]}, tail_affine: [[alpha, beta], ..] | null,
///              noise: null | "none" | {type: "cauchy", coordinate: j}}
///
/// Throws ConfigError on malformed documents. Semantic checks are left to
/// validate().
ModelSpec parse_model(std::string_view json_text, std::string name = "model");
ModelSpec load_model_spec(const std::filesystem::path& path);

/// Loads and validates; a failed validation is reported as ModelError.
RenewalModel load_model(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);

}  // namespace rldp
