#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ipl::cli {

// A numerical check did not meet its threshold (exit code 1).
struct ContractFailure : std::runtime_error {
  nlohmann::json report;
  ContractFailure(const std::string& what, nlohmann::json r) : std::runtime_error(what), report(std::move(r)) {}
};

struct Context {
  std::vector<std::string> argv;
  std::uint64_t seed = 0;
  double tol = 0;  // 0 keeps each module's default
  int threads = 0;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  CLI::App* app = nullptr;
};

void register_commands(CLI::App& app, Context& ctx);

}  // namespace ipl::cli
