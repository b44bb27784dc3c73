#include "support.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>

namespace cli {

void check(gamble_status s, const std::string& context) {
  if (s == GAMBLE_OK) return;
  const std::string msg = context + ": " + gamble_last_error();
  switch (s) {
    case GAMBLE_ERR_PARAMETER:
      throw Failure(kUsage, msg);
    case GAMBLE_ERR_VALIDATION:
      throw Failure(kFailed, msg);
    default:
      throw Failure(kNumerical, msg);
  }
}

gamble_spec ContestArgs::spec(double k) const {
  gamble_spec s = gamble_spec_default();
  check(gamble_parse_mode(mode.c_str(), &s.mode), "--mode");
  s.n = n;
  s.x0 = x0;
  s.K = k;
  if (K2 >= 0.0) {
    s.K2 = K2;
    s.has_K2 = 1;
  }
  return s;
}

nlohmann::json ContestArgs::to_json() const {
  nlohmann::json j{{"mode", mode}, {"n", n}, {"x0", x0}, {"K", K}};
  j["K2"] = K2 >= 0.0 ? nlohmann::json(K2) : nlohmann::json(nullptr);
  return j;
}

EquilibriumPtr solve(const gamble_spec& spec) {
  gamble_equilibrium* raw = nullptr;
  check(gamble_solve(&spec, &raw), "solve");
  return EquilibriumPtr(raw);
}

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string default_out_dir() {
  const char* env = std::getenv("GAMBLE_OUT_DIR");
  return env && *env ? env : ".";
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Failure(kNumerical, "cannot write " + path.string());
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  write_text(path, j.dump(2) + "\n");
}

Manifest::Manifest(std::string command, nlohmann::json parameters)
    : command_(std::move(command)),
      parameters_(std::move(parameters)),
      start_(std::chrono::steady_clock::now()) {}

void Manifest::add_output(const std::filesystem::path& path) {
  outputs_.push_back(path.string());
}

void Manifest::write(const std::filesystem::path& path) const {
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start_)
                          .count();
  write_json(path, {{"command", command_},
                    {"version", gamble_version()},
                    {"parameters", parameters_},
                    {"seed", seed_},
                    {"outputs", outputs_},
                    {"wall_clock_seconds", secs}});
}

}  // namespace cli
