#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "gamble/gamble.h"

namespace cli {

enum Exit { kOk = 0, kFailed = 1, kUsage = 2, kNumerical = 3 };

/// Carries the exit code out of a subcommand.
struct Failure : std::runtime_error {
  Failure(int code, const std::string& what)
      : std::runtime_error(what), code(code) {}
  int code;
};

/// Throws Failure with the matching exit code unless s is GAMBLE_OK.
void check(gamble_status s, const std::string& context);

struct EquilibriumDeleter {
  void operator()(gamble_equilibrium* p) const { gamble_equilibrium_free(p); }
};
struct CertificateDeleter {
  void operator()(gamble_certificate* p) const { gamble_certificate_free(p); }
};
struct ReportDeleter {
  void operator()(gamble_report* p) const { gamble_report_free(p); }
};
using EquilibriumPtr = std::unique_ptr<gamble_equilibrium, EquilibriumDeleter>;
using CertificatePtr = std::unique_ptr<gamble_certificate, CertificateDeleter>;
using ReportPtr = std::unique_ptr<gamble_report, ReportDeleter>;

/// Contest flags shared by all subcommands.
struct ContestArgs {
  std::string mode = "none";
  int n = 2;
  double x0 = 1.0;
  std::vector<double> K{0.0};
  double K2 = -1.0;  // negative: K / 2

  [[nodiscard]] gamble_spec spec(double k) const;
  [[nodiscard]] nlohmann::json to_json() const;
};

EquilibriumPtr solve(const gamble_spec& spec);

/// Reads a JSON string out of one of the buffer-filling calls.
template <class F>
nlohmann::json fetch_json(F&& fill, const std::string& context) {
  std::size_t needed = 0;
  check(fill(nullptr, 0, &needed), context);
  std::string buf(needed, '\0');
  check(fill(buf.data(), buf.size(), &needed), context);
  buf.resize(needed - 1);
  return nlohmann::json::parse(buf);
}

/// %g, used for file names.
std::string short_number(double v);

/// Default output directory: $GAMBLE_OUT_DIR or the working directory.
std::string default_out_dir();

void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

/// Written next to every output as <stem>.manifest.json.
class Manifest {
 public:
  Manifest(std::string command, nlohmann::json parameters);
  void add_output(const std::filesystem::path& path);
  void set_seed(std::uint64_t seed) { seed_ = seed; }
  void write(const std::filesystem::path& path) const;

 private:
  std::string command_;
  nlohmann::json parameters_;
  std::vector<std::string> outputs_;
  std::uint64_t seed_ = 0;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace cli
