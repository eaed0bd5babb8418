#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace lab {

inline constexpr const char* kVersion = "1.0.0";

// Flat configuration: every key is overridable from the command line, and
// identical configurations hash identically (reports embed the hash).
struct RunConfig {
    long prec = 256;
    unsigned long seed = 1;
    std::string out_dir = "reports";
    int workers = 1;

    // unity experiment
    long unity_n_max = 100000;
    long unity_height_cap = 200;

    // torsion experiment
    std::string torsion_lambdas = "2";  // semicolon-separated rationals
    long torsion_n_max = 8;

    // lemma verifiers
    int lemma_samples = 1000;

    // covering runs
    std::string covering_function = "cos2pi";  // or "x2", "x3mx"
    long covering_delta = 3;
    long covering_T = 20;
    std::string covering_lo = "0";
    std::string covering_hi = "1/4";

    // configuration constants for bounds with unspecified constants
    double c1 = 1.0, c2 = 2.0, c3 = 1.0;           // mild/surface shape
    double delta1 = 1.0, delta2 = 1.0, delta3 = 0.5;  // elliptic corollary
    double gamma1 = 1.0, gamma2 = 2.0, gamma3 = 1.0;  // counting corollary

    // bounds tables
    long bounds_d_max = 8;

    void set_key(const std::string& key, const std::string& value);
    static RunConfig from_file(const std::string& path);

    std::string canonical() const;  // sorted "key = value" lines
    std::uint64_t hash() const;     // FNV-1a of canonical()
};

// deterministic CSV assembly: fixed header comment, fixed field formatting
class CsvBuilder {
  public:
    CsvBuilder(const RunConfig& cfg, const std::vector<std::string>& columns);
    void row(const std::vector<std::string>& fields);
    const std::string& str() const { return body_; }

  private:
    std::string body_;
    size_t ncols_;
};

std::string format_double(double v);  // deterministic shortest-roundtrip-ish

// header object all JSON reports embed
std::string report_header_json(const RunConfig& cfg);

void write_file(const std::string& path, const std::string& content);
void ensure_dir(const std::string& path);

std::vector<mpq_class> parse_rational_list(const std::string& semicolon_separated);

// index-addressed parallel loop; results must be written to per-index slots
void parallel_for(int workers, size_t count, const std::function<void(size_t)>& fn);

}  // namespace lab
