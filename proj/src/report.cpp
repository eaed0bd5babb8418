#include "lab/report.hpp"

#include <atomic>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include "lab/errors.hpp"
#include "lab/rational.hpp"

namespace lab {

namespace {

std::map<std::string, std::string> config_kv(const RunConfig& c) {
    std::map<std::string, std::string> kv;
    kv["prec"] = std::to_string(c.prec);
    kv["seed"] = std::to_string(c.seed);
    kv["unity.n_max"] = std::to_string(c.unity_n_max);
    kv["unity.height_cap"] = std::to_string(c.unity_height_cap);
    kv["torsion.lambdas"] = c.torsion_lambdas;
    kv["torsion.n_max"] = std::to_string(c.torsion_n_max);
    kv["lemmas.samples"] = std::to_string(c.lemma_samples);
    kv["covering.function"] = c.covering_function;
    kv["covering.delta"] = std::to_string(c.covering_delta);
    kv["covering.T"] = std::to_string(c.covering_T);
    kv["covering.lo"] = c.covering_lo;
    kv["covering.hi"] = c.covering_hi;
    kv["const.c1"] = format_double(c.c1);
    kv["const.c2"] = format_double(c.c2);
    kv["const.c3"] = format_double(c.c3);
    kv["const.delta1"] = format_double(c.delta1);
    kv["const.delta2"] = format_double(c.delta2);
    kv["const.delta3"] = format_double(c.delta3);
    kv["const.gamma1"] = format_double(c.gamma1);
    kv["const.gamma2"] = format_double(c.gamma2);
    kv["const.gamma3"] = format_double(c.gamma3);
    kv["bounds.d_max"] = std::to_string(c.bounds_d_max);
    return kv;
}

}  // namespace

void RunConfig::set_key(const std::string& key, const std::string& value) {
    if (key == "prec") prec = std::stol(value);
    else if (key == "seed") seed = std::stoul(value);
    else if (key == "out") out_dir = value;
    else if (key == "workers") workers = std::stoi(value);
    else if (key == "unity.n_max") unity_n_max = std::stol(value);
    else if (key == "unity.height_cap") unity_height_cap = std::stol(value);
    else if (key == "torsion.lambdas") torsion_lambdas = value;
    else if (key == "torsion.n_max") torsion_n_max = std::stol(value);
    else if (key == "lemmas.samples") lemma_samples = std::stoi(value);
    else if (key == "covering.function") covering_function = value;
    else if (key == "covering.delta") covering_delta = std::stol(value);
    else if (key == "covering.T") covering_T = std::stol(value);
    else if (key == "covering.lo") covering_lo = value;
    else if (key == "covering.hi") covering_hi = value;
    else if (key == "const.c1") c1 = std::stod(value);
    else if (key == "const.c2") c2 = std::stod(value);
    else if (key == "const.c3") c3 = std::stod(value);
    else if (key == "const.delta1") delta1 = std::stod(value);
    else if (key == "const.delta2") delta2 = std::stod(value);
    else if (key == "const.delta3") delta3 = std::stod(value);
    else if (key == "const.gamma1") gamma1 = std::stod(value);
    else if (key == "const.gamma2") gamma2 = std::stod(value);
    else if (key == "const.gamma3") gamma3 = std::stod(value);
    else if (key == "bounds.d_max") bounds_d_max = std::stol(value);
    else throw domain_error("unknown configuration key: " + key);
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw domain_error("cannot open config file: " + path);
    RunConfig cfg;
    std::string line;
    while (std::getline(in, line)) {
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        size_t eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            size_t a = s.find_first_not_of(" \t\r");
            size_t b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (!key.empty()) cfg.set_key(key, value);
    }
    return cfg;
}

std::string RunConfig::canonical() const {
    std::ostringstream os;
    for (const auto& [k, v] : config_kv(*this)) os << k << " = " << v << "\n";
    return os.str();
}

std::uint64_t RunConfig::hash() const {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : canonical()) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvBuilder::CsvBuilder(const RunConfig& cfg, const std::vector<std::string>& columns)
    : ncols_(columns.size()) {
    char head[128];
    std::snprintf(head, sizeof head, "# config_hash=%016" PRIx64 " prec=%ld version=%s\n",
                  cfg.hash(), cfg.prec, kVersion);
    body_ = head;
    for (size_t i = 0; i < columns.size(); ++i) {
        body_ += columns[i];
        body_ += (i + 1 == columns.size()) ? "\n" : ",";
    }
}

void CsvBuilder::row(const std::vector<std::string>& fields) {
    if (fields.size() != ncols_) throw error("CsvBuilder: column count mismatch");
    for (size_t i = 0; i < fields.size(); ++i) {
        body_ += fields[i];
        body_ += (i + 1 == fields.size()) ? "\n" : ",";
    }
}

std::string report_header_json(const RunConfig& cfg) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, cfg.hash());
    std::ostringstream os;
    os << "{\"config_hash\":\"" << buf << "\",\"prec\":" << cfg.prec << ",\"version\":\""
       << kVersion << "\"}";
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw error("cannot write " + path);
    out << content;
}

void ensure_dir(const std::string& path) {
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec) throw error("cannot create directory " + path);
}

std::vector<mpq_class> parse_rational_list(const std::string& s) {
    std::vector<mpq_class> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, ';')) {
        if (cur.empty()) continue;
        out.push_back(parse_rational(cur));
    }
    return out;
}

void parallel_for(int workers, size_t count, const std::function<void(size_t)>& fn) {
    if (workers <= 1 || count <= 1) {
        for (size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    int k = std::min<int>(workers, static_cast<int>(count));
    std::vector<std::exception_ptr> errors(k);
    for (int t = 0; t < k; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace lab
