#pragma once

// CSV emission with '#'-prefixed header comments carrying the config hash,
// plus the flat key=value config representation the CLI hashes and logs.

#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "mdlab/errors.hpp"
#include "mdlab/util.hpp"

namespace mdlab {

// Flat, ordered key=value map; its canonical string is what gets hashed.
class RunConfig {
  public:
    void set(const std::string& key, const std::string& value) { kv_[key] = value; }
    void set(const std::string& key, double v) {
        std::ostringstream os;
        os << std::setprecision(17) << v;
        kv_[key] = os.str();
    }
    void set(const std::string& key, std::uint64_t v) { kv_[key] = std::to_string(v); }
    void set(const std::string& key, int v) { kv_[key] = std::to_string(v); }

    std::string get(const std::string& key, const std::string& fallback = "") const {
        auto it = kv_.find(key);
        return it == kv_.end() ? fallback : it->second;
    }
    bool has(const std::string& key) const { return kv_.count(key) > 0; }

    std::string canonical() const {
        std::string out;
        for (const auto& [k, v] : kv_) out += k + "=" + v + "\n";
        return out;
    }
    std::uint64_t hash() const { return fnv1a64(canonical()); }
    const std::map<std::string, std::string>& entries() const { return kv_; }

  private:
    std::map<std::string, std::string> kv_;  // ordered => canonical
};

class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::string& tool, const RunConfig& cfg,
              const std::vector<std::string>& columns)
        : out_(path) {
        if (!out_) throw resource_error("csv: cannot open " + path);
        out_ << "# mdlab " << tool << "\n";
        out_ << "# config_hash=" << std::hex << cfg.hash() << std::dec << "\n";
        if (cfg.has("seed")) out_ << "# seed=" << cfg.get("seed") << "\n";
        out_ << std::setprecision(17);
        for (std::size_t i = 0; i < columns.size(); ++i)
            out_ << (i ? "," : "") << columns[i];
        out_ << "\n";
    }

    template <typename... Fields>
    void row(const Fields&... fields) {
        bool first = true;
        ((out_ << (first ? "" : ","), first = false, out_ << fields), ...);
        out_ << "\n";
    }

    void comment(const std::string& line) { out_ << "# " << line << "\n"; }

    void close() {
        out_.close();
        if (out_.fail()) throw resource_error("csv: write failed");
    }

  private:
    std::ofstream out_;
};

}  // namespace mdlab
