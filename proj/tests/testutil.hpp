#pragma once

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "certicos/vecstore.hpp"

namespace testutil {

// Scratch directory removed on destruction.
class TempDir {
  public:
    TempDir() {
        auto base = std::filesystem::temp_directory_path();
        for (int attempt = 0;; ++attempt) {
            auto candidate = base / ("certicos_test_" + std::to_string(::getpid()) + "_" +
                                     std::to_string(counter_++) + "_" + std::to_string(attempt));
            std::error_code ec;
            if (std::filesystem::create_directory(candidate, ec)) {
                path_ = candidate;
                return;
            }
        }
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    std::string file(const std::string& name) const { return (path_ / name).string(); }
    const std::filesystem::path& path() const { return path_; }

  private:
    static inline int counter_ = 0;
    std::filesystem::path path_;
};

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

inline std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

// 2D unit vector at the given angle in degrees; the building block of the
// hand-checkable fixtures.
inline std::vector<float> at_deg(double deg) {
    double rad = deg * 3.14159265358979323846 / 180.0;
    return {static_cast<float>(std::cos(rad)), static_cast<float>(std::sin(rad))};
}

inline certicos::UnitVectorSet set_from_rows(const std::vector<std::vector<float>>& rows) {
    std::vector<float> flat;
    for (const auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
    return certicos::make_vector_set(rows.size(), static_cast<uint32_t>(rows[0].size()),
                                     std::move(flat), /*normalize=*/true);
}

// Runs a command line, returns the exit status (or -1 if it did not exit
// normally).
inline int run_cmd(const std::string& cmd) {
    int rc = std::system(cmd.c_str());
    if (rc == -1) return -1;
#ifdef WIFEXITED
    if (WIFEXITED(rc)) return WEXITSTATUS(rc);
    return -1;
#else
    return rc;
#endif
}

}  // namespace testutil
