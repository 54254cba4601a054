#pragma once

#include "emgstand/linalg.hpp"
#include "emgstand/signal.hpp"

#include <atomic>
#include <filesystem>
#include <random>
#include <string>
#include <unistd.h>
#include <vector>

namespace testutil {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
  public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("emgstand_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    [[nodiscard]] const std::filesystem::path& path() const noexcept { return path_; }
    [[nodiscard]] std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

  private:
    std::filesystem::path path_;
};

inline std::vector<double> gaussian(std::size_t n, std::mt19937_64& gen, double sd = 1.0) {
    std::normal_distribution<double> d(0.0, sd);
    std::vector<double> v(n);
    for (double& x : v) x = d(gen);
    return v;
}

inline emgstand::Matrix gaussian_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& gen) {
    emgstand::Matrix m(rows, cols);
    std::normal_distribution<double> d(0.0, 1.0);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = d(gen);
    }
    return m;
}

/// Recording with white Gaussian noise on the given channels.
inline emgstand::Recording noise_recording(const std::vector<emgstand::MuscleLabel>& channels, std::size_t n,
                                           std::uint64_t seed, std::string id = "t", double rate = 2000.0) {
    std::mt19937_64 gen(seed);
    std::vector<std::vector<double>> samples;
    for (std::size_t c = 0; c < channels.size(); ++c) samples.push_back(gaussian(n, gen));
    return emgstand::Recording(std::move(id), rate, channels, std::move(samples));
}

}  // namespace testutil
