#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

// Shared helpers for the test suites: scratch files and tiny fixtures.
namespace testutil {

/// Writes content to a unique scratch file and returns its path.
inline std::string write_temp(const std::string& stem, const std::string& content) {
    static std::atomic<int> counter{0};
    auto dir = std::filesystem::temp_directory_path() / "orem_tests";
    std::filesystem::create_directories(dir);
    auto path = dir / (stem + "_" + std::to_string(counter++) + ".tmp");
    std::ofstream out(path);
    out << content;
    return path.string();
}

inline std::string timestamp(int year, int month, int day, int hour) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d %02d:00:00", year, month, day, hour);
    return buf;
}

}  // namespace testutil
